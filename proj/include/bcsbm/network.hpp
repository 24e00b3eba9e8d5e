#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bcsbm {

using NodeIndex = std::uint32_t;
using AttributeIndex = std::uint32_t;
using CommunityIndex = std::uint32_t;

/// Undirected edge with u <= v. A self-loop has u == v.
struct Edge {
  NodeIndex u;
  NodeIndex v;

  bool is_self_loop() const { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Hard assignment of every node to exactly one community.
///
/// Communities are 0-based in memory; partition files written by the CLI use
/// 1-based community numbers.
struct Partition {
  std::vector<CommunityIndex> assignment;
  std::size_t num_communities = 0;

  std::size_t size() const { return assignment.size(); }

  /// Builds a partition from arbitrary integer labels, relabeling them densely
  /// in order of first appearance.
  static Partition from_labels(std::span<const std::int64_t> labels);

  friend bool operator==(const Partition&, const Partition&) = default;
};

class AttributedNetwork;

struct NetworkInput {
  std::size_t num_nodes = 0;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  std::size_t num_attributes = 0;
  // Either empty or one index list per node.
  std::vector<std::vector<AttributeIndex>> attributes;
  std::optional<Partition> labels;
  std::vector<std::string> label_names;
  // Original ids, retained for output. Defaults to "0".."n-1".
  std::vector<std::string> node_names;
};

struct BuildReport {
  std::size_t duplicate_edges = 0;
  std::size_t duplicate_attributes = 0;
};

struct BuiltNetwork;

/// Immutable undirected, unweighted network with binary node attributes.
///
/// Adjacency is stored as sorted CSR neighbor lists. A self-loop appears once
/// in its node's neighbor list and counts 2 towards the degree (a_ii = 2).
class AttributedNetwork {
 public:
  AttributedNetwork() = default;

  std::size_t num_nodes() const { return node_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_self_loops() const { return num_self_loops_; }
  std::size_t num_attributes() const { return num_attributes_; }
  std::size_t num_attribute_entries() const { return attribute_values_.size(); }

  std::span<const NodeIndex> neighbors(NodeIndex i) const {
    return {neighbor_values_.data() + neighbor_offsets_[i],
            neighbor_values_.data() + neighbor_offsets_[i + 1]};
  }
  std::size_t degree(NodeIndex i) const;
  bool has_self_loop(NodeIndex i) const;
  bool has_edge(NodeIndex i, NodeIndex j) const;

  std::span<const Edge> edges() const { return edges_; }

  std::span<const AttributeIndex> attributes(NodeIndex i) const {
    return {attribute_values_.data() + attribute_offsets_[i],
            attribute_values_.data() + attribute_offsets_[i + 1]};
  }
  /// Offset of node i's first attribute entry in the flat entry order.
  std::size_t attribute_offset(NodeIndex i) const { return attribute_offsets_[i]; }

  const std::optional<Partition>& labels() const { return labels_; }
  const std::vector<std::string>& label_names() const { return label_names_; }
  const std::vector<std::string>& node_names() const { return node_names_; }

  /// Returns a copy with ground-truth labels replaced.
  AttributedNetwork with_labels(Partition labels, std::vector<std::string> names = {}) const;

  friend bool operator==(const AttributedNetwork&, const AttributedNetwork&) = default;

 private:
  friend BuiltNetwork build_network(NetworkInput input);

  std::vector<std::size_t> neighbor_offsets_{0};
  std::vector<NodeIndex> neighbor_values_;
  std::vector<Edge> edges_;
  std::size_t num_self_loops_ = 0;
  std::size_t num_attributes_ = 0;
  std::vector<std::size_t> attribute_offsets_{0};
  std::vector<AttributeIndex> attribute_values_;
  std::optional<Partition> labels_;
  std::vector<std::string> label_names_;
  std::vector<std::string> node_names_;
};

struct BuiltNetwork {
  AttributedNetwork network;
  BuildReport report;
};

/// Validates and assembles a network from dense 0-based node ids.
/// Duplicate edges (in either orientation) and duplicate attribute entries are
/// collapsed and counted. Throws DataError on out-of-range ids or indices.
BuiltNetwork build_network(NetworkInput input);

/// Inverse of build_network, up to duplicate collapsing.
NetworkInput to_input(const AttributedNetwork& net);

}  // namespace bcsbm
