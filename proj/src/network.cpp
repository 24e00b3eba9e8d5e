#include "bcsbm/network.hpp"

#include <algorithm>
#include <unordered_map>

#include "bcsbm/error.hpp"

namespace bcsbm {

Partition Partition::from_labels(std::span<const std::int64_t> labels) {
  Partition p;
  p.assignment.reserve(labels.size());
  std::unordered_map<std::int64_t, CommunityIndex> dense;
  for (auto label : labels) {
    auto [it, inserted] = dense.try_emplace(label, static_cast<CommunityIndex>(dense.size()));
    p.assignment.push_back(it->second);
  }
  p.num_communities = dense.size();
  return p;
}

std::size_t AttributedNetwork::degree(NodeIndex i) const {
  auto nbrs = neighbors(i);
  return nbrs.size() + (has_self_loop(i) ? 1 : 0);
}

bool AttributedNetwork::has_self_loop(NodeIndex i) const { return has_edge(i, i); }

bool AttributedNetwork::has_edge(NodeIndex i, NodeIndex j) const {
  auto nbrs = neighbors(i);
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

AttributedNetwork AttributedNetwork::with_labels(Partition labels,
                                                 std::vector<std::string> names) const {
  if (labels.size() != num_nodes()) {
    throw DataError("label count " + std::to_string(labels.size()) +
                    " does not match node count " + std::to_string(num_nodes()));
  }
  AttributedNetwork copy = *this;
  copy.labels_ = std::move(labels);
  copy.label_names_ = std::move(names);
  return copy;
}

BuiltNetwork build_network(NetworkInput input) {
  const std::size_t n = input.num_nodes;
  BuiltNetwork out;
  AttributedNetwork& net = out.network;

  std::vector<Edge> edges;
  edges.reserve(input.edges.size());
  for (auto [a, b] : input.edges) {
    if (a >= n || b >= n) {
      throw DataError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") references a node outside 0.." + std::to_string(n) + "-1");
    }
    edges.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return std::pair(x.u, x.v) < std::pair(y.u, y.v); });
  auto unique_end = std::unique(edges.begin(), edges.end());
  out.report.duplicate_edges = static_cast<std::size_t>(edges.end() - unique_end);
  edges.erase(unique_end, edges.end());

  std::vector<std::size_t> counts(n, 0);
  for (const Edge& e : edges) {
    ++counts[e.u];
    if (!e.is_self_loop()) ++counts[e.v];
    else ++net.num_self_loops_;
  }
  net.neighbor_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) net.neighbor_offsets_[i + 1] = net.neighbor_offsets_[i] + counts[i];
  net.neighbor_values_.resize(net.neighbor_offsets_[n]);
  std::vector<std::size_t> cursor(net.neighbor_offsets_.begin(), net.neighbor_offsets_.end() - 1);
  for (const Edge& e : edges) {
    net.neighbor_values_[cursor[e.u]++] = e.v;
    if (!e.is_self_loop()) net.neighbor_values_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(net.neighbor_values_.begin() + static_cast<std::ptrdiff_t>(net.neighbor_offsets_[i]),
              net.neighbor_values_.begin() + static_cast<std::ptrdiff_t>(net.neighbor_offsets_[i + 1]));
  }
  net.edges_ = std::move(edges);

  if (!input.attributes.empty() && input.attributes.size() != n) {
    throw DataError("attribute rows (" + std::to_string(input.attributes.size()) +
                    ") do not match node count " + std::to_string(n));
  }
  const std::size_t K = input.num_attributes;
  net.num_attributes_ = K;
  net.attribute_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (input.attributes.empty()) {
      net.attribute_offsets_[i + 1] = net.attribute_offsets_[i];
      continue;
    }
    auto& row = input.attributes[i];
    for (AttributeIndex k : row) {
      if (k >= K) {
        throw DataError("node " + std::to_string(i) + " has attribute index " + std::to_string(k) +
                        " >= K = " + std::to_string(K));
      }
    }
    std::sort(row.begin(), row.end());
    auto end = std::unique(row.begin(), row.end());
    out.report.duplicate_attributes += static_cast<std::size_t>(row.end() - end);
    net.attribute_values_.insert(net.attribute_values_.end(), row.begin(), end);
    net.attribute_offsets_[i + 1] = net.attribute_values_.size();
  }

  if (input.labels) {
    if (input.labels->size() != n) {
      throw DataError("label count " + std::to_string(input.labels->size()) +
                      " does not match node count " + std::to_string(n));
    }
    net.labels_ = std::move(input.labels);
    net.label_names_ = std::move(input.label_names);
  }

  if (input.node_names.empty()) {
    net.node_names_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) net.node_names_.push_back(std::to_string(i));
  } else if (input.node_names.size() != n) {
    throw DataError("node name count does not match node count");
  } else {
    net.node_names_ = std::move(input.node_names);
  }
  return out;
}

NetworkInput to_input(const AttributedNetwork& net) {
  NetworkInput in;
  in.num_nodes = net.num_nodes();
  for (const Edge& e : net.edges()) in.edges.emplace_back(e.u, e.v);
  in.num_attributes = net.num_attributes();
  in.attributes.resize(net.num_nodes());
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    auto attrs = net.attributes(i);
    in.attributes[i].assign(attrs.begin(), attrs.end());
  }
  in.labels = net.labels();
  in.label_names = net.label_names();
  in.node_names = net.node_names();
  return in;
}

}  // namespace bcsbm
