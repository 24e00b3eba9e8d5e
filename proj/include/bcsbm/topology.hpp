#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bcsbm/network.hpp"

namespace bcsbm {

/// How the per-node weight delta_i is composed from the topology statistics.
///   bc     : delta_i = k_i + c_i + b_i
///   degree : delta_i = k_i
///   unit   : delta_i = 1
enum class WeightMode { bc, degree, unit };

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view text);

struct NodeWeights {
  std::vector<double> k;
  std::vector<double> c;
  std::vector<double> b;
  std::vector<double> delta;
  WeightMode mode = WeightMode::bc;
  bool normalized_betweenness = false;

  std::size_t size() const { return delta.size(); }
  /// Nodes with delta_i == 0 take no part in the likelihood.
  bool active(NodeIndex i) const { return delta[i] > 0.0; }
};

/// Degree with a self-loop counted twice.
std::vector<std::size_t> degrees(const AttributedNetwork& net);

/// Local clustering coefficient 2 l_i / (k_i (k_i - 1)) over distinct
/// non-self neighbors; 0 when fewer than two such neighbors.
std::vector<double> clustering_coefficients(const AttributedNetwork& net);

/// Exact betweenness over unordered pairs {s, t} (Brandes). With `normalized`
/// the values are divided by (n-1)(n-2)/2. Self-loops are ignored.
///
/// Sources are processed in fixed-size blocks that are reduced in block order,
/// so the result does not depend on `threads`.
std::vector<double> betweenness(const AttributedNetwork& net, bool normalized,
                                unsigned threads = 1);

NodeWeights node_weights(const AttributedNetwork& net, WeightMode mode,
                         bool normalized_betweenness, unsigned threads = 1);

}  // namespace bcsbm
