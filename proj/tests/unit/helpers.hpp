#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "bcsbm/network.hpp"

namespace bcsbm::test {

inline AttributedNetwork make_net(std::size_t n, std::initializer_list<std::pair<NodeIndex, NodeIndex>> edges,
                                  std::size_t K = 0, std::vector<std::vector<AttributeIndex>> attrs = {}) {
  NetworkInput in;
  in.num_nodes = n;
  in.edges.assign(edges.begin(), edges.end());
  in.num_attributes = K;
  in.attributes = std::move(attrs);
  return build_network(std::move(in)).network;
}

inline AttributedNetwork path3() { return make_net(3, {{0, 1}, {1, 2}}); }
inline AttributedNetwork triangle() { return make_net(3, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace bcsbm::test
