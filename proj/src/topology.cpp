#include "bcsbm/topology.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>

namespace bcsbm {

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::bc: return "bc";
    case WeightMode::degree: return "degree";
    case WeightMode::unit: return "unit";
  }
  return "?";
}

WeightMode parse_weight_mode(std::string_view text) {
  if (text == "bc") return WeightMode::bc;
  if (text == "degree") return WeightMode::degree;
  if (text == "unit") return WeightMode::unit;
  throw std::invalid_argument("unknown weight mode '" + std::string(text) + "'");
}

std::vector<std::size_t> degrees(const AttributedNetwork& net) {
  std::vector<std::size_t> k(net.num_nodes());
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) k[i] = net.degree(i);
  return k;
}

std::vector<double> clustering_coefficients(const AttributedNetwork& net) {
  const std::size_t n = net.num_nodes();
  std::vector<double> c(n, 0.0);
  std::vector<char> mark(n, 0);
  for (NodeIndex i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (NodeIndex j : net.neighbors(i)) {
      if (j != i) {
        mark[j] = 1;
        ++k;
      }
    }
    if (k >= 2) {
      // Each link among neighbors is seen from both endpoints.
      std::size_t twice_links = 0;
      for (NodeIndex j : net.neighbors(i)) {
        if (j == i) continue;
        for (NodeIndex h : net.neighbors(j)) {
          if (h != j && h != i && mark[h]) ++twice_links;
        }
      }
      c[i] = static_cast<double>(twice_links) / static_cast<double>(k * (k - 1));
    }
    for (NodeIndex j : net.neighbors(i)) mark[j] = 0;
  }
  return c;
}

namespace {

constexpr std::size_t kSourceBlock = 32;

// Single-source dependency accumulation; adds delta_s(v) into `acc`.
class BrandesWorkspace {
 public:
  explicit BrandesWorkspace(std::size_t n)
      : sigma_(n), dist_(n), delta_(n), order_(), queue_(n) {
    order_.reserve(n);
  }

  void accumulate(const AttributedNetwork& net, NodeIndex s, std::vector<double>& acc) {
    std::fill(sigma_.begin(), sigma_.end(), 0.0);
    std::fill(dist_.begin(), dist_.end(), -1);
    std::fill(delta_.begin(), delta_.end(), 0.0);
    order_.clear();

    sigma_[s] = 1.0;
    dist_[s] = 0;
    std::size_t head = 0, tail = 0;
    queue_[tail++] = s;
    while (head < tail) {
      NodeIndex v = queue_[head++];
      order_.push_back(v);
      for (NodeIndex w : net.neighbors(v)) {
        if (w == v) continue;
        if (dist_[w] < 0) {
          dist_[w] = dist_[v] + 1;
          queue_[tail++] = w;
        }
        if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      NodeIndex w = *it;
      for (NodeIndex v : net.neighbors(w)) {
        if (v != w && dist_[v] == dist_[w] - 1) {
          delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
        }
      }
      if (w != s) acc[w] += delta_[w];
    }
  }

 private:
  std::vector<double> sigma_;
  std::vector<long> dist_;
  std::vector<double> delta_;
  std::vector<NodeIndex> order_;
  std::vector<NodeIndex> queue_;
};

}  // namespace

std::vector<double> betweenness(const AttributedNetwork& net, bool normalized, unsigned threads) {
  const std::size_t n = net.num_nodes();
  std::vector<double> result(n, 0.0);
  if (n == 0) return result;

  const std::size_t num_blocks = (n + kSourceBlock - 1) / kSourceBlock;
  std::vector<std::vector<double>> partial(num_blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    BrandesWorkspace ws(n);
    for (std::size_t block = next++; block < num_blocks; block = next++) {
      std::vector<double> acc(n, 0.0);
      const std::size_t end = std::min(n, (block + 1) * kSourceBlock);
      for (std::size_t s = block * kSourceBlock; s < end; ++s) {
        ws.accumulate(net, static_cast<NodeIndex>(s), acc);
      }
      partial[block] = std::move(acc);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(num_blocks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < n; ++i) result[i] += acc[i];
  }

  // Every unordered pair was counted from both ends.
  double scale = 0.5;
  if (normalized) {
    scale = n >= 3 ? 0.5 / (static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0) : 0.0;
  }
  for (double& b : result) b *= scale;
  return result;
}

NodeWeights node_weights(const AttributedNetwork& net, WeightMode mode,
                         bool normalized_betweenness, unsigned threads) {
  NodeWeights w;
  w.mode = mode;
  w.normalized_betweenness = normalized_betweenness;
  auto k = degrees(net);
  w.k.assign(k.begin(), k.end());
  w.c = clustering_coefficients(net);
  w.b = betweenness(net, normalized_betweenness, threads);
  const std::size_t n = net.num_nodes();
  w.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (mode) {
      case WeightMode::bc: w.delta[i] = w.k[i] + w.c[i] + w.b[i]; break;
      case WeightMode::degree: w.delta[i] = w.k[i]; break;
      case WeightMode::unit: w.delta[i] = 1.0; break;
    }
  }
  return w;
}

}  // namespace bcsbm
