#include "bcsbm/generator.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "bcsbm/fit.hpp"

namespace bcsbm {

std::string_view to_string(BlockPattern pattern) {
  switch (pattern) {
    case BlockPattern::assortative: return "assortative";
    case BlockPattern::bipartite: return "bipartite";
    case BlockPattern::mixture: return "mixture";
  }
  return "?";
}

BlockPattern parse_block_pattern(std::string_view text) {
  if (text == "assortative") return BlockPattern::assortative;
  if (text == "bipartite") return BlockPattern::bipartite;
  if (text == "mixture") return BlockPattern::mixture;
  throw std::invalid_argument("unknown block pattern '" + std::string(text) + "'");
}

void PlantedSpec::validate() const {
  if (n == 0) throw std::invalid_argument("planted network needs at least one node");
  if (c == 0 || c > n) throw std::invalid_argument("planted community count must lie in 1..n");
  if (!(intensity_ratio >= 0.0)) throw std::invalid_argument("intensity ratio must be >= 0");
  if (!(attribute_affinity >= 0.0)) throw std::invalid_argument("attribute affinity must be >= 0");
  if (!(attributes_per_node >= 0.0)) throw std::invalid_argument("attributes per node must be >= 0");
  if (!(edge_scale > 0.0)) throw std::invalid_argument("edge scale must be positive");
  if (!node_weights.empty()) {
    if (node_weights.size() != n) throw std::invalid_argument("node weight count must equal n");
    for (double w : node_weights) {
      if (!(w > 0.0)) throw std::invalid_argument("node weights must be positive");
    }
  }
  if (block_override) {
    if (block_override->rows() != static_cast<Eigen::Index>(c) ||
        block_override->cols() != static_cast<Eigen::Index>(c)) {
      throw std::invalid_argument("block override must be c x c");
    }
    if ((block_override->array() < 0.0).any()) throw std::invalid_argument("block intensities must be >= 0");
  }
}

Partition planted_labels(std::size_t n, std::size_t c) {
  Partition p;
  p.num_communities = c;
  p.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.assignment[i] = static_cast<CommunityIndex>(i * c / n);
  return p;
}

namespace {

Matrix pattern_block(BlockPattern pattern, std::size_t c, double ratio) {
  const auto cc = static_cast<Eigen::Index>(c);
  Matrix block = Matrix::Ones(cc, cc);
  switch (pattern) {
    case BlockPattern::assortative:
      for (Eigen::Index r = 0; r < cc; ++r) block(r, r) = ratio;
      break;
    case BlockPattern::bipartite:
      block = Matrix::Constant(cc, cc, ratio);
      for (Eigen::Index r = 0; r < cc; ++r) block(r, r) = 1.0;
      break;
    case BlockPattern::mixture:
      block(0, 0) = ratio;
      for (Eigen::Index r = 1; r < cc; r += 2) {
        if (r + 1 < cc) {
          block(r, r + 1) = ratio;
          block(r + 1, r) = ratio;
        } else {
          block(r, r) = ratio;
        }
      }
      break;
  }
  return block;
}

}  // namespace

ModelParams planted_params(const PlantedSpec& spec, const Partition& labels,
                           const std::vector<double>& weights) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto c = static_cast<Eigen::Index>(spec.c);
  const auto K = static_cast<Eigen::Index>(spec.num_attributes);
  ModelParams p;

  std::vector<double> community_weight(spec.c, 0.0);
  for (std::size_t i = 0; i < spec.n; ++i) community_weight[labels.assignment[i]] += weights[i];
  p.membership = Matrix::Zero(n, c);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto r = labels.assignment[i];
    p.membership(static_cast<Eigen::Index>(i), r) = 1.0 / community_weight[r];
  }

  if (spec.block_override) {
    p.block = *spec.block_override;
  } else {
    p.block = pattern_block(spec.pattern, spec.c, spec.intensity_ratio);
    const double total = p.block.sum();
    if (total > 0.0) p.block /= total;
  }

  p.attribute = Matrix::Zero(c, K);
  for (Eigen::Index r = 0; r < c; ++r) {
    for (Eigen::Index k = 0; k < K; ++k) p.attribute(r, k) = (k % c == r) ? spec.attribute_affinity : 1.0;
    const double total = p.attribute.row(r).sum();
    if (total > 0.0) p.attribute.row(r) /= total;
  }
  return p;
}

PlantedSample sample_network(const PlantedSpec& spec) {
  spec.validate();
  PlantedSample out;
  out.labels = planted_labels(spec.n, spec.c);
  out.weights = spec.node_weights.empty() ? std::vector<double>(spec.n, 1.0) : spec.node_weights;
  out.params = planted_params(spec, out.labels, out.weights);

  std::mt19937_64 rng = make_stream(spec.seed, 0x67656e, 0);
  auto draw = [&rng](double mean) -> std::size_t {
    if (!(mean > 0.0)) return 0;
    return static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
  };

  const Matrix& d = out.params.membership;
  const Matrix& theta = out.params.block;
  const auto& w = out.weights;
  const auto& label = out.labels.assignment;

  NetworkInput input;
  input.num_nodes = spec.n;
  for (NodeIndex i = 0; i < spec.n; ++i) {
    const double left = spec.edge_scale * w[i] * d(i, label[i]);
    for (NodeIndex j = i; j < spec.n; ++j) {
      double mean = left * theta(label[i], label[j]) * w[j] * d(j, label[j]);
      if (i == j) {
        if (!spec.self_loops) continue;
        mean *= 0.5;
      }
      const std::size_t count = draw(mean);
      if (count == 0) continue;
      out.raw_link_count += count;
      out.clamped_links += count - 1;
      input.edges.emplace_back(i, j);
    }
  }

  input.num_attributes = spec.num_attributes;
  if (spec.num_attributes > 0) {
    const double scale = spec.attributes_per_node * static_cast<double>(spec.n) / static_cast<double>(spec.c);
    input.attributes.resize(spec.n);
    for (NodeIndex i = 0; i < spec.n; ++i) {
      const double base = scale * w[i] * d(i, label[i]);
      for (AttributeIndex k = 0; k < spec.num_attributes; ++k) {
        const std::size_t count = draw(base * out.params.attribute(label[i], k));
        if (count == 0) continue;
        out.clamped_attributes += count - 1;
        input.attributes[i].push_back(k);
      }
    }
  }
  input.labels = out.labels;
  out.network = build_network(std::move(input)).network;
  return out;
}

}  // namespace bcsbm
