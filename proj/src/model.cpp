#include "bcsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bcsbm/error.hpp"

namespace bcsbm {

double NormalizationResiduals::max() const {
  return std::max({membership, block, attribute, asymmetry});
}

NormalizationResiduals normalization_residuals(const ModelParams& params, const NodeWeights& weights) {
  NormalizationResiduals res;
  const auto n = params.membership.rows();
  const auto c = params.membership.cols();
  for (Eigen::Index r = 0; r < c; ++r) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mass += weights.delta[static_cast<std::size_t>(i)] * params.membership(i, r);
    res.membership = std::max(res.membership, std::abs(mass - 1.0));
  }
  res.block = std::abs(params.block.sum() - 1.0);
  res.asymmetry = (params.block - params.block.transpose()).cwiseAbs().maxCoeff();
  if (params.attribute.cols() > 0) {
    for (Eigen::Index r = 0; r < params.attribute.rows(); ++r) {
      res.attribute = std::max(res.attribute, std::abs(params.attribute.row(r).sum() - 1.0));
    }
  }
  res.min_entry = std::min(params.membership.minCoeff(), params.block.minCoeff());
  if (params.attribute.size() > 0) res.min_entry = std::min(res.min_entry, params.attribute.minCoeff());
  return res;
}

namespace {

// Community mass S_r = sum_i delta_i d_ir.
Eigen::VectorXd community_mass(const NodeWeights& weights, const ModelParams& params) {
  const auto c = params.membership.cols();
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(c);
  for (Eigen::Index i = 0; i < params.membership.rows(); ++i) {
    const double w = weights.delta[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    for (Eigen::Index r = 0; r < c; ++r) mass[r] += w * params.membership(i, r);
  }
  return mass;
}

void check_shapes(const AttributedNetwork& net, const NodeWeights& weights, const ModelParams& params) {
  const auto n = static_cast<Eigen::Index>(net.num_nodes());
  const auto c = params.block.rows();
  if (params.membership.rows() != n || weights.size() != net.num_nodes() ||
      params.membership.cols() != c || params.block.cols() != c ||
      params.attribute.rows() != c ||
      params.attribute.cols() != static_cast<Eigen::Index>(net.num_attributes())) {
    throw std::invalid_argument("model parameter shapes do not match the network");
  }
}

std::string edge_name(const AttributedNetwork& net, const Edge& e) {
  return "(" + net.node_names()[e.u] + ", " + net.node_names()[e.v] + ")";
}

// Raises entries of `values` below `floor` and rescales to unit sum.
void floor_and_normalize(std::span<double> values, double floor, std::size_t* hits) {
  bool raised = false;
  for (double& x : values) {
    if (x < floor) {
      x = floor;
      raised = true;
      if (hits) ++*hits;
    }
  }
  if (raised) {
    double total = 0.0;
    for (double x : values) total += x;
    for (double& x : values) x /= total;
  }
}

}  // namespace

ExpectedMass expected_mass(const NodeWeights& weights, const ModelParams& params) {
  const Eigen::VectorXd mass = community_mass(weights, params);
  ExpectedMass out;
  out.links = 0.5 * mass.dot(params.block * mass);
  if (params.attribute.cols() > 0) out.attributes = mass.dot(params.attribute.rowwise().sum());
  return out;
}

double log_likelihood(const AttributedNetwork& net, const NodeWeights& weights,
                      const ModelParams& params) {
  check_shapes(net, weights, params);
  const auto c = params.block.rows();
  const Matrix& d = params.membership;
  const Matrix d_theta = d * params.block;

  double total = 0.0;
  for (const Edge& e : net.edges()) {
    const double rate = weights.delta[e.u] * weights.delta[e.v] * d.row(e.u).dot(d_theta.row(e.v));
    if (!(rate > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(rate);
  }
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    if (!weights.active(i)) continue;
    for (AttributeIndex k : net.attributes(i)) {
      double rate = 0.0;
      for (Eigen::Index r = 0; r < c; ++r) rate += d(i, r) * params.attribute(r, k);
      rate *= weights.delta[i];
      if (!(rate > 0.0)) return -std::numeric_limits<double>::infinity();
      total += std::log(rate);
    }
  }
  const ExpectedMass mass = expected_mass(weights, params);
  return total - mass.links - mass.attributes;
}

double lower_bound(const AttributedNetwork& net, const NodeWeights& weights,
                   const ModelParams& params, const Responsibilities& resp) {
  check_shapes(net, weights, params);
  const auto c = static_cast<std::size_t>(params.block.rows());
  if (resp.num_communities != c) throw std::invalid_argument("responsibilities use a different c");
  const Matrix& d = params.membership;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  double total = 0.0;
  const auto edges = net.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    const auto q = resp.link_block(e);
    for (std::size_t r = 0; r < c; ++r) {
      for (std::size_t s = 0; s < c; ++s) {
        const double weight = q[r * c + s];
        if (weight <= 0.0) continue;
        const double rate = weights.delta[u] * d(u, r) * params.block(r, s) * weights.delta[v] * d(v, s);
        if (!(rate > 0.0)) return neg_inf;
        total += weight * (std::log(rate) - std::log(weight));
      }
    }
  }
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    if (!weights.active(i)) continue;
    const auto attrs = net.attributes(i);
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const auto gamma = resp.attribute_block(net.attribute_offset(i) + a);
      for (std::size_t r = 0; r < c; ++r) {
        if (gamma[r] <= 0.0) continue;
        const double rate = weights.delta[i] * d(i, r) * params.attribute(r, attrs[a]);
        if (!(rate > 0.0)) return neg_inf;
        total += gamma[r] * (std::log(rate) - std::log(gamma[r]));
      }
    }
  }
  const ExpectedMass mass = expected_mass(weights, params);
  return total - mass.links - mass.attributes;
}

Responsibilities e_step(const AttributedNetwork& net, const NodeWeights& weights,
                        const ModelParams& params) {
  check_shapes(net, weights, params);
  const auto c = static_cast<std::size_t>(params.block.rows());
  const Matrix& d = params.membership;
  Responsibilities resp;
  resp.num_communities = c;
  resp.link.assign(net.num_edges() * c * c, 0.0);
  resp.attribute.assign(net.num_attribute_entries() * c, 0.0);

  const auto edges = net.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    double* q = resp.link.data() + e * c * c;
    double total = 0.0;
    for (std::size_t r = 0; r < c; ++r) {
      const double left = weights.delta[u] * d(u, r);
      for (std::size_t s = 0; s < c; ++s) {
        const double rate = left * params.block(r, s) * weights.delta[v] * d(v, s);
        q[r * c + s] = rate;
        total += rate;
      }
    }
    if (!(total > 0.0)) {
      throw NumericError("zero link rate on edge " + edge_name(net, edges[e]));
    }
    for (std::size_t rs = 0; rs < c * c; ++rs) q[rs] /= total;
  }

  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    if (!weights.active(i)) continue;
    const auto attrs = net.attributes(i);
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      double* gamma = resp.attribute.data() + (net.attribute_offset(i) + a) * c;
      double total = 0.0;
      for (std::size_t r = 0; r < c; ++r) {
        gamma[r] = weights.delta[i] * d(i, r) * params.attribute(r, attrs[a]);
        total += gamma[r];
      }
      if (!(total > 0.0)) {
        throw NumericError("zero attribute rate for node " + net.node_names()[i] + ", attribute " +
                           std::to_string(attrs[a]));
      }
      for (std::size_t r = 0; r < c; ++r) gamma[r] /= total;
    }
  }
  return resp;
}

std::string_view to_string(MembershipUpdate update) {
  switch (update) {
    case MembershipUpdate::lower_bound_maximizer: return "lower-bound-maximizer";
    case MembershipUpdate::doubled_attributes: return "doubled-attributes";
  }
  return "?";
}

MembershipUpdate parse_membership_update(std::string_view text) {
  if (text == "lower-bound-maximizer") return MembershipUpdate::lower_bound_maximizer;
  if (text == "doubled-attributes") return MembershipUpdate::doubled_attributes;
  throw std::invalid_argument("unknown membership update '" + std::string(text) + "'");
}

ModelParams m_step(const AttributedNetwork& net, const NodeWeights& weights,
                   const Responsibilities& resp, const MStepOptions& options,
                   std::size_t* floor_hits) {
  const std::size_t n = net.num_nodes();
  const std::size_t c = resp.num_communities;
  const std::size_t K = net.num_attributes();
  if (c == 0) throw std::invalid_argument("responsibilities have no communities");
  if (weights.size() != n || resp.link.size() != net.num_edges() * c * c ||
      resp.attribute.size() != net.num_attribute_entries() * c) {
    throw std::invalid_argument("responsibilities do not match the network");
  }
  const double attribute_weight =
      options.membership_update == MembershipUpdate::doubled_attributes ? 2.0 : 1.0;

  // node_mass(i, r): expected number of link ends and attribute draws of node i in r.
  Matrix node_mass = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
  Matrix block_mass = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  Matrix attr_mass = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(K));

  const auto edges = net.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    const auto q = resp.link_block(e);
    for (std::size_t r = 0; r < c; ++r) {
      for (std::size_t s = 0; s < c; ++s) {
        const double x = q[r * c + s];
        node_mass(u, r) += x;
        node_mass(v, s) += x;
        block_mass(r, s) += x;
        block_mass(s, r) += x;
      }
    }
  }
  for (NodeIndex i = 0; i < n; ++i) {
    const auto attrs = net.attributes(i);
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const auto gamma = resp.attribute_block(net.attribute_offset(i) + a);
      for (std::size_t r = 0; r < c; ++r) {
        node_mass(i, r) += attribute_weight * gamma[r];
        attr_mass(r, attrs[a]) += gamma[r];
      }
    }
  }

  ModelParams out;
  out.membership = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
  std::size_t active = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    if (weights.active(i)) {
      ++active;
    } else if (node_mass.row(i).sum() > 0.0) {
      throw NumericError("node " + net.node_names()[i] +
                         " has zero weight but carries responsibility mass");
    }
  }
  if (active == 0) throw NumericError("every node has zero weight");

  // Work in b_ir = delta_i d_ir, where the constraint is a plain simplex per community.
  std::vector<double> column(active);
  for (std::size_t r = 0; r < c; ++r) {
    double total = 0.0;
    for (NodeIndex i = 0; i < n; ++i) total += node_mass(i, r);
    std::size_t slot = 0;
    for (NodeIndex i = 0; i < n; ++i) {
      if (!weights.active(i)) continue;
      column[slot++] = total > 0.0 ? node_mass(i, r) / total : 1.0 / static_cast<double>(active);
    }
    floor_and_normalize(column, options.floor, floor_hits);
    slot = 0;
    for (NodeIndex i = 0; i < n; ++i) {
      if (!weights.active(i)) continue;
      out.membership(i, r) = column[slot++] / weights.delta[i];
    }
  }

  const double links = block_mass.sum();
  out.block = links > 0.0 ? Matrix(block_mass / links)
                          : Matrix::Constant(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c),
                                             1.0 / static_cast<double>(c * c));
  {
    std::span<double> flat(out.block.data(), c * c);
    floor_and_normalize(flat, options.floor, floor_hits);
    // Flooring is symmetric, but division can leave rounding-level asymmetry.
    out.block = 0.5 * (out.block + out.block.transpose()).eval();
  }

  out.attribute = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(K));
  if (K > 0) {
    for (std::size_t r = 0; r < c; ++r) {
      const double total = attr_mass.row(static_cast<Eigen::Index>(r)).sum();
      for (std::size_t k = 0; k < K; ++k) {
        out.attribute(r, k) = total > 0.0 ? attr_mass(r, k) / total : 1.0 / static_cast<double>(K);
      }
      floor_and_normalize({out.attribute.data() + r * K, K}, options.floor, floor_hits);
    }
  }
  return out;
}

std::string_view to_string(InitScheme scheme) {
  switch (scheme) {
    case InitScheme::automatic: return "auto";
    case InitScheme::assortative: return "assortative";
    case InitScheme::disassortative: return "disassortative";
    case InitScheme::uniform: return "uniform";
  }
  return "?";
}

InitScheme parse_init_scheme(std::string_view text) {
  if (text == "auto") return InitScheme::automatic;
  if (text == "assortative") return InitScheme::assortative;
  if (text == "disassortative") return InitScheme::disassortative;
  if (text == "uniform") return InitScheme::uniform;
  throw std::invalid_argument("unknown init scheme '" + std::string(text) + "'");
}

ModelParams init_params(const AttributedNetwork& net, const NodeWeights& weights,
                        std::size_t communities, InitScheme scheme, std::mt19937_64& rng,
                        const InitOptions& options) {
  if (scheme == InitScheme::automatic) {
    throw std::invalid_argument("init_params needs a concrete scheme");
  }
  const std::size_t n = net.num_nodes();
  const std::size_t c = communities;
  const std::size_t K = net.num_attributes();
  if (c == 0) throw std::invalid_argument("community count must be positive");
  if (weights.size() != n) throw std::invalid_argument("weights do not match the network");

  // Lower bound keeps every entry strictly positive: EM never revives a zero.
  std::uniform_real_distribution<double> positive(1e-6, 1.0);
  std::uniform_real_distribution<double> high(0.6, 1.0);
  std::uniform_real_distribution<double> low(0.01, 0.4);
  std::uniform_real_distribution<double> jitter(-options.uniform_jitter, options.uniform_jitter);

  ModelParams p;
  p.membership = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
  for (NodeIndex i = 0; i < n; ++i) {
    if (!weights.active(i)) continue;
    for (std::size_t r = 0; r < c; ++r) p.membership(i, r) = positive(rng);
  }
  for (std::size_t r = 0; r < c; ++r) {
    double mass = 0.0;
    for (NodeIndex i = 0; i < n; ++i) mass += weights.delta[i] * p.membership(i, r);
    if (!(mass > 0.0)) throw NumericError("every node has zero weight; no usable starting point");
    p.membership.col(static_cast<Eigen::Index>(r)) /= mass;
  }

  // Upper triangle drawn once, mirrored, so the block matrix is symmetric.
  p.block = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  for (std::size_t r = 0; r < c; ++r) {
    for (std::size_t s = r; s < c; ++s) {
      double value = 0.0;
      switch (scheme) {
        case InitScheme::assortative: value = r == s ? high(rng) : low(rng); break;
        case InitScheme::disassortative: value = r == s ? low(rng) : high(rng); break;
        case InitScheme::uniform: value = 0.5 * (1.0 + jitter(rng)); break;
        case InitScheme::automatic: break;
      }
      p.block(r, s) = value;
      p.block(s, r) = value;
    }
  }
  p.block /= p.block.sum();

  p.attribute = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(K));
  if (K > 0) {
    for (std::size_t r = 0; r < c; ++r) {
      for (std::size_t k = 0; k < K; ++k) p.attribute(r, k) = positive(rng);
      p.attribute.row(static_cast<Eigen::Index>(r)) /= p.attribute.row(static_cast<Eigen::Index>(r)).sum();
    }
  }
  return p;
}

Matrix partition_scores(const ModelParams& params) {
  const Eigen::VectorXd row_sums = params.block.rowwise().sum();
  Matrix scores = params.membership;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    scores.row(i) = scores.row(i).cwiseProduct(row_sums.transpose());
    const double total = scores.row(i).sum();
    if (total > 0.0) scores.row(i) /= total;
  }
  return scores;
}

HardPartition hard_partition(const ModelParams& params) {
  const Matrix scores = partition_scores(params);
  HardPartition out;
  out.partition.num_communities = params.num_communities();
  out.partition.assignment.resize(static_cast<std::size_t>(scores.rows()), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    CommunityIndex best = 0;
    for (Eigen::Index r = 1; r < scores.cols(); ++r) {
      if (scores(i, r) > scores(i, best)) best = static_cast<CommunityIndex>(r);
    }
    if (!(scores(i, best) > 0.0)) out.unassigned.push_back(static_cast<NodeIndex>(i));
    out.partition.assignment[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace bcsbm
