#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bcsbm/network.hpp"
#include "bcsbm/topology.hpp"

namespace bcsbm {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Model parameters of the node-weighted Poisson block model.
///
///   membership  n x c   d_ir, with sum_i delta_i d_ir = 1 for every r
///   block       c x c   theta_rs, symmetric, sum_rs theta_rs = 1
///   attribute   c x K   phi_rk, every row sums to 1 (when K > 0)
///
/// Nodes with delta_i == 0 carry d_ir = 0.
struct ModelParams {
  Matrix membership;
  Matrix block;
  Matrix attribute;

  std::size_t num_nodes() const { return static_cast<std::size_t>(membership.rows()); }
  std::size_t num_communities() const { return static_cast<std::size_t>(block.rows()); }
  std::size_t num_attributes() const { return static_cast<std::size_t>(attribute.cols()); }
};

/// Largest absolute deviation from each normalization constraint.
struct NormalizationResiduals {
  double membership = 0.0;  // max_r |sum_i delta_i d_ir - 1|
  double block = 0.0;       // |sum_rs theta_rs - 1|
  double attribute = 0.0;   // max_r |sum_k phi_rk - 1|
  double asymmetry = 0.0;   // max_rs |theta_rs - theta_sr|
  double min_entry = 0.0;   // smallest entry over all three matrices

  double max() const;
};

NormalizationResiduals normalization_residuals(const ModelParams& params, const NodeWeights& weights);

/// Posterior responsibilities from the E-step, stored sparsely.
///
/// `link` holds one c x c row-major block per edge of net.edges(); entry (r, s)
/// is the probability that edge.u sits in r and edge.v in s. `attribute` holds
/// one c-vector per attribute entry in the network's flat entry order; entries
/// of nodes with delta_i == 0 are excluded from the model and left at zero.
struct Responsibilities {
  std::size_t num_communities = 0;
  std::vector<double> link;
  std::vector<double> attribute;

  std::span<const double> link_block(std::size_t edge) const {
    const std::size_t cc = num_communities * num_communities;
    return {link.data() + edge * cc, cc};
  }
  std::span<const double> attribute_block(std::size_t entry) const {
    return {attribute.data() + entry * num_communities, num_communities};
  }
};

/// Model-implied expected counts summed over every node pair / node-attribute
/// cell: links = 1/2 sum_ij sum_rs delta_i d_ir theta_rs delta_j d_js and
/// attributes = sum_ik sum_r delta_i d_ir phi_rk. Normalized params give
/// exactly 1/2 and c (0 when K = 0).
struct ExpectedMass {
  double links = 0.0;
  double attributes = 0.0;
};

ExpectedMass expected_mass(const NodeWeights& weights, const ModelParams& params);

/// Log-likelihood up to parameter-independent constants. Returns -infinity when
/// an observed edge or attribute has zero model rate.
double log_likelihood(const AttributedNetwork& net, const NodeWeights& weights,
                      const ModelParams& params);

/// Jensen lower bound of the log-likelihood at `params` for the given
/// responsibilities. Terms with zero responsibility contribute 0.
double lower_bound(const AttributedNetwork& net, const NodeWeights& weights,
                   const ModelParams& params, const Responsibilities& resp);

/// Throws NumericError naming the entry if an observed edge or attribute has
/// zero total rate.
Responsibilities e_step(const AttributedNetwork& net, const NodeWeights& weights,
                        const ModelParams& params);

/// Rule for the membership update.
///   lower_bound_maximizer : d_ir proportional to (link mass + attribute mass) / delta_i,
///                           the exact constrained maximizer of the lower bound.
///   doubled_attributes    : attribute responsibilities weighted by 2 in numerator
///                           and denominator. Not a maximizer; kept for
///                           comparison runs only.
enum class MembershipUpdate { lower_bound_maximizer, doubled_attributes };

std::string_view to_string(MembershipUpdate update);
MembershipUpdate parse_membership_update(std::string_view text);

struct MStepOptions {
  MembershipUpdate membership_update = MembershipUpdate::lower_bound_maximizer;
  // Entries below this are raised to it (then renormalized) so later logs stay finite.
  double floor = 1e-12;
};

/// Closed-form maximizer of the lower bound. If `floor_hits` is given, it is
/// incremented once per entry raised to the floor.
ModelParams m_step(const AttributedNetwork& net, const NodeWeights& weights,
                   const Responsibilities& resp, const MStepOptions& options = {},
                   std::size_t* floor_hits = nullptr);

enum class InitScheme { automatic, assortative, disassortative, uniform };

std::string_view to_string(InitScheme scheme);
InitScheme parse_init_scheme(std::string_view text);

struct InitOptions {
  // Relative half-width of the jitter around the common value in the uniform scheme.
  double uniform_jitter = 0.1;
};

/// Random normalized starting point. Throws NumericError when every node has
/// zero weight. `scheme` must not be automatic.
ModelParams init_params(const AttributedNetwork& net, const NodeWeights& weights,
                        std::size_t communities, InitScheme scheme, std::mt19937_64& rng,
                        const InitOptions& options = {});

/// Row-normalized scores I_ir = d_ir sum_s theta_rs / sum_r' d_ir' sum_s theta_r's.
/// Rows with no mass are left at zero.
Matrix partition_scores(const ModelParams& params);

struct HardPartition {
  Partition partition;
  // Nodes whose score row was all zero; they are placed in community 0.
  std::vector<NodeIndex> unassigned;
};

/// argmax_r I_ir per node, ties to the smallest community index.
HardPartition hard_partition(const ModelParams& params);

}  // namespace bcsbm
