#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bcsbm/model.hpp"

namespace bcsbm {

struct FitConfig {
  std::size_t communities = 2;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  std::size_t restarts = 30;
  std::uint64_t seed = 0;
  InitScheme init_scheme = InitScheme::automatic;
  WeightMode weight_mode = WeightMode::bc;
  bool normalized_betweenness = false;
  // Scheme selection for init_scheme == automatic: probe_runs short runs per scheme.
  std::size_t probe_runs = 10;
  std::size_t probe_max_iter = 50;
  MembershipUpdate membership_update = MembershipUpdate::lower_bound_maximizer;
  double uniform_jitter = 0.1;
  // Restart-level parallelism; results do not depend on it.
  unsigned threads = 1;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate(std::size_t num_nodes) const;
};

/// One EM run from a given starting point.
struct EmRun {
  ModelParams params;
  std::vector<double> trace;  // log-likelihood before the first and after every iteration
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t floor_hits = 0;
};

/// Alternates E and M steps until |L(t) - L(t-1)| < tol or max_iter
/// iterations. Throws NumericError if the likelihood becomes -infinity.
EmRun run_em(const AttributedNetwork& net, const NodeWeights& weights, ModelParams start,
             std::size_t max_iter, double tol, const MStepOptions& options = {});

struct RestartRecord {
  InitScheme scheme = InitScheme::uniform;
  double final_log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t floor_hits = 0;
  std::vector<double> trace;
  Partition partition;
};

struct SchemeProbe {
  InitScheme scheme = InitScheme::uniform;
  std::vector<double> final_log_likelihoods;
  double mean_log_likelihood = 0.0;
};

struct FitResult {
  ModelParams params;                       // best restart
  std::vector<double> log_likelihood_trace;  // best restart
  Partition partition;                      // best restart
  std::vector<NodeIndex> unassigned_nodes;  // zero score rows, placed in community 0
  std::vector<RestartRecord> restarts;
  std::size_t best_restart = 0;
  InitScheme chosen_scheme = InitScheme::uniform;
  std::vector<SchemeProbe> probes;  // empty unless the scheme was chosen automatically
  NodeWeights weights;
};

/// Independent generator for (seed, purpose, a, b); used for restarts and probes.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a,
                            std::uint64_t b = 0);

FitResult fit(const AttributedNetwork& net, const FitConfig& config);

/// Same as above with precomputed weights; config.weight_mode and
/// config.normalized_betweenness are ignored.
FitResult fit(const AttributedNetwork& net, const NodeWeights& weights, const FitConfig& config);

}  // namespace bcsbm
