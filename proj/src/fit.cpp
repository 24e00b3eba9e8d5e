#include "bcsbm/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "bcsbm/error.hpp"

namespace bcsbm {

void FitConfig::validate(std::size_t num_nodes) const {
  if (communities < 1) throw std::invalid_argument("community count must be at least 1");
  if (communities > num_nodes) {
    throw std::invalid_argument("community count " + std::to_string(communities) +
                                " exceeds node count " + std::to_string(num_nodes));
  }
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (init_scheme == InitScheme::automatic && (probe_runs < 1 || probe_max_iter < 1)) {
    throw std::invalid_argument("automatic scheme selection needs probe runs");
  }
  if (!(uniform_jitter >= 0.0 && uniform_jitter < 1.0)) {
    throw std::invalid_argument("uniform_jitter must lie in [0, 1)");
  }
}

EmRun run_em(const AttributedNetwork& net, const NodeWeights& weights, ModelParams start,
             std::size_t max_iter, double tol, const MStepOptions& options) {
  EmRun run;
  run.params = std::move(start);
  double previous = log_likelihood(net, weights, run.params);
  if (std::isinf(previous)) throw NumericError("starting point has zero likelihood");
  run.trace.push_back(previous);
  for (std::size_t t = 1; t <= max_iter; ++t) {
    const Responsibilities resp = e_step(net, weights, run.params);
    run.params = m_step(net, weights, resp, options, &run.floor_hits);
    const double current = log_likelihood(net, weights, run.params);
    if (std::isinf(current) || std::isnan(current)) {
      throw NumericError("log-likelihood left the finite range at iteration " + std::to_string(t));
    }
    run.trace.push_back(current);
    run.iterations = t;
    if (std::abs(current - previous) < tol) {
      run.converged = true;
      break;
    }
    previous = current;
  }
  return run;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a, std::uint64_t b) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(purpose), lo(a), hi(a), lo(b), hi(b)};
  return std::mt19937_64(seq);
}

namespace {

enum StreamPurpose : std::uint64_t { kProbeStream = 1, kRestartStream = 2 };

// Runs task(0..count-1) on up to `threads` workers. Exceptions are rethrown
// in index order after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace

FitResult fit(const AttributedNetwork& net, const FitConfig& config) {
  config.validate(net.num_nodes());
  return fit(net, node_weights(net, config.weight_mode, config.normalized_betweenness, config.threads),
             config);
}

FitResult fit(const AttributedNetwork& net, const NodeWeights& weights, const FitConfig& config) {
  config.validate(net.num_nodes());
  if (weights.size() != net.num_nodes()) throw std::invalid_argument("weights do not match the network");
  const MStepOptions mstep{config.membership_update};
  const InitOptions init{config.uniform_jitter};

  FitResult result;
  result.weights = weights;
  result.chosen_scheme = config.init_scheme;

  if (config.init_scheme == InitScheme::automatic) {
    if (config.communities == 1) {
      // Every scheme gives the same 1x1 block matrix.
      result.chosen_scheme = InitScheme::uniform;
    } else {
      const InitScheme schemes[] = {InitScheme::assortative, InitScheme::disassortative,
                                    InitScheme::uniform};
      const std::size_t runs = config.probe_runs;
      std::vector<double> finals(3 * runs);
      parallel_for(finals.size(), config.threads, [&](std::size_t task) {
        const std::size_t scheme = task / runs;
        auto rng = make_stream(config.seed, kProbeStream, scheme, task % runs);
        ModelParams start = init_params(net, weights, config.communities, schemes[scheme], rng, init);
        finals[task] = run_em(net, weights, std::move(start), config.probe_max_iter, config.tol, mstep)
                           .trace.back();
      });
      std::size_t best = 0;
      for (std::size_t s = 0; s < 3; ++s) {
        SchemeProbe probe;
        probe.scheme = schemes[s];
        probe.final_log_likelihoods.assign(finals.begin() + static_cast<std::ptrdiff_t>(s * runs),
                                           finals.begin() + static_cast<std::ptrdiff_t>((s + 1) * runs));
        probe.mean_log_likelihood =
            std::accumulate(probe.final_log_likelihoods.begin(), probe.final_log_likelihoods.end(), 0.0) /
            static_cast<double>(runs);
        result.probes.push_back(std::move(probe));
        if (result.probes[s].mean_log_likelihood > result.probes[best].mean_log_likelihood) best = s;
      }
      result.chosen_scheme = schemes[best];
    }
  }

  std::vector<EmRun> runs(config.restarts);
  parallel_for(config.restarts, config.threads, [&](std::size_t restart) {
    auto rng = make_stream(config.seed, kRestartStream, restart);
    ModelParams start = init_params(net, weights, config.communities, result.chosen_scheme, rng, init);
    runs[restart] = run_em(net, weights, std::move(start), config.max_iter, config.tol, mstep);
  });

  result.restarts.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    RestartRecord record;
    record.scheme = result.chosen_scheme;
    record.final_log_likelihood = runs[r].trace.back();
    record.iterations = runs[r].iterations;
    record.converged = runs[r].converged;
    record.floor_hits = runs[r].floor_hits;
    record.trace = runs[r].trace;
    record.partition = hard_partition(runs[r].params).partition;
    result.restarts.push_back(std::move(record));
    if (result.restarts[r].final_log_likelihood > result.restarts[result.best_restart].final_log_likelihood) {
      result.best_restart = r;
    }
  }

  EmRun& best = runs[result.best_restart];
  HardPartition hard = hard_partition(best.params);
  result.partition = std::move(hard.partition);
  result.unassigned_nodes = std::move(hard.unassigned);
  result.log_likelihood_trace = std::move(best.trace);
  result.params = std::move(best.params);
  return result;
}

}  // namespace bcsbm
