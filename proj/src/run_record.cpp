#include "bcsbm/run_record.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "bcsbm/metrics.hpp"

namespace bcsbm {

using nlohmann::json;

RestartScores score_restarts(const FitResult& result, const Partition& truth) {
  RestartScores scores;
  for (const RestartRecord& restart : result.restarts) {
    scores.nmi.push_back(nmi(truth, restart.partition));
    scores.pwf.push_back(pwf(restart.partition, truth));
  }
  if (scores.nmi.empty()) return scores;
  const double runs = static_cast<double>(scores.nmi.size());
  scores.nmi_mean = std::accumulate(scores.nmi.begin(), scores.nmi.end(), 0.0) / runs;
  scores.pwf_mean = std::accumulate(scores.pwf.begin(), scores.pwf.end(), 0.0) / runs;
  scores.nmi_max = *std::max_element(scores.nmi.begin(), scores.nmi.end());
  scores.pwf_max = *std::max_element(scores.pwf.begin(), scores.pwf.end());
  return scores;
}

namespace {

json partition_json(const Partition& p) {
  json out = json::array();
  for (auto r : p.assignment) out.push_back(r + 1);
  return out;
}

}  // namespace

json make_run_record(const std::string& dataset, const AttributedNetwork& net, const FitConfig& config,
                     const FitResult& result, const PhaseTimings& timings) {
  json record;
  record["schema"] = kRunRecordSchema;
  record["version"] = kVersion;
  record["dataset"] = {
      {"name", dataset},
      {"n", net.num_nodes()},
      {"m", net.num_edges()},
      {"K", net.num_attributes()},
      {"attribute_entries", net.num_attribute_entries()},
      {"label_classes", net.labels() ? net.labels()->num_communities : 0},
  };
  record["config"] = {
      {"communities", config.communities},
      {"max_iter", config.max_iter},
      {"tol", config.tol},
      {"restarts", config.restarts},
      {"seed", config.seed},
      {"init", to_string(config.init_scheme)},
      {"weight_mode", to_string(result.weights.mode)},
      {"betweenness", result.weights.normalized_betweenness ? "normalized" : "raw"},
      {"probe_runs", config.probe_runs},
      {"probe_max_iter", config.probe_max_iter},
      {"membership_update", to_string(config.membership_update)},
      {"uniform_jitter", config.uniform_jitter},
  };

  json selection = {{"chosen", to_string(result.chosen_scheme)}, {"probes", json::array()}};
  for (const SchemeProbe& probe : result.probes) {
    selection["probes"].push_back({{"scheme", to_string(probe.scheme)},
                                   {"mean_log_likelihood", probe.mean_log_likelihood},
                                   {"final_log_likelihoods", probe.final_log_likelihoods}});
  }
  record["scheme_selection"] = std::move(selection);

  std::optional<RestartScores> scores;
  if (net.labels()) {
    scores = score_restarts(result, *net.labels());
    record["ground_truth"] = partition_json(*net.labels());
  }

  json restarts = json::array();
  for (std::size_t r = 0; r < result.restarts.size(); ++r) {
    const RestartRecord& restart = result.restarts[r];
    json entry = {
        {"index", r},
        {"scheme", to_string(restart.scheme)},
        {"final_log_likelihood", restart.final_log_likelihood},
        {"iterations", restart.iterations},
        {"converged", restart.converged},
        {"floor_hits", restart.floor_hits},
        {"partition", partition_json(restart.partition)},
    };
    if (scores) {
      entry["nmi"] = scores->nmi[r];
      entry["pwf"] = scores->pwf[r];
    }
    restarts.push_back(std::move(entry));
  }
  record["restarts"] = std::move(restarts);

  json unassigned = json::array();
  for (NodeIndex i : result.unassigned_nodes) unassigned.push_back(net.node_names()[i]);
  record["best"] = {
      {"restart", result.best_restart},
      {"final_log_likelihood", result.log_likelihood_trace.back()},
      {"log_likelihood_trace", result.log_likelihood_trace},
      {"partition", partition_json(result.partition)},
      {"unassigned_nodes", std::move(unassigned)},
  };
  record["node_ids"] = net.node_names();

  if (scores) {
    record["metrics"] = {
        {"best", {{"nmi", scores->nmi[result.best_restart]}, {"pwf", scores->pwf[result.best_restart]}}},
        {"restarts",
         {{"nmi_mean", scores->nmi_mean},
          {"nmi_max", scores->nmi_max},
          {"pwf_mean", scores->pwf_mean},
          {"pwf_max", scores->pwf_max}}},
    };
  }

  record["runtime"] = {
      {"threads", config.threads},
      {"wall_clock_ms", {{"load", timings.load_ms}, {"weights", timings.weights_ms}, {"fit", timings.fit_ms}}},
  };
  return record;
}

json deterministic_part(json record) {
  record.erase("runtime");
  return record;
}

std::optional<PublishedScores> published_scores(std::string_view dataset, WeightMode mode) {
  struct Entry {
    std::string_view dataset;
    PublishedScores unit, degree, bc;
  };
  // NMI mean/max and PWF mean/max for the unweighted, degree-weighted and
  // k + c + b weighted variants.
  static constexpr Entry table[] = {
      {"cornell", {0.3131, 0.3973, 0.4378, 0.5672}, {0.3246, 0.4460, 0.4498, 0.6179}, {0.3550, 0.4555, 0.4882, 0.6637}},
      {"texas", {0.2882, 0.3750, 0.4117, 0.5028}, {0.2926, 0.3933, 0.4250, 0.5408}, {0.3214, 0.4636, 0.4852, 0.5854}},
      {"washington", {0.3235, 0.3631, 0.4879, 0.5483}, {0.3222, 0.3437, 0.4829, 0.5123}, {0.3617, 0.4106, 0.5233, 0.6175}},
      {"wisconsin", {0.3736, 0.4230, 0.5290, 0.5880}, {0.3772, 0.4436, 0.5294, 0.5953}, {0.4219, 0.4787, 0.5916, 0.6501}},
      {"cora", {0.3012, 0.3699, 0.3554, 0.4228}, {0.3143, 0.3488, 0.3621, 0.3891}, {0.3360, 0.3593, 0.3846, 0.4073}},
      {"citeseer", {0.2507, 0.3318, 0.3561, 0.4323}, {0.2646, 0.3246, 0.3642, 0.3977}, {0.3045, 0.3862, 0.4014, 0.4318}},
  };
  for (const Entry& e : table) {
    if (e.dataset != dataset) continue;
    switch (mode) {
      case WeightMode::unit: return e.unit;
      case WeightMode::degree: return e.degree;
      case WeightMode::bc: return e.bc;
    }
  }
  return std::nullopt;
}

std::string BenchmarkVariant::label() const {
  std::string out(to_string(mode));
  if (mode == WeightMode::bc) out += normalized_betweenness ? "/normalized" : "/raw";
  return out;
}

std::vector<BenchmarkVariant> default_benchmark_variants() {
  return {{WeightMode::bc, false}, {WeightMode::bc, true}, {WeightMode::degree, false}, {WeightMode::unit, false}};
}

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  out << "dataset\tvariant\truns\tnmi_mean\tnmi_max\tpwf_mean\tpwf_max"
         "\tpublished_nmi_mean\tpublished_nmi_max\tpublished_pwf_mean\tpublished_pwf_max\n";
  auto number = [](double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", x);
    return std::string(buffer);
  };
  for (const BenchmarkRow& row : rows) {
    out << row.dataset << '\t' << row.variant.label() << '\t' << row.runs << '\t' << number(row.scores.nmi_mean)
        << '\t' << number(row.scores.nmi_max) << '\t' << number(row.scores.pwf_mean) << '\t'
        << number(row.scores.pwf_max);
    if (row.published) {
      out << '\t' << number(row.published->nmi_mean) << '\t' << number(row.published->nmi_max) << '\t'
          << number(row.published->pwf_mean) << '\t' << number(row.published->pwf_max);
    } else {
      out << "\t-\t-\t-\t-";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bcsbm
