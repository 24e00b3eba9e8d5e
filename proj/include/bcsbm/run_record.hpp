#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bcsbm/fit.hpp"
#include "bcsbm/network.hpp"

namespace bcsbm {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kRunRecordSchema = "bcsbm.run_record/1";

struct PhaseTimings {
  double load_ms = 0.0;
  double weights_ms = 0.0;
  double fit_ms = 0.0;
};

/// Mean and max over restarts of NMI and PWF against ground truth.
struct RestartScores {
  std::vector<double> nmi;
  std::vector<double> pwf;
  double nmi_mean = 0.0;
  double nmi_max = 0.0;
  double pwf_mean = 0.0;
  double pwf_max = 0.0;
};

RestartScores score_restarts(const FitResult& result, const Partition& truth);

/// Structured record of one fit. Everything outside the "runtime" object is a
/// pure function of the inputs and the configuration (thread count included
/// in "runtime", not in "config").
nlohmann::json make_run_record(const std::string& dataset, const AttributedNetwork& net,
                               const FitConfig& config, const FitResult& result,
                               const PhaseTimings& timings);

/// The record with the "runtime" object removed, for reproducibility checks.
nlohmann::json deterministic_part(nlohmann::json record);

/// Published mean/max scores of a dataset for the model variant that matches
/// a weight mode: bc (node weights k + c + b), degree (k), unit (no weights).
struct PublishedScores {
  double nmi_mean;
  double nmi_max;
  double pwf_mean;
  double pwf_max;
};
std::optional<PublishedScores> published_scores(std::string_view dataset, WeightMode mode);

struct BenchmarkVariant {
  WeightMode mode;
  bool normalized_betweenness;
  std::string label() const;
};

/// bc with raw betweenness, bc with normalized betweenness, degree, unit.
std::vector<BenchmarkVariant> default_benchmark_variants();

struct BenchmarkRow {
  std::string dataset;
  BenchmarkVariant variant;
  std::size_t runs = 0;
  RestartScores scores;
  std::optional<PublishedScores> published;
};

/// Tab-separated table, one row per (dataset, variant).
std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows);

}  // namespace bcsbm
