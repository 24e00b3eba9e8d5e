// bcsbm: command-line front end for fitting, evaluating and benchmarking the
// node-weighted Poisson block model on attributed networks.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcsbm/error.hpp"
#include "bcsbm/fit.hpp"
#include "bcsbm/generator.hpp"
#include "bcsbm/ingest.hpp"
#include "bcsbm/metrics.hpp"
#include "bcsbm/run_record.hpp"
#include "bcsbm/topology.hpp"

namespace fs = std::filesystem;
using namespace bcsbm;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct InputOptions {
  std::string dataset;
  std::string data_dir = "data";
  std::string content, cites;
  std::string edges, attrs, labels;

  void add_to(CLI::App& app) {
    app.add_option("--dataset", dataset, "Known citation dataset (cornell, texas, washington, wisconsin, cora, citeseer)");
    app.add_option("--data-dir", data_dir, "Directory searched for <name>.content / <name>.cites")->capture_default_str();
    app.add_option("--content", content, "Citation content file");
    app.add_option("--cites", cites, "Citation cites file");
    app.add_option("--edges", edges, "Generic edge list");
    app.add_option("--attrs", attrs, "Generic attribute file");
    app.add_option("--labels", labels, "Generic label file");
  }

  std::string describe() const {
    if (!dataset.empty()) return dataset;
    if (!content.empty()) return fs::path(content).stem().string();
    return fs::path(edges).stem().string();
  }

  LoadResult load() const {
    if (!dataset.empty()) {
      auto manifest = find_dataset(dataset, data_dir);
      if (!manifest) throw DataError("dataset '" + dataset + "' not found under " + data_dir);
      return load_citation_dataset(*manifest);
    }
    if (!content.empty() || !cites.empty()) {
      if (content.empty() || cites.empty()) throw UsageError("--content and --cites go together");
      return load_citation_dataset(DatasetManifest{fs::path(content).stem().string(), content, cites, std::nullopt});
    }
    if (!edges.empty()) {
      if (attrs.empty()) throw UsageError("--edges needs --attrs");
      std::optional<fs::path> label_path;
      if (!labels.empty()) label_path = labels;
      return load_generic(edges, attrs, label_path);
    }
    throw UsageError("no input: give --dataset, --content/--cites or --edges/--attrs");
  }
};

struct FitOptions {
  FitConfig config;
  std::string init = "auto";
  std::string weight_mode = "bc";
  std::string betweenness = "raw";
  std::string membership_update = "lower-bound-maximizer";

  void add_to(CLI::App& app, bool with_communities) {
    if (with_communities) app.add_option("-c,--communities", config.communities, "Number of communities")->required();
    app.add_option("--restarts", config.restarts, "Independent EM runs")->capture_default_str();
    app.add_option("--max-iter", config.max_iter, "Iteration cap per run")->capture_default_str();
    app.add_option("--tol", config.tol, "Absolute log-likelihood convergence threshold")->capture_default_str();
    app.add_option("--seed", config.seed, "Pseudorandom seed")->capture_default_str();
    app.add_option("--init", init, "auto | assortative | disassortative | uniform")->capture_default_str();
    app.add_option("--weight-mode", weight_mode, "bc | degree | unit")->capture_default_str();
    app.add_option("--betweenness", betweenness, "raw | normalized")->capture_default_str();
    app.add_option("--probe-runs", config.probe_runs, "Probe runs per scheme for --init auto")->capture_default_str();
    app.add_option("--probe-max-iter", config.probe_max_iter, "Iteration cap of probe runs")->capture_default_str();
    app.add_option("--membership-update", membership_update,
                   "lower-bound-maximizer | doubled-attributes")->capture_default_str();
    app.add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  }

  FitConfig resolve() const {
    FitConfig out = config;
    try {
      out.init_scheme = parse_init_scheme(init);
      out.weight_mode = parse_weight_mode(weight_mode);
      out.membership_update = parse_membership_update(membership_update);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (betweenness != "raw" && betweenness != "normalized") throw UsageError("--betweenness must be raw or normalized");
    out.normalized_betweenness = betweenness == "normalized";
    return out;
  }
};

void print_warnings(const LoadResult& loaded) {
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
}

void write_json(const fs::path& path, const nlohmann::json& value) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << value.dump(1) << '\n';
}

struct FitRun {
  FitResult result;
  PhaseTimings timings;
};

FitRun run_fit(const AttributedNetwork& net, FitConfig config, double load_ms) {
  config.validate(net.num_nodes());
  FitRun run;
  run.timings.load_ms = load_ms;
  auto start = std::chrono::steady_clock::now();
  NodeWeights weights = node_weights(net, config.weight_mode, config.normalized_betweenness, config.threads);
  run.timings.weights_ms = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  run.result = fit(net, weights, config);
  run.timings.fit_ms = elapsed_ms(start);
  return run;
}

int cmd_fit(const InputOptions& input, const FitOptions& options, const std::string& out_path,
            const std::string& partition_path) {
  const FitConfig config = options.resolve();
  auto start = std::chrono::steady_clock::now();
  LoadResult loaded = input.load();
  const double load_ms = elapsed_ms(start);
  print_warnings(loaded);
  const AttributedNetwork& net = loaded.network;
  FitRun run;
  try {
    run = run_fit(net, config, load_ms);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto record = make_run_record(input.describe(), net, config, run.result, run.timings);
  write_json(out_path, record);
  if (!partition_path.empty()) write_partition(partition_path, net, run.result.partition);

  std::cout << "dataset " << input.describe() << ": n=" << net.num_nodes() << " m=" << net.num_edges()
            << " K=" << net.num_attributes() << '\n';
  std::cout << "scheme " << to_string(run.result.chosen_scheme) << ", best restart "
            << run.result.best_restart << ", log-likelihood " << std::setprecision(10)
            << run.result.log_likelihood_trace.back() << '\n';
  if (record.contains("metrics")) {
    const auto& m = record["metrics"];
    std::cout << std::setprecision(4) << "best NMI " << m["best"]["nmi"].get<double>() << ", PWF "
              << m["best"]["pwf"].get<double>() << "; over restarts NMI mean/max "
              << m["restarts"]["nmi_mean"].get<double>() << "/" << m["restarts"]["nmi_max"].get<double>()
              << ", PWF mean/max " << m["restarts"]["pwf_mean"].get<double>() << "/"
              << m["restarts"]["pwf_max"].get<double>() << '\n';
  }
  std::cout << "record written to " << out_path << '\n';
  return kOk;
}

int cmd_benchmark(const std::vector<std::string>& datasets, const std::string& data_dir,
                  const FitOptions& options, std::optional<std::size_t> communities,
                  const std::string& out_dir) {
  if (datasets.empty()) throw UsageError("benchmark needs at least one dataset");
  FitConfig base = options.resolve();
  std::vector<BenchmarkRow> rows;
  for (const std::string& name : datasets) {
    auto manifest = find_dataset(name, data_dir);
    if (!manifest) throw DataError("dataset '" + name + "' not found under " + data_dir);
    auto start = std::chrono::steady_clock::now();
    LoadResult loaded = load_citation_dataset(*manifest);
    const double load_ms = elapsed_ms(start);
    print_warnings(loaded);
    const AttributedNetwork& net = loaded.network;
    for (const BenchmarkVariant& variant : default_benchmark_variants()) {
      FitConfig config = base;
      config.communities = communities.value_or(manifest->expected ? manifest->expected->c : 2);
      config.weight_mode = variant.mode;
      config.normalized_betweenness = variant.normalized_betweenness;
      FitRun run = run_fit(net, config, load_ms);
      const auto record = make_run_record(name, net, config, run.result, run.timings);
      std::string file = name + "_" + variant.label() + ".json";
      std::replace(file.begin(), file.end(), '/', '-');
      write_json(fs::path(out_dir) / file, record);

      BenchmarkRow row{name, variant, run.result.restarts.size(), score_restarts(run.result, *net.labels()),
                       published_scores(name, variant.mode)};
      std::cerr << name << " " << variant.label() << ": NMI mean/max " << row.scores.nmi_mean << "/"
                << row.scores.nmi_max << ", PWF mean/max " << row.scores.pwf_mean << "/" << row.scores.pwf_max
                << '\n';
      rows.push_back(std::move(row));
    }
  }
  const std::string table = format_benchmark_table(rows);
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / "summary.tsv") << table;
  std::cout << table;
  return kOk;
}

struct Summary {
  double min = 0.0, mean = 0.0, max = 0.0;
};

template <typename T>
Summary summarize(const std::vector<T>& values) {
  Summary s;
  if (values.empty()) return s;
  s.min = static_cast<double>(*std::min_element(values.begin(), values.end()));
  s.max = static_cast<double>(*std::max_element(values.begin(), values.end()));
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

int cmd_stats(const InputOptions& input, bool normalized, unsigned threads) {
  LoadResult loaded = input.load();
  print_warnings(loaded);
  const AttributedNetwork& net = loaded.network;
  const auto k = degrees(net);
  const auto c = clustering_coefficients(net);
  const auto b = betweenness(net, normalized, threads);
  const auto isolated = std::count(k.begin(), k.end(), std::size_t{0});
  auto line = [](const char* what, const Summary& s) {
    std::cout << what << " min/mean/max " << s.min << " / " << s.mean << " / " << s.max << '\n';
  };
  std::cout << "n " << net.num_nodes() << '\n'
            << "m " << net.num_edges() << '\n'
            << "K " << net.num_attributes() << '\n'
            << "classes " << (net.labels() ? net.labels()->num_communities : 0) << '\n'
            << "attribute_entries " << net.num_attribute_entries() << '\n'
            << "self_loops " << net.num_self_loops() << '\n'
            << "isolated_nodes " << isolated << '\n'
            << "duplicate_edges " << loaded.duplicate_edges << '\n'
            << "dropped_citations " << loaded.dropped_citations << '\n';
  std::cout << std::setprecision(6);
  line("degree", summarize(k));
  line("clustering", summarize(c));
  line(normalized ? "betweenness(normalized)" : "betweenness(raw)", summarize(b));
  return kOk;
}

int cmd_generate(PlantedSpec spec, const std::string& pattern, std::optional<double> target_edges,
                 const std::string& prefix) {
  try {
    spec.pattern = parse_block_pattern(pattern);
    if (target_edges) spec.edge_scale = 2.0 * *target_edges;
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  PlantedSample sample = sample_network(spec);
  if (fs::path(prefix).has_parent_path()) fs::create_directories(fs::path(prefix).parent_path());
  write_generic(sample.network, prefix + ".edges", prefix + ".attrs", fs::path(prefix + ".labels"));
  std::cout << "wrote " << prefix << ".{edges,attrs,labels}: n=" << sample.network.num_nodes()
            << " m=" << sample.network.num_edges() << " K=" << sample.network.num_attributes()
            << " attribute_entries=" << sample.network.num_attribute_entries()
            << " clamped_links=" << sample.clamped_links << '\n';
  return kOk;
}

int cmd_eval(const std::string& pred, const std::string& truth) {
  const auto [truth_partition, pred_partition] = align_partitions(read_labeled_nodes(truth), read_labeled_nodes(pred));
  std::cout << std::setprecision(6) << "NMI " << nmi(truth_partition, pred_partition) << '\n'
            << "PWF " << pwf(pred_partition, truth_partition) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection in attributed networks with a node-weighted Poisson block model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  InputOptions fit_input;
  FitOptions fit_options;
  std::string record_path = "run_record.json", partition_path;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the model and write a run record");
  fit_input.add_to(*fit_cmd);
  fit_options.add_to(*fit_cmd, true);
  fit_cmd->add_option("-o,--out", record_path, "Run record (JSON)")->capture_default_str();
  fit_cmd->add_option("--partition-out", partition_path, "Best partition as '<node_id> <community>' lines");

  std::vector<std::string> bench_datasets;
  std::string bench_data_dir = "data", bench_out = "benchmark";
  std::optional<std::size_t> bench_communities;
  FitOptions bench_options;
  auto* bench_cmd = app.add_subcommand("benchmark", "Mean/max NMI and PWF over restarts for each weight mode");
  bench_cmd->add_option("datasets", bench_datasets, "Dataset names");
  bench_cmd->add_option("--data-dir", bench_data_dir)->capture_default_str();
  bench_cmd->add_option("--out-dir", bench_out, "Directory for run records and summary.tsv")->capture_default_str();
  bench_cmd->add_option("-c,--communities", bench_communities, "Override the dataset's class count");
  bench_options.add_to(*bench_cmd, false);

  InputOptions stats_input;
  bool stats_normalized = false;
  unsigned stats_threads = 1;
  auto* stats_cmd = app.add_subcommand("stats", "Print network and topology statistics");
  stats_input.add_to(*stats_cmd);
  stats_cmd->add_flag("--normalized", stats_normalized, "Normalize betweenness");
  stats_cmd->add_option("--threads", stats_threads)->capture_default_str();

  PlantedSpec spec;
  std::string pattern = "assortative", prefix = "planted";
  std::optional<double> target_edges;
  bool no_self_loops = false;
  auto* gen_cmd = app.add_subcommand("generate", "Sample a planted attributed network");
  gen_cmd->add_option("--pattern", pattern, "assortative | bipartite | mixture")->capture_default_str();
  gen_cmd->add_option("--n", spec.n)->capture_default_str();
  gen_cmd->add_option("--communities", spec.c)->capture_default_str();
  gen_cmd->add_option("--ratio", spec.intensity_ratio, "Strong/weak block intensity ratio")->capture_default_str();
  gen_cmd->add_option("--attributes", spec.num_attributes, "Attribute dimension K")->capture_default_str();
  gen_cmd->add_option("--affinity", spec.attribute_affinity, "Weight of community-own attributes")->capture_default_str();
  gen_cmd->add_option("--attrs-per-node", spec.attributes_per_node)->capture_default_str();
  gen_cmd->add_option("--edge-scale", spec.edge_scale, "Expected links = scale / 2")->capture_default_str();
  gen_cmd->add_option("--edges-target", target_edges, "Expected link count (sets --edge-scale)");
  gen_cmd->add_option("--seed", spec.seed)->capture_default_str();
  gen_cmd->add_flag("--no-self-loops", no_self_loops);
  gen_cmd->add_option("-o,--out-prefix", prefix, "Writes <prefix>.edges/.attrs/.labels")->capture_default_str();

  std::string pred, truth;
  auto* eval_cmd = app.add_subcommand("eval", "NMI and PWF between two partition files");
  eval_cmd->add_option("--pred", pred)->required();
  eval_cmd->add_option("--truth", truth)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_input, fit_options, record_path, partition_path);
    if (*bench_cmd) return cmd_benchmark(bench_datasets, bench_data_dir, bench_options, bench_communities, bench_out);
    if (*stats_cmd) return cmd_stats(stats_input, stats_normalized, stats_threads);
    if (*gen_cmd) {
      spec.self_loops = !no_self_loops;
      return cmd_generate(spec, pattern, target_edges, prefix);
    }
    if (*eval_cmd) return cmd_eval(pred, truth);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
