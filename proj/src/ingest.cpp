#include "bcsbm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bcsbm/error.hpp"

namespace bcsbm {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(std::move(token));
  return tokens;
}

bool skip_line(const std::vector<std::string>& tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::optional<long long> parse_integer(const std::string& text) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::size_t parse_index(const std::string& text, const fs::path& path, std::size_t line) {
  auto value = parse_integer(text);
  if (!value || *value < 0) throw DataError(where(path, line) + ": expected a non-negative integer, got '" + text + "'");
  return static_cast<std::size_t>(*value);
}

// Dense ids assigned in natural order.
struct IdIndex {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeIndex> index;

  explicit IdIndex(const std::set<std::string, decltype(&natural_id_less)>& ids)
      : names(ids.begin(), ids.end()) {
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<NodeIndex>(i));
  }
  std::optional<NodeIndex> find(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

using IdSet = std::set<std::string, decltype(&natural_id_less)>;

// Dense label numbering in natural order of the label tokens.
Partition dense_labels(const std::vector<std::string>& tokens, std::vector<std::string>& names) {
  IdSet distinct(tokens.begin(), tokens.end(), &natural_id_less);
  names.assign(distinct.begin(), distinct.end());
  std::unordered_map<std::string, CommunityIndex> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<CommunityIndex>(i));
  Partition p;
  p.num_communities = names.size();
  p.assignment.reserve(tokens.size());
  for (const auto& t : tokens) p.assignment.push_back(index.at(t));
  return p;
}

void check_expected(const DatasetManifest& manifest, const AttributedNetwork& net,
                    std::vector<std::string>& warnings) {
  if (!manifest.expected) return;
  const DatasetStats& e = *manifest.expected;
  const std::size_t classes = net.labels() ? net.labels()->num_communities : 0;
  auto compare = [&](const char* what, std::size_t expected, std::size_t actual) {
    if (expected != actual) {
      warnings.push_back(manifest.name + ": " + what + " = " + std::to_string(actual) +
                         " (published value " + std::to_string(expected) + ")");
    }
  };
  compare("n", e.n, net.num_nodes());
  compare("m", e.m, net.num_edges());
  compare("K", e.K, net.num_attributes());
  compare("classes", e.c, classes);
}

}  // namespace

bool natural_id_less(const std::string& a, const std::string& b) {
  const auto x = parse_integer(a);
  const auto y = parse_integer(b);
  if (x && y) return *x != *y ? *x < *y : a < b;
  if (x != std::nullopt) return true;
  if (y != std::nullopt) return false;
  return a < b;
}

LoadResult load_citation_dataset(const DatasetManifest& manifest) {
  LoadResult result;

  std::vector<std::string> ids;
  std::vector<std::vector<AttributeIndex>> rows;
  std::vector<std::string> label_tokens;
  std::optional<std::size_t> K;
  {
    auto in = open_input(manifest.content);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      auto tokens = split(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 2) throw DataError(where(manifest.content, number) + ": expected '<id> <w_1> ... <w_K> <label>'");
      const std::size_t width = tokens.size() - 2;
      if (K && *K != width) {
        throw DataError(where(manifest.content, number) + ": " + std::to_string(width) +
                        " attribute values, earlier rows have " + std::to_string(*K));
      }
      K = width;
      std::vector<AttributeIndex> present;
      for (std::size_t k = 0; k < width; ++k) {
        const std::string& w = tokens[k + 1];
        if (w == "1") {
          present.push_back(static_cast<AttributeIndex>(k));
        } else if (w != "0") {
          throw DataError(where(manifest.content, number) + ": attribute value '" + w + "' is not 0 or 1");
        }
      }
      ids.push_back(tokens.front());
      rows.push_back(std::move(present));
      label_tokens.push_back(tokens.back());
    }
  }

  IdSet id_set(&natural_id_less);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!id_set.insert(ids[i]).second) throw DataError(manifest.content.string() + ": node id '" + ids[i] + "' appears twice");
  }
  IdIndex index(id_set);

  NetworkInput input;
  input.num_nodes = ids.size();
  input.num_attributes = K.value_or(0);
  input.attributes.resize(ids.size());
  std::vector<std::string> ordered_labels(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const NodeIndex node = *index.find(ids[i]);
    input.attributes[node] = std::move(rows[i]);
    ordered_labels[node] = label_tokens[i];
  }

  {
    auto in = open_input(manifest.cites);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      auto tokens = split(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 2) throw DataError(where(manifest.cites, number) + ": expected '<id_a> <id_b>'");
      auto a = index.find(tokens[0]);
      auto b = index.find(tokens[1]);
      if (!a || !b) {
        ++result.dropped_citations;
        continue;
      }
      input.edges.emplace_back(*a, *b);
    }
  }
  if (input.edges.empty()) result.warnings.push_back(manifest.name + ": citation file has no usable edges");
  if (result.dropped_citations > 0) {
    result.warnings.push_back(manifest.name + ": dropped " + std::to_string(result.dropped_citations) +
                              " citations to ids missing from the content file");
  }

  input.labels = dense_labels(ordered_labels, input.label_names);
  input.node_names = index.names;
  auto built = build_network(std::move(input));
  result.duplicate_edges = built.report.duplicate_edges;
  result.network = std::move(built.network);
  check_expected(manifest, result.network, result.warnings);
  return result;
}

LoadResult load_generic(const fs::path& edges_path, const fs::path& attributes_path,
                        const std::optional<fs::path>& labels_path) {
  LoadResult result;
  std::vector<std::pair<std::string, std::string>> edge_ids;
  std::vector<std::pair<std::string, std::optional<std::size_t>>> attribute_entries;
  std::vector<std::pair<std::string, std::string>> label_entries;
  std::optional<std::size_t> K;
  IdSet id_set(&natural_id_less);

  {
    auto in = open_input(edges_path);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      auto tokens = split(line);
      if (skip_line(tokens)) continue;
      if (tokens.size() != 2) throw DataError(where(edges_path, number) + ": expected '<id> <id>'");
      id_set.insert(tokens[0]);
      id_set.insert(tokens[1]);
      edge_ids.emplace_back(tokens[0], tokens[1]);
    }
  }
  {
    auto in = open_input(attributes_path);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      auto tokens = split(line);
      if (skip_line(tokens)) continue;
      if (!K) {
        if (tokens.size() != 2 || tokens[0] != "K") {
          throw DataError(where(attributes_path, number) + ": expected header 'K <count>'");
        }
        K = parse_index(tokens[1], attributes_path, number);
        continue;
      }
      if (tokens.size() == 1) {
        id_set.insert(tokens[0]);
        attribute_entries.emplace_back(tokens[0], std::nullopt);
        continue;
      }
      if (tokens.size() != 2) throw DataError(where(attributes_path, number) + ": expected '<id> <attr_index>'");
      const std::size_t k = parse_index(tokens[1], attributes_path, number);
      if (k >= *K) {
        throw DataError(where(attributes_path, number) + ": attribute index " + std::to_string(k) +
                        " >= K = " + std::to_string(*K));
      }
      id_set.insert(tokens[0]);
      attribute_entries.emplace_back(tokens[0], k);
    }
    if (!K) throw DataError(attributes_path.string() + ": missing 'K <count>' header");
  }
  if (labels_path) {
    auto in = open_input(*labels_path);
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      auto tokens = split(line);
      if (skip_line(tokens)) continue;
      if (tokens.size() != 2) throw DataError(where(*labels_path, number) + ": expected '<id> <label>'");
      id_set.insert(tokens[0]);
      label_entries.emplace_back(tokens[0], tokens[1]);
    }
  }

  IdIndex index(id_set);
  NetworkInput input;
  input.num_nodes = index.names.size();
  input.num_attributes = *K;
  input.attributes.resize(input.num_nodes);
  for (const auto& [a, b] : edge_ids) input.edges.emplace_back(*index.find(a), *index.find(b));
  for (const auto& [id, k] : attribute_entries) {
    if (k) input.attributes[*index.find(id)].push_back(static_cast<AttributeIndex>(*k));
  }
  if (labels_path) {
    std::vector<std::optional<std::string>> labels(input.num_nodes);
    for (const auto& [id, label] : label_entries) {
      auto& slot = labels[*index.find(id)];
      if (slot && *slot != label) throw DataError(labels_path->string() + ": node '" + id + "' has two labels");
      slot = label;
    }
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i]) throw DataError(labels_path->string() + ": node '" + index.names[i] + "' has no label");
      tokens.push_back(*labels[i]);
    }
    input.labels = dense_labels(tokens, input.label_names);
  }
  input.node_names = index.names;
  auto built = build_network(std::move(input));
  result.duplicate_edges = built.report.duplicate_edges;
  if (result.duplicate_edges > 0) {
    result.warnings.push_back("collapsed " + std::to_string(result.duplicate_edges) + " duplicate edges");
  }
  result.network = std::move(built.network);
  return result;
}

void write_generic(const AttributedNetwork& net, const fs::path& edges_path,
                   const fs::path& attributes_path, const std::optional<fs::path>& labels_path) {
  const auto& names = net.node_names();
  {
    auto out = open_output(edges_path);
    for (const Edge& e : net.edges()) out << names[e.u] << ' ' << names[e.v] << '\n';
  }
  {
    auto out = open_output(attributes_path);
    out << "K " << net.num_attributes() << '\n';
    for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
      const auto attrs = net.attributes(i);
      if (attrs.empty()) out << names[i] << '\n';
      for (AttributeIndex k : attrs) out << names[i] << ' ' << k << '\n';
    }
  }
  if (labels_path) {
    if (!net.labels()) throw DataError("network has no labels to write");
    auto out = open_output(*labels_path);
    const auto& label_names = net.label_names();
    for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
      const auto label = net.labels()->assignment[i];
      out << names[i] << ' ';
      if (label < label_names.size()) out << label_names[label];
      else out << label;
      out << '\n';
    }
  }
}

void write_partition(const fs::path& path, const AttributedNetwork& net, const Partition& partition) {
  if (partition.size() != net.num_nodes()) throw DataError("partition does not cover the network");
  auto out = open_output(path);
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    out << net.node_names()[i] << ' ' << partition.assignment[i] + 1 << '\n';
  }
}

LabeledNodes read_labeled_nodes(const fs::path& path) {
  LabeledNodes nodes;
  auto in = open_input(path);
  std::string line;
  std::set<std::string> seen;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    auto tokens = split(line);
    if (skip_line(tokens)) continue;
    if (tokens.size() != 2) throw DataError(where(path, number) + ": expected '<node_id> <label>'");
    if (!seen.insert(tokens[0]).second) throw DataError(where(path, number) + ": node '" + tokens[0] + "' listed twice");
    nodes.node_names.push_back(tokens[0]);
    nodes.labels.push_back(tokens[1]);
  }
  return nodes;
}

std::pair<Partition, Partition> align_partitions(const LabeledNodes& a, const LabeledNodes& b) {
  if (a.node_names.size() != b.node_names.size()) {
    throw DataError("partition files cover different node counts (" + std::to_string(a.node_names.size()) +
                    " vs " + std::to_string(b.node_names.size()) + ")");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < b.node_names.size(); ++i) position.emplace(b.node_names[i], i);
  std::vector<std::string> b_labels(a.node_names.size());
  for (std::size_t i = 0; i < a.node_names.size(); ++i) {
    auto it = position.find(a.node_names[i]);
    if (it == position.end()) throw DataError("node '" + a.node_names[i] + "' is missing from the second partition");
    b_labels[i] = b.labels[it->second];
  }
  std::vector<std::string> ignored;
  return {dense_labels(a.labels, ignored), dense_labels(b_labels, ignored)};
}

const std::vector<KnownDataset>& known_datasets() {
  static const std::vector<KnownDataset> datasets = {
      {"cornell", {195, 304, 1703, 5}},    {"texas", {187, 328, 1703, 5}},
      {"washington", {230, 446, 1703, 5}}, {"wisconsin", {265, 530, 1703, 5}},
      {"cora", {2708, 5429, 1433, 7}},     {"citeseer", {3312, 4723, 3703, 6}},
  };
  return datasets;
}

std::optional<DatasetManifest> find_dataset(const std::string& name, const fs::path& data_dir) {
  auto known = std::find_if(known_datasets().begin(), known_datasets().end(),
                            [&](const KnownDataset& d) { return d.name == name; });
  if (known == known_datasets().end()) return std::nullopt;
  for (const fs::path& dir : {data_dir, data_dir / name, data_dir / "WebKB", data_dir / "webkb"}) {
    const fs::path content = dir / (name + ".content");
    const fs::path cites = dir / (name + ".cites");
    if (fs::exists(content) && fs::exists(cites)) {
      return DatasetManifest{name, content, cites, known->stats};
    }
  }
  return std::nullopt;
}

}  // namespace bcsbm
