#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bcsbm/network.hpp"

namespace bcsbm {

struct DatasetStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t K = 0;
  std::size_t c = 0;
};

struct DatasetManifest {
  std::string name;
  std::filesystem::path content;
  std::filesystem::path cites;
  std::optional<DatasetStats> expected;
};

struct LoadResult {
  AttributedNetwork network;
  std::vector<std::string> warnings;
  std::size_t dropped_citations = 0;  // citations naming ids absent from the content file
  std::size_t duplicate_edges = 0;    // reciprocal or repeated citations collapsed
};

/// Content lines: `<id> <w_1> ... <w_K> <label>` with w in {0, 1}.
/// Cites lines: `<id_a> <id_b>`, read as undirected edges.
/// Nodes are ordered by id (numeric ids by value, before non-numeric ids), so
/// the result does not depend on line order.
LoadResult load_citation_dataset(const DatasetManifest& manifest);

/// Generic interchange format.
///   edges      : `<id> <id>` per line
///   attributes : header `K <count>`, then `<id> <attr_index>` lines; a line
///                holding only `<id>` declares a node without attributes
///   labels     : `<id> <label>` per line, covering every node
/// Blank lines and lines starting with '#' are skipped.
LoadResult load_generic(const std::filesystem::path& edges,
                        const std::filesystem::path& attributes,
                        const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Writes the generic format; reloading gives an identical network.
void write_generic(const AttributedNetwork& net, const std::filesystem::path& edges,
                   const std::filesystem::path& attributes,
                   const std::optional<std::filesystem::path>& labels = std::nullopt);

/// `<node_id> <community>` lines, communities numbered from 1.
void write_partition(const std::filesystem::path& path, const AttributedNetwork& net,
                     const Partition& partition);

/// Reads `<node_id> <label>` lines; labels are arbitrary tokens.
struct LabeledNodes {
  std::vector<std::string> node_names;
  std::vector<std::string> labels;
};
LabeledNodes read_labeled_nodes(const std::filesystem::path& path);

/// Aligns two labeled node files on node id and returns (a, b) partitions in
/// the node order of `a`. Throws DataError if the node sets differ.
std::pair<Partition, Partition> align_partitions(const LabeledNodes& a, const LabeledNodes& b);

/// Orders ids numerically when both parse as integers, numeric before
/// non-numeric, otherwise lexicographically.
bool natural_id_less(const std::string& a, const std::string& b);

/// Known citation datasets with their published statistics.
struct KnownDataset {
  std::string name;
  DatasetStats stats;
};
const std::vector<KnownDataset>& known_datasets();

/// Looks for `<name>.content` / `<name>.cites` under data_dir, data_dir/<name>,
/// data_dir/WebKB and data_dir/webkb. Returns nullopt for an unknown name or
/// when no candidate directory holds both files.
std::optional<DatasetManifest> find_dataset(const std::string& name,
                                            const std::filesystem::path& data_dir);

}  // namespace bcsbm
