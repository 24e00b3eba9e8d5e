#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bcsbm/model.hpp"
#include "bcsbm/network.hpp"

namespace bcsbm {

/// Shape of the planted block matrix.
///   assortative : strong diagonal
///   bipartite   : strong off-diagonal (multipartite for c > 2)
///   mixture     : community 0 assortative, then pairs (1,2), (3,4), ... strongly
///                 linked to each other; an unpaired last community is assortative
enum class BlockPattern { assortative, bipartite, mixture };

std::string_view to_string(BlockPattern pattern);
BlockPattern parse_block_pattern(std::string_view text);

/// Planted-structure specification.
///
/// Node weights w_i stand in for delta_i during sampling; delta_i depends on the
/// sampled graph itself, so it cannot drive its own generation. The default is
/// w_i = 1 for every node.
struct PlantedSpec {
  std::size_t n = 100;
  std::size_t c = 2;
  BlockPattern pattern = BlockPattern::assortative;
  // Ratio of strong to weak block intensity.
  double intensity_ratio = 10.0;
  std::size_t num_attributes = 0;
  // Relative weight of a community's own attributes (k % c == r) in its phi row.
  double attribute_affinity = 5.0;
  // Expected attribute draws per node before clamping.
  double attributes_per_node = 5.0;
  // Expected link count is edge_scale / 2 before clamping.
  double edge_scale = 1000.0;
  std::vector<double> node_weights;
  bool self_loops = true;
  // Replaces the pattern-derived block matrix (used as given, not normalized).
  std::optional<Matrix> block_override;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedSample {
  AttributedNetwork network;  // ground-truth labels set to the planted partition
  Partition labels;
  ModelParams params;
  std::vector<double> weights;
  std::size_t raw_link_count = 0;    // sum of Poisson link draws
  std::size_t clamped_links = 0;     // draws above 1 folded into simple edges
  std::size_t clamped_attributes = 0;
};

/// Planted parameters only (no sampling).
ModelParams planted_params(const PlantedSpec& spec, const Partition& labels,
                           const std::vector<double>& weights);

/// Balanced contiguous planted labels: node i goes to i * c / n.
Partition planted_labels(std::size_t n, std::size_t c);

PlantedSample sample_network(const PlantedSpec& spec);

}  // namespace bcsbm
