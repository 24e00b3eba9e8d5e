#pragma once

#include <cstddef>
#include <vector>

#include "bcsbm/network.hpp"

namespace bcsbm {

/// Contingency table between two partitions of the same node set.
struct ConfusionCounts {
  std::vector<std::vector<std::size_t>> joint;  // joint[r][s]: nodes in a's r and b's s
  std::vector<std::size_t> rows;                // community sizes in a
  std::vector<std::size_t> cols;                // community sizes in b
  std::size_t total = 0;
};

/// Throws std::invalid_argument if the partitions cover different node counts.
ConfusionCounts confusion(const Partition& a, const Partition& b);

/// Normalized mutual information from the confusion matrix, in [0, 1].
/// When both partitions have zero entropy the result is 1 if they agree up to
/// relabeling and 0 otherwise.
double nmi(const Partition& a, const Partition& b);

/// Pairwise F-measure. S holds node pairs sharing a community in `predicted`,
/// T those sharing one in `truth`. An empty S or T makes its ratio 0, and the
/// score is 0 unless both are empty (then 1).
double pwf(const Partition& predicted, const Partition& truth);

}  // namespace bcsbm
