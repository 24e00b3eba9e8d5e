#include "bcsbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bcsbm {

namespace {

std::size_t used_communities(const Partition& p) {
  std::size_t c = p.num_communities;
  for (auto r : p.assignment) c = std::max<std::size_t>(c, r + 1);
  return c;
}

// True when every non-empty row and column of the table has a single non-zero cell.
bool same_up_to_relabeling(const ConfusionCounts& counts) {
  std::vector<std::size_t> col_hits(counts.cols.size(), 0);
  for (const auto& row : counts.joint) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s] == 0) continue;
      ++hits;
      ++col_hits[s];
    }
    if (hits > 1) return false;
  }
  for (std::size_t hits : col_hits) {
    if (hits > 1) return false;
  }
  return true;
}

double pairs(std::size_t k) { return 0.5 * static_cast<double>(k) * static_cast<double>(k > 0 ? k - 1 : 0); }

}  // namespace

ConfusionCounts confusion(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("partitions cover different node counts (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  ConfusionCounts counts;
  const std::size_t ca = used_communities(a);
  const std::size_t cb = used_communities(b);
  counts.joint.assign(ca, std::vector<std::size_t>(cb, 0));
  counts.rows.assign(ca, 0);
  counts.cols.assign(cb, 0);
  counts.total = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++counts.joint[a.assignment[i]][b.assignment[i]];
    ++counts.rows[a.assignment[i]];
    ++counts.cols[b.assignment[i]];
  }
  return counts;
}

double nmi(const Partition& a, const Partition& b) {
  const ConfusionCounts counts = confusion(a, b);
  if (counts.total == 0) throw std::invalid_argument("NMI of empty partitions is undefined");
  if (same_up_to_relabeling(counts)) return 1.0;
  const double total = static_cast<double>(counts.total);

  double numerator = 0.0;
  for (std::size_t r = 0; r < counts.rows.size(); ++r) {
    for (std::size_t s = 0; s < counts.cols.size(); ++s) {
      const std::size_t joint = counts.joint[r][s];
      if (joint == 0) continue;
      const double x = static_cast<double>(joint);
      numerator += x * std::log(x * total / (static_cast<double>(counts.rows[r]) *
                                             static_cast<double>(counts.cols[s])));
    }
  }
  numerator *= -2.0;

  double denominator = 0.0;
  for (std::size_t size : counts.rows) {
    if (size > 0) denominator += static_cast<double>(size) * std::log(static_cast<double>(size) / total);
  }
  for (std::size_t size : counts.cols) {
    if (size > 0) denominator += static_cast<double>(size) * std::log(static_cast<double>(size) / total);
  }

  // Zero entropy on both sides means two single blocks, caught above.
  if (denominator == 0.0) return 0.0;
  const double value = numerator / denominator;
  return std::clamp(value, 0.0, 1.0);
}

double pwf(const Partition& predicted, const Partition& truth) {
  const ConfusionCounts counts = confusion(predicted, truth);
  double same_predicted = 0.0, same_truth = 0.0, both = 0.0;
  for (std::size_t size : counts.rows) same_predicted += pairs(size);
  for (std::size_t size : counts.cols) same_truth += pairs(size);
  for (const auto& row : counts.joint) {
    for (std::size_t x : row) both += pairs(x);
  }
  if (same_predicted == 0.0 && same_truth == 0.0) return 1.0;
  if (same_predicted == 0.0 || same_truth == 0.0 || both == 0.0) return 0.0;
  const double precision = both / same_predicted;
  const double recall = both / same_truth;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace bcsbm
