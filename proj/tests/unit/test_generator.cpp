#include <cmath>
#include <numeric>

#include "bcsbm/generator.hpp"
#include "bcsbm/topology.hpp"
#include "doctest.h"

using namespace bcsbm;

TEST_CASE("planted labels are balanced and contiguous") {
  const auto p = planted_labels(10, 3);
  CHECK(p.assignment == std::vector<CommunityIndex>{0, 0, 0, 0, 1, 1, 1, 2, 2, 2});
  CHECK(p.num_communities == 3);
}

TEST_CASE("planted parameters are normalized") {
  for (auto pattern : {BlockPattern::assortative, BlockPattern::bipartite, BlockPattern::mixture}) {
    PlantedSpec spec;
    spec.n = 30;
    spec.c = 4;
    spec.pattern = pattern;
    spec.num_attributes = 8;
    const auto labels = planted_labels(spec.n, spec.c);
    const std::vector<double> w(spec.n, 1.0);
    const auto p = planted_params(spec, labels, w);
    CHECK(p.block.sum() == doctest::Approx(1.0));
    CHECK((p.block - p.block.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index r = 0; r < 4; ++r) {
      CHECK(p.membership.col(r).sum() == doctest::Approx(1.0));
      CHECK(p.attribute.row(r).sum() == doctest::Approx(1.0));
    }
    if (pattern == BlockPattern::assortative) CHECK(p.block(0, 0) == doctest::Approx(10 * p.block(0, 1)));
    if (pattern == BlockPattern::bipartite) CHECK(p.block(0, 1) == doctest::Approx(10 * p.block(0, 0)));
    if (pattern == BlockPattern::mixture) {
      CHECK(p.block(0, 0) > p.block(0, 1));
      CHECK(p.block(1, 2) > p.block(1, 1));
      CHECK(p.block(3, 3) > p.block(3, 2));
    }
  }
}

TEST_CASE("zero block matrix gives no edges") {
  PlantedSpec spec;
  spec.n = 50;
  spec.block_override = Matrix::Zero(2, 2);
  const auto sample = sample_network(spec);
  CHECK(sample.network.num_edges() == 0);
  CHECK(sample.raw_link_count == 0);
}

TEST_CASE("mean link count is half the edge scale") {
  // Small scale so that multi-edge clamping is negligible.
  PlantedSpec spec;
  spec.n = 200;
  spec.edge_scale = 40.0;
  const std::size_t samples = 1000;
  std::vector<double> counts;
  for (std::size_t s = 0; s < samples; ++s) {
    spec.seed = s;
    counts.push_back(static_cast<double>(sample_network(spec).raw_link_count));
  }
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / samples;
  double var = 0.0;
  for (double x : counts) var += (x - mean) * (x - mean);
  var /= samples - 1;
  CHECK(std::abs(mean - 20.0) <= 3.0 * std::sqrt(var / samples));
}

TEST_CASE("sampling is seeded and labels are attached") {
  PlantedSpec spec;
  spec.n = 60;
  spec.c = 3;
  spec.num_attributes = 9;
  spec.seed = 4;
  const auto a = sample_network(spec);
  const auto b = sample_network(spec);
  CHECK(a.network == b.network);
  REQUIRE(a.network.labels().has_value());
  CHECK(*a.network.labels() == a.labels);
  spec.seed = 5;
  CHECK_FALSE(sample_network(spec).network == a.network);
}

TEST_CASE("self-loops can be disabled") {
  PlantedSpec spec;
  spec.n = 20;
  spec.edge_scale = 400;
  spec.self_loops = false;
  CHECK(sample_network(spec).network.num_self_loops() == 0);
}

TEST_CASE("planted spec validation") {
  PlantedSpec spec;
  spec.c = 0;
  CHECK_THROWS(spec.validate());
  spec = {};
  spec.node_weights = {1.0, 2.0};
  CHECK_THROWS(spec.validate());
  spec = {};
  spec.intensity_ratio = -1;
  CHECK_THROWS(spec.validate());
}
