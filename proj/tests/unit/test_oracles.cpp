#include <cmath>
#include <numeric>
#include <random>

#include "bcsbm/topology.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bcsbm;

TEST_CASE("oracle topology on hand-checked graphs") {
  CHECK(oracle::brute_betweenness(test::path3()) == std::vector<double>{0, 1, 0});
  const auto cycle = test::make_net(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(oracle::brute_betweenness(cycle) == std::vector<double>{0.5, 0.5, 0.5, 0.5});
  const auto pendant = test::make_net(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}});
  CHECK(oracle::brute_clustering(pendant) == std::vector<double>{1.0 / 3.0, 1, 1, 0});
}

TEST_CASE("oracle metrics on hand-checked partitions") {
  const std::vector<std::int64_t> a{1, 1, 1, 2}, b{1, 1, 2, 2};
  CHECK(oracle::brute_pwf(Partition::from_labels(a), Partition::from_labels(b)) == doctest::Approx(0.4));
}

TEST_CASE("simplex projection") {
  std::vector<double> v{0.2, 0.3, 0.5};
  oracle::project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(0.2));
  std::vector<double> w{2.0, 0.0, -1.0};
  oracle::project_to_simplex(w);
  CHECK(w == std::vector<double>{1.0, 0.0, 0.0});
  std::vector<double> u{0.5, 0.5, 0.5};
  oracle::project_to_simplex(u);
  CHECK(std::accumulate(u.begin(), u.end(), 0.0) == doctest::Approx(1.0));
  CHECK(u[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("lower bound gradient matches finite differences") {
  std::mt19937_64 rng(71);
  const auto net = oracle::random_graph(6, 0.4, rng, true, 3, 0.5, true);
  const auto w = node_weights(net, WeightMode::bc, false);
  const std::size_t c = 2, n = net.num_nodes(), K = net.num_attributes();
  const auto resp = oracle::random_resp(net, w.delta, c, rng);
  std::uniform_real_distribution<double> pos(0.2, 1.0);
  std::vector<double> b(n * c), theta(c * c), phi(c * K);
  for (auto* v : {&b, &theta, &phi})
    for (double& x : *v) x = pos(rng);
  const auto grad = oracle::lower_bound_gradient(net, w.delta, resp, b, theta, phi, c);
  const double h = 1e-6;
  std::size_t index = 0;
  for (auto* v : {&b, &theta, &phi}) {
    for (double& x : *v) {
      const double keep = x;
      x = keep + h;
      const double up = oracle::lower_bound_flat(net, w.delta, resp, b, theta, phi, c);
      x = keep - h;
      const double down = oracle::lower_bound_flat(net, w.delta, resp, b, theta, phi, c);
      x = keep;
      CHECK(grad[index++] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-5));
    }
  }
}
