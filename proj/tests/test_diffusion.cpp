#include <doctest.h>

#include <cmath>
#include <random>

#include "rl4im/diffusion.hpp"
#include "test_support.hpp"

using namespace rl4im;

TEST_CASE("single cascade edge cases") {
  const Graph g = generate_powerlaw_cluster({30, 2, 0.05, 3}, 0.5);
  Rng rng(1);
  CHECK(simulate_ic_once(g, {}, rng).empty());
  SeedSet all(g.node_count());
  for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
  CHECK(simulate_ic_once(g, all, rng) == all);
  const Graph closed = g.with_edge_probability(0.0);
  CHECK(simulate_ic_once(closed, SeedSet{0}, rng) == SeedSet{0});
  const Graph open = g.with_edge_probability(1.0);
  CHECK(simulate_ic_once(open, SeedSet{4}, rng).size() == g.node_count());
  CHECK_THROWS_AS(simulate_ic_once(g, SeedSet{99}, rng), std::out_of_range);
}

TEST_CASE("exact influence closed forms") {
  auto exact = InfluenceEstimator::exact();
  CHECK(exact.estimate(Graph(2, {{0, 1}}, 0.2), SeedSet{0}) == doctest::Approx(1.2).epsilon(1e-14));
  const Graph tri(3, {{0, 1}, {1, 2}, {0, 2}}, 0.5);
  CHECK(exact.estimate(tri, SeedSet{0}) == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(exact.estimate(tri, SeedSet{}) == 0.0);
  CHECK(exact.is_exact());
}

TEST_CASE("exact influence matches BFS enumeration") {
  std::mt19937_64 rng(17);
  auto exact = InfluenceEstimator::exact();
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto small = testing::random_small_graph(rng, n, 0.5, 12);
    const double p = 0.1 + 0.8 * std::uniform_real_distribution<>(0, 1)(rng);
    const Graph g = testing::to_graph(small, p);
    std::vector<std::uint32_t> seeds;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (rng() % 3 == 0) seeds.push_back(v);
    }
    SeedSet s(seeds.begin(), seeds.end());
    CHECK(exact.estimate(g, s) == doctest::Approx(oracle::influence(small, p, seeds)).epsilon(1e-12));
  }
}

TEST_CASE("exact mode refuses large edge sets") {
  auto exact = InfluenceEstimator::exact();
  const Graph g = testing::path(InfluenceEstimator::kMaxExactEdges + 2, 0.5);
  CHECK_THROWS_AS(exact.estimate(g, SeedSet{0}), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with exact within three standard errors") {
  const Graph tri(3, {{0, 1}, {1, 2}, {0, 2}}, 0.5);
  auto mc = InfluenceEstimator::monte_carlo(10000, 5);
  const auto s = mc.estimate_with_error(tri, SeedSet{0});
  CHECK(s.std_error > 0.0);
  CHECK(std::abs(s.mean - 2.25) <= 3.0 * s.std_error);
}

TEST_CASE("monte carlo is reproducible per seed") {
  const Graph g = generate_powerlaw_cluster({40, 2, 0.05, 9}, 0.3);
  auto a = InfluenceEstimator::monte_carlo(200, 77);
  auto b = InfluenceEstimator::monte_carlo(200, 77);
  CHECK(a.estimate(g, SeedSet{0, 5}) == b.estimate(g, SeedSet{0, 5}));
  CHECK(a.num_sims() == 200);
}

TEST_CASE("marginal contribution") {
  auto exact = InfluenceEstimator::exact();
  SUBCASE("isolated node") {
    const Graph g(4, {{0, 1}, {1, 2}}, 0.7);
    CHECK(exact.marginal_contribution(g, SeedSet{0}, 3) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("path 0-1-2") {
    const Graph g = testing::path(3, 0.5);
    CHECK(exact.marginal_contribution(g, SeedSet{0}, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(exact.estimate(g, SeedSet{0, 2}) == doctest::Approx(2.75).epsilon(1e-14));
    CHECK(exact.estimate(g, SeedSet{0}) == doctest::Approx(1.75).epsilon(1e-14));
  }
  SUBCASE("everything but one node") {
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0.4);
    const SeedSet base{0, 1, 2};
    const double gain = exact.marginal_contribution(g, base, 3);
    CHECK(gain == doctest::Approx(4.0 - exact.estimate(g, base)).epsilon(1e-14));
    CHECK(gain >= 0.0);
  }
  SUBCASE("node already in base") {
    CHECK_THROWS_AS(exact.marginal_contribution(testing::path(3, 0.5), SeedSet{0}, 0),
                    std::invalid_argument);
  }
  SUBCASE("monte carlo marginals share worlds and stay non-negative") {
    const Graph g = generate_powerlaw_cluster({50, 2, 0.05, 2}, 0.2);
    auto mc = InfluenceEstimator::monte_carlo(50, 3);
    for (NodeId v = 1; v < 50; ++v) CHECK(mc.marginal_contribution(g, SeedSet{0}, v) >= 0.0);
  }
}

TEST_CASE("joint estimation counts one call per set") {
  auto mc = InfluenceEstimator::monte_carlo(20, 1);
  const Graph g = testing::path(6, 0.5);
  const std::vector<SeedSet> sets{{0}, {0, 3}, {}, {5}};
  const auto before = mc.call_count();
  const auto values = mc.estimate_jointly(g, sets);
  CHECK(mc.call_count() - before == 4);
  REQUIRE(values.size() == 4);
  CHECK(values[2] == 0.0);
  // Shared worlds make influence monotone sample by sample.
  CHECK(values[1] >= values[0]);
}
