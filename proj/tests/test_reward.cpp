#include <doctest.h>

#include <cmath>
#include <random>

#include "rl4im/reward.hpp"
#include "test_support.hpp"

using namespace rl4im;

namespace {

EnvConfig config(std::size_t rounds, std::size_t budget, double q) {
  EnvConfig c;
  c.rounds = rounds;
  c.budget = budget;
  c.q = q;
  return c;
}

}  // namespace

TEST_CASE("reward terms") {
  auto exact = InfluenceEstimator::exact();
  SUBCASE("first sub-step has identical terms") {
    const Graph g = generate_powerlaw_cluster({8, 2, 0.05, 1}, 0.4);
    const EnvState s = reset(g, config(2, 3, 0.6));
    const auto t = compute_reward_terms(g, s, 4, exact);
    CHECK(t.delta_i0 == t.delta_ib1);
    CHECK(t.common_difference == 0.0);
    CHECK(t.delta_i0 == doctest::Approx(exact.estimate(g, SeedSet{4})).epsilon(1e-14));
  }
  SUBCASE("star with confirmed hub") {
    const Graph g = testing::star(3, 0.5);
    Rng rng(0);
    EnvConfig cfg = config(2, 2, 1.0);
    EnvState s = reset(g, cfg);
    s = step_sub(s, 0);
    s = step_sub(s, 3);
    s = step_round_end(s, rng).first;  // q = 1: hub and leaf 3 confirmed
    auto t = compute_reward_terms(g, s, 1, exact);
    CHECK(t.delta_i0 == t.delta_ib1);
    s = step_sub(s, 2);
    t = compute_reward_terms(g, s, 1, exact);
    CHECK(t.delta_ib1 <= t.delta_i0 + 1e-12);
    CHECK(t.common_difference == doctest::Approx(t.delta_ib1 - t.delta_i0));
  }
  SUBCASE("isolated action") {
    const Graph g(5, {{0, 1}, {1, 2}, {2, 3}}, 0.6);
    EnvState s = reset(g, config(1, 4, 0.5));
    s = step_sub(s, 0);
    s = step_sub(s, 2);
    const auto t = compute_reward_terms(g, s, 4, exact);
    CHECK(t.delta_i0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.delta_ib1 == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("bad calls") {
    const Graph g = testing::path(4, 0.5);
    EnvState s = reset(g, config(1, 1, 0.5));
    CHECK_THROWS_AS(compute_reward_terms(g, step_sub(s, 0), 1, exact), std::logic_error);
    s = step_sub(reset(g, config(2, 2, 0.5)), 0);
    CHECK_THROWS_AS(compute_reward_terms(g, s, 0, exact), std::invalid_argument);
  }
}

TEST_CASE("surrogate reward") {
  const RewardTerms t{10.0, 4.0, -3.0};
  CHECK(surrogate_reward(t, 0.0) == 10.0);
  CHECK(surrogate_reward(t, 1.0) == 4.0);
  CHECK(surrogate_reward(t, 0.25) == doctest::Approx(8.5).epsilon(1e-15));
}

TEST_CASE("exact expected reward") {
  auto exact = InfluenceEstimator::exact();
  SUBCASE("b = 1 is the plain marginal") {
    const Graph g = generate_powerlaw_cluster({7, 2, 0.05, 2}, 0.5);
    const EnvState s = reset(g, config(1, 3, 0.6));
    const auto before = exact.call_count();
    CHECK(exact_expected_reward(g, s, 3, 0.6, exact) ==
          doctest::Approx(exact.marginal_contribution(g, SeedSet{}, 3)).epsilon(1e-14));
    CHECK(exact.call_count() - before == 2 + 2);
  }
  SUBCASE("b = 2 equals the surrogate") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const auto small = testing::random_small_graph(rng, 5, 0.6);
      const Graph g = testing::to_graph(small, 0.4);
      EnvState s = reset(g, config(2, 2, 0.3));
      s = step_sub(s, static_cast<NodeId>(trial % 5));
      for (NodeId a : s.feasible()) {
        const auto t = compute_reward_terms(g, s, a, exact);
        CHECK(std::abs(exact_expected_reward(g, s, a, 0.3, exact) - surrogate_reward(t, 0.3)) <=
              1e-12);
      }
    }
  }
  SUBCASE("matches a brute-force re-derivation") {
    std::mt19937_64 rng(8);
    const auto small = testing::random_small_graph(rng, 5, 0.6);
    const Graph g = testing::to_graph(small, 0.5);
    EnvState s = reset(g, config(1, 4, 0.6));
    s = step_sub(s, 0);
    s = step_sub(s, 3);
    CHECK(s.sub_step() == 3);
    for (NodeId a : s.feasible()) {
      const double expected = oracle::expected_reward(small, 0.5, {}, {0, 3}, a, 0.6);
      CHECK(exact_expected_reward(g, s, a, 0.6, exact) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("requires exact influence") {
    auto mc = InfluenceEstimator::monte_carlo(10, 1);
    const Graph g = testing::path(4, 0.5);
    CHECK_THROWS_AS(exact_expected_reward(g, reset(g, config(1, 2, 0.5)), 1, 0.5, mc),
                    std::invalid_argument);
  }
}

TEST_CASE("gap bound") {
  CHECK(gap_bound({5.0, 5.0, 0.0}, 0.3, 5) == 0.0);
  const auto g2 = gap_bound_terms({7.0, 3.0, -4.0}, 0.5, 2);
  CHECK(g2.mostly_unwilling == 0.0);
  CHECK(g2.mostly_willing == 0.0);
  CHECK(gap_bound({7.0, 3.0, -4.0}, 0.5, 2) == 0.0);
  const auto g4 = gap_bound_terms({10.0, 4.0, -2.0}, 0.6, 4);
  CHECK(g4.mostly_unwilling == doctest::Approx(3.216).epsilon(1e-14));
  CHECK(g4.mostly_willing == doctest::Approx(1.104).epsilon(1e-14));
  CHECK(gap_bound({10.0, 4.0, -2.0}, 0.6, 4) == doctest::Approx(3.216).epsilon(1e-14));
  CHECK(gap_bound({10.0, 4.0, -2.0}, 0.6, 1) == 0.0);
  CHECK_THROWS_AS(gap_bound_terms({1.0, 1.0, 0.0}, 0.5, 0), std::invalid_argument);
}

TEST_CASE("gap bound dominates the worst arithmetic case") {
  // For an arithmetic sequence the surrogate is exact; the largest error
  // over sequences pinned at both ends is reached by a step function. The
  // stated bound must cover those extremes.
  for (std::size_t b = 1; b <= 12; ++b) {
    for (int qi = 1; qi <= 9; ++qi) {
      const double q = qi / 10.0;
      const double spread = 6.0;
      const double e = static_cast<double>(b - 1);
      const double worst_low = (q - std::pow(q, e)) * spread;
      const double worst_high = (1 - q - std::pow(1 - q, e)) * spread;
      const double bound = gap_bound({spread, 0.0, -spread}, q, b);
      CHECK(bound >= 0.0);
      if (b >= 2) {
        CHECK(bound + 1e-12 >= worst_low);
        CHECK(bound + 1e-12 >= worst_high);
      }
    }
  }
}

TEST_CASE("evaluation counts") {
  CHECK(evaluation_count_audit(RewardOp::surrogate, 1) == 4);
  CHECK(evaluation_count_audit(RewardOp::surrogate, 9) == 4);
  CHECK(evaluation_count_audit(RewardOp::exact, 3) == 8);
  CHECK(evaluation_count_audit(RewardOp::exact, 1) == 2);

  const Graph g = testing::path(10, 0.5);
  auto mc = InfluenceEstimator::monte_carlo(5, 1);
  auto exact = InfluenceEstimator::exact();
  EnvState s = reset(g, config(1, 6, 0.5));
  for (std::size_t b = 1; b <= 6; ++b) {
    auto c0 = mc.call_count();
    compute_reward_terms(g, s, s.feasible().back(), mc);
    CHECK(mc.call_count() - c0 == evaluation_count_audit(RewardOp::surrogate, b));
    c0 = exact.call_count();
    exact_expected_reward(g, s, s.feasible().back(), 0.5, exact);
    CHECK(exact.call_count() - c0 == evaluation_count_audit(RewardOp::exact, b));
    s = step_sub(s, s.feasible().front());
  }
}
