#include "rl4im/audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rl4im/diffusion.hpp"
#include "rl4im/env.hpp"
#include "rl4im/graph.hpp"
#include "rl4im/reward.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

namespace {

constexpr double kTol = 1e-12;

AuditCheck make_check(std::string name, std::size_t cases, double worst) {
  AuditCheck c;
  c.name = std::move(name);
  c.cases = cases;
  c.worst = worst;
  c.passed = worst <= kTol;
  return c;
}

AuditCheck check_normalization() {
  double worst = -1.0;
  std::size_t cases = 0;
  for (std::size_t budget = 1; budget <= 10; ++budget) {
    for (int qi = 0; qi <= 10; ++qi) {
      const double q = qi / 10.0;
      double total = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << budget); ++mask) {
        total += realization_probability(budget, static_cast<std::size_t>(std::popcount(mask)), q);
      }
      worst = std::max(worst, std::abs(total - 1.0));
      ++cases;
    }
  }
  auto c = make_check("realization probabilities sum to 1 (B <= 10)", cases, worst);
  c.detail = "max |sum - 1|";
  return c;
}

// With marginals that change by a fixed step per willing pending pick, the
// realization-weighted average equals the surrogate.
AuditCheck check_arithmetic_identity(Rng& rng) {
  double worst = -1.0;
  std::size_t cases = 0;
  for (std::size_t b = 1; b <= 12; ++b) {
    for (int qi = 1; qi <= 9; ++qi) {
      const double q = qi / 10.0;
      const double first = 1.0 + 10.0 * uniform01(rng);
      const double step = -first * uniform01(rng) / static_cast<double>(b);
      const std::size_t pending = b - 1;
      double enumerated = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << pending); ++mask) {
        const auto willing = static_cast<std::size_t>(std::popcount(mask));
        enumerated += realization_probability(pending, willing, q) *
                      (first + step * static_cast<double>(willing));
      }
      RewardTerms terms{first, first + step * static_cast<double>(pending), step};
      worst = std::max(worst, std::abs(enumerated - surrogate_reward(terms, q)));
      ++cases;
    }
  }
  auto c = make_check("arithmetic-sequence identity (b <= 12)", cases, worst);
  c.detail = "max |enumerated - surrogate|";
  return c;
}

Graph random_small_graph(Rng& rng, std::size_t max_nodes, double p) {
  const std::size_t n = 2 + uniform_index(rng, max_nodes - 1);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (uniform01(rng) < 0.5) edges.push_back({u, v});
    }
  }
  return Graph(n, std::move(edges), p);
}

struct SweepStats {
  std::size_t cases = 0;
  std::size_t small_b_cases = 0;
  double gap_violation = -1.0;
  double bracket_violation = -1.0;
  double small_b_error = -1.0;
};

// Every sub-step of random-action episodes on random small graphs.
SweepStats reward_sweep(const AuditOptions& options, Rng& rng) {
  SweepStats s;
  InfluenceEstimator exact = InfluenceEstimator::exact();
  for (std::size_t gi = 0; gi < options.random_graphs; ++gi) {
    const double p = gi % 2 == 0 ? 0.3 : 0.7;
    const Graph graph = random_small_graph(rng, options.max_nodes, p);
    const std::size_t n = graph.node_count();
    for (double q : {0.2, 0.5, 0.8}) {
      EnvConfig cfg;
      cfg.budget = 1 + uniform_index(rng, std::min(options.max_budget, n));
      cfg.rounds = std::max<std::size_t>(1, n / cfg.budget);
      cfg.q = q;
      cfg.rng_seed = rng();
      Environment env(graph, cfg);
      while (!env.done()) {
        const EnvState& state = env.state();
        const auto feasible = state.feasible();
        const std::size_t b = state.sub_step();
        for (NodeId a : feasible) {
          const RewardTerms terms = compute_reward_terms(graph, state, a, exact);
          const double surrogate = surrogate_reward(terms, q);
          const double expected = exact_expected_reward(graph, state, a, q, exact);
          s.gap_violation =
              std::max(s.gap_violation, std::abs(surrogate - expected) - gap_bound(terms, q, b));
          s.bracket_violation = std::max(
              {s.bracket_violation, terms.delta_ib1 - expected, expected - terms.delta_i0});
          if (b <= 2) {
            s.small_b_error = std::max(s.small_b_error, std::abs(surrogate - expected));
            ++s.small_b_cases;
          }
          ++s.cases;
        }
        env.act(feasible[uniform_index(rng, feasible.size())]);
      }
    }
  }
  return s;
}

AuditCheck check_call_counts() {
  // A 10-node path keeps exact enumeration cheap while allowing b up to 8.
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < 10; ++v) edges.push_back({v, v + 1});
  const Graph graph(10, std::move(edges), 0.5);
  EnvConfig cfg;
  cfg.rounds = 1;
  cfg.budget = 8;
  cfg.q = 0.5;
  EnvState state = reset(graph, cfg);
  InfluenceEstimator mc = InfluenceEstimator::monte_carlo(10, 7);
  InfluenceEstimator exact = InfluenceEstimator::exact();
  double worst = -1.0;
  std::size_t cases = 0;
  for (std::size_t b = 1; b <= 8; ++b) {
    const NodeId action = state.feasible().front();
    const auto mc_before = mc.call_count();
    compute_reward_terms(graph, state, action, mc);
    const auto ex_before = exact.call_count();
    exact_expected_reward(graph, state, action, 0.5, exact);
    const bool ok = mc.call_count() - mc_before == evaluation_count_audit(RewardOp::surrogate, b) &&
                    evaluation_count_audit(RewardOp::surrogate, b) == 4 &&
                    exact.call_count() - ex_before == evaluation_count_audit(RewardOp::exact, b) &&
                    evaluation_count_audit(RewardOp::exact, b) == (std::uint64_t{1} << b);
    worst = std::max(worst, ok ? -1.0 : 1.0);
    cases += 2;
    state = step_sub(std::move(state), action);
  }
  auto c = make_check("evaluation counts 4 vs 2^b (b <= 8)", cases, worst);
  c.detail = c.passed ? "all counts match" : "count mismatch";
  return c;
}

}  // namespace

std::vector<AuditCheck> run_reward_audit(const AuditOptions& options) {
  if (options.max_nodes < 2) throw std::invalid_argument("audit needs graphs with >= 2 nodes");
  Rng rng(options.seed);
  std::vector<AuditCheck> checks;
  checks.push_back(check_normalization());
  checks.push_back(check_arithmetic_identity(rng));

  const SweepStats sweep = reward_sweep(options, rng);
  auto gap = make_check("|surrogate - exact| <= gap bound", sweep.cases, sweep.gap_violation);
  gap.detail = "max(|surrogate - exact| - bound)";
  auto bracket = make_check("delta_ib1 <= exact reward <= delta_i0", sweep.cases,
                            sweep.bracket_violation);
  bracket.detail = "max excursion outside the bracket";
  auto small_b = make_check("surrogate exact for b <= 2", sweep.small_b_cases, sweep.small_b_error);
  small_b.detail = "max |surrogate - exact|";
  checks.push_back(gap);
  checks.push_back(bracket);
  checks.push_back(small_b);

  checks.push_back(check_call_counts());
  return checks;
}

std::string format_audit_table(const std::vector<AuditCheck>& checks) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-46s %-6s %8s %12s\n", "check", "result", "cases", "worst");
  out += line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "%-46s %-6s %8zu %12.3e  %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.cases, std::max(c.worst, 0.0), c.detail.c_str());
    out += line;
  }
  return out;
}

}  // namespace rl4im
