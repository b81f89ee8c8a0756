#include "rl4im/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rl4im {

namespace {

void check_action(const EnvState& state, NodeId action) {
  if (state.finished() || state.round_complete()) {
    throw std::logic_error("no action can be taken in the current state");
  }
  if (!state.is_feasible(action)) {
    throw std::invalid_argument("reward requested for infeasible action " + std::to_string(action));
  }
}

}  // namespace

RewardTerms compute_reward_terms(const Graph& graph, const EnvState& state, NodeId action,
                                 InfluenceEstimator& est) {
  check_action(state, action);
  std::vector<SeedSet> sets(4);
  sets[0] = state.willing_seeds();
  sets[1] = sets[0];
  sets[1].push_back(action);
  sets[2] = sets[0];
  for (NodeId v : state.pending_order()) sets[2].push_back(v);
  sets[3] = sets[2];
  sets[3].push_back(action);
  const auto influence = est.estimate_jointly(graph, sets);

  RewardTerms t;
  t.delta_i0 = influence[1] - influence[0];
  t.delta_ib1 = influence[3] - influence[2];
  const std::size_t pending = state.pending_order().size();
  t.common_difference = pending > 0 ? (t.delta_ib1 - t.delta_i0) / static_cast<double>(pending) : 0.0;
  return t;
}

double surrogate_reward(const RewardTerms& terms, double q) {
  return (1.0 - q) * terms.delta_i0 + q * terms.delta_ib1;
}

double exact_expected_reward(const Graph& graph, const EnvState& state, NodeId action, double q,
                             InfluenceEstimator& exact_est) {
  if (!exact_est.is_exact()) {
    throw std::invalid_argument("exact expected reward needs an exact influence estimator");
  }
  check_action(state, action);
  const auto pending = state.pending_order();
  const std::size_t k = pending.size();
  if (k > kMaxExactPending) {
    throw std::invalid_argument("exact expected reward enumerates 2^(b-1) realizations; b - 1 = " +
                                std::to_string(k) + " exceeds the limit of " +
                                std::to_string(kMaxExactPending));
  }
  const SeedSet confirmed = state.willing_seeds();
  const std::size_t realizations = std::size_t{1} << k;
  std::vector<SeedSet> sets;
  sets.reserve(2 * realizations);
  std::vector<double> weight(realizations);
  for (std::size_t mask = 0; mask < realizations; ++mask) {
    SeedSet base = confirmed;
    std::size_t willing = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) {
        base.push_back(pending[i]);
        ++willing;
      }
    }
    weight[mask] = realization_probability(k, willing, q);
    sets.push_back(base);
    base.push_back(action);
    sets.push_back(std::move(base));
  }
  const auto influence = exact_est.estimate_jointly(graph, sets);
  double reward = 0.0;
  for (std::size_t mask = 0; mask < realizations; ++mask) {
    reward += weight[mask] * (influence[2 * mask + 1] - influence[2 * mask]);
  }
  return reward;
}

GapBoundTerms gap_bound_terms(const RewardTerms& terms, double q, std::size_t b) {
  if (b < 1) throw std::invalid_argument("sub-step index b starts at 1");
  const double spread = terms.delta_i0 - terms.delta_ib1;
  const double e = static_cast<double>(b - 1);
  return {(q - std::pow(1.0 - q, e)) * spread, (1.0 - q - std::pow(q, e)) * spread};
}

double gap_bound(const RewardTerms& terms, double q, std::size_t b) {
  const auto g = gap_bound_terms(terms, q, b);
  return std::max({g.mostly_unwilling, g.mostly_willing, 0.0});
}

std::uint64_t evaluation_count_audit(RewardOp op, std::size_t b) {
  if (b < 1) throw std::invalid_argument("sub-step index b starts at 1");
  return op == RewardOp::surrogate ? 4 : std::uint64_t{1} << b;
}

}  // namespace rl4im
