#include "rl4im/baselines.hpp"

#include <limits>
#include <stdexcept>

namespace rl4im {

NodeId random_policy(const EnvState& state, Rng& rng) {
  const auto feasible = state.feasible();
  if (feasible.empty()) throw std::invalid_argument("random policy: feasible set is empty");
  return feasible[uniform_index(rng, feasible.size())];
}

NodeId adaptive_greedy_policy(const Graph& graph, const EnvState& state, InfluenceEstimator& est) {
  const auto feasible = state.feasible();
  if (feasible.empty()) throw std::invalid_argument("greedy policy: feasible set is empty");
  SeedSet base = state.willing_seeds();
  for (NodeId v : state.pending_order()) base.push_back(v);

  NodeId best = feasible.front();
  double best_gain = -std::numeric_limits<double>::infinity();
  for (NodeId v : feasible) {
    const double gain = est.marginal_contribution(graph, base, v);
    if (gain > best_gain) {
      best_gain = gain;
      best = v;
    }
  }
  return best;
}

double ablation_reward(AblationVariant variant, const RewardTerms& terms) {
  return variant == AblationVariant::optimistic ? terms.delta_i0 : terms.delta_ib1;
}

}  // namespace rl4im
