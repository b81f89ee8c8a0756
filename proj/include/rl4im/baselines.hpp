#pragma once

#include "rl4im/diffusion.hpp"
#include "rl4im/env.hpp"
#include "rl4im/graph.hpp"
#include "rl4im/reward.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

/// Uniform pick from the feasible set. Throws std::invalid_argument when it
/// is empty.
NodeId random_policy(const EnvState& state, Rng& rng);

/// Greedy pick on top of confirmed seeds plus this round's pending picks
/// (treated as willing): argmax of the marginal contribution over feasible
/// nodes, ties to the lowest id.
NodeId adaptive_greedy_policy(const Graph& graph, const EnvState& state, InfluenceEstimator& est);

enum class AblationVariant { optimistic, pessimistic };

/// optimistic -> delta_i0 (no pending pick willing),
/// pessimistic -> delta_ib1 (every pending pick willing).
double ablation_reward(AblationVariant variant, const RewardTerms& terms);

}  // namespace rl4im
