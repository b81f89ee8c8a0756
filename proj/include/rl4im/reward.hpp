#pragma once

#include <cstddef>
#include <cstdint>

#include "rl4im/diffusion.hpp"
#include "rl4im/env.hpp"
#include "rl4im/graph.hpp"

namespace rl4im {

/// Marginal contributions of an action at sub-step b under the two extreme
/// willingness outcomes of the current round's pending picks.
struct RewardTerms {
  double delta_i0 = 0.0;   // no pending pick willing
  double delta_ib1 = 0.0;  // every pending pick willing
  double common_difference = 0.0;  // (delta_ib1 - delta_i0) / (b - 1), 0 when b == 1
};

/// Four influence evaluations on one shared world sample:
/// I(W), I(W + a), I(W + C), I(W + C + a) with W the confirmed seeds and C
/// the pending picks.
RewardTerms compute_reward_terms(const Graph& graph, const EnvState& state, NodeId action,
                                 InfluenceEstimator& est);

/// (1 - q) * delta_i0 + q * delta_ib1.
double surrogate_reward(const RewardTerms& terms, double q);

/// Largest pending count for which exact_expected_reward enumerates.
inline constexpr std::size_t kMaxExactPending = 12;

/// Expected marginal contribution of `action` over every willingness
/// realization of the pending picks, weighted by q^k (1-q)^(b-1-k). Needs an
/// exact estimator; costs 2^b influence evaluations.
double exact_expected_reward(const Graph& graph, const EnvState& state, NodeId action, double q,
                             InfluenceEstimator& exact_est);

struct GapBoundTerms {
  double mostly_unwilling = 0.0;  // (q - (1-q)^(b-1)) * (delta_i0 - delta_ib1)
  double mostly_willing = 0.0;    // (1 - q - q^(b-1)) * (delta_i0 - delta_ib1)
};

GapBoundTerms gap_bound_terms(const RewardTerms& terms, double q, std::size_t b);

/// Worst-case |surrogate - exact expected reward|: the larger of the two
/// gap terms, clamped below at zero.
double gap_bound(const RewardTerms& terms, double q, std::size_t b);

enum class RewardOp { surrogate, exact };

/// Influence evaluations one reward computation performs at sub-step b.
std::uint64_t evaluation_count_audit(RewardOp op, std::size_t b);

}  // namespace rl4im
