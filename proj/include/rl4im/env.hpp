#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rl4im/diffusion.hpp"
#include "rl4im/graph.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

struct EnvConfig {
  std::size_t rounds = 2;  // T, intervention rounds
  std::size_t budget = 4;  // B, picks per round
  double q = 0.6;          // willingness probability
  std::uint64_t rng_seed = 0;
};

struct RoundRealization {
  SeedSet selected;  // this round's picks, in selection order
  SeedSet willing;   // subset of `selected` that agreed to act as seeds

  std::size_t willing_count() const { return willing.size(); }
};

/// Status of every node as three disjoint binary rows:
///   willing    - seeds confirmed in closed rounds
///   unwilling  - picked in closed rounds but declined
///   pending    - picked in the current round, willingness not yet revealed
/// plus the round/sub-step counters (1-based) and the feasible set.
class EnvState {
 public:
  const EnvConfig& config() const { return cfg_; }
  std::size_t node_count() const { return willing_.size(); }

  std::span<const std::uint8_t> willing_row() const { return willing_; }
  std::span<const std::uint8_t> unwilling_row() const { return unwilling_; }
  std::span<const std::uint8_t> pending_row() const { return pending_; }

  std::size_t round() const { return round_; }
  std::size_t sub_step() const { return sub_step_; }
  bool round_complete() const { return round_complete_; }
  bool finished() const { return round_ > cfg_.rounds; }

  /// Not-yet-selected nodes, ascending.
  std::span<const NodeId> feasible() const { return feasible_; }
  bool is_feasible(NodeId v) const {
    return v < node_count() && !willing_[v] && !unwilling_[v] && !pending_[v];
  }

  /// Current-round picks in selection order.
  std::span<const NodeId> pending_order() const { return pending_order_; }
  SeedSet willing_seeds() const;
  SeedSet pending_seeds() const;
  SeedSet unwilling_nodes() const;

  friend EnvState reset(const Graph& graph, const EnvConfig& cfg);
  friend EnvState step_sub(EnvState state, NodeId action);
  friend std::pair<EnvState, RoundRealization> step_round_end(EnvState state, Rng& rng);

 private:
  EnvConfig cfg_;
  std::vector<std::uint8_t> willing_, unwilling_, pending_;
  std::size_t round_ = 1;
  std::size_t sub_step_ = 1;
  bool round_complete_ = false;
  std::vector<NodeId> feasible_;
  std::vector<NodeId> pending_order_;
};

/// Fresh episode. Throws std::invalid_argument unless T >= 1, B >= 1,
/// q in [0, 1] and T * B <= |V|.
EnvState reset(const Graph& graph, const EnvConfig& cfg);

/// Deterministic sub-step: marks `action` pending. Throws
/// std::invalid_argument for an infeasible action and std::logic_error when
/// the round is already complete or the episode is over.
EnvState step_sub(EnvState state, NodeId action);

/// Reveals willingness of this round's picks (independently with
/// probability q, drawn in selection order) and opens the next round.
std::pair<EnvState, RoundRealization> step_round_end(EnvState state, Rng& rng);

/// q^willing * (1 - q)^(selected - willing).
double realization_probability(std::size_t selected_count, std::size_t willing_count, double q);

/// willing + q * pending. Unwilling nodes are dropped; they only show up as
/// missing from the feasible set.
std::vector<double> abstract_state(const EnvState& state, double q);

/// Influence of all confirmed seeds. Throws std::logic_error mid-episode.
double terminal_influence(const Graph& graph, const EnvState& state, InfluenceEstimator& est);

/// Owns an episode: state plus the willingness RNG. `act` closes the round
/// automatically once the budget is spent.
class Environment {
 public:
  Environment(const Graph& graph, const EnvConfig& cfg);

  const Graph& graph() const { return *graph_; }
  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return state_.config(); }

  std::optional<RoundRealization> act(NodeId action);
  bool done() const { return state_.finished(); }

 private:
  const Graph* graph_;
  Rng rng_;
  EnvState state_;
};

}  // namespace rl4im
