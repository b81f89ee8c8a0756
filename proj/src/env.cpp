#include "rl4im/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rl4im {

namespace {

SeedSet support(std::span<const std::uint8_t> row) {
  SeedSet out;
  for (NodeId v = 0; v < row.size(); ++v) {
    if (row[v]) out.push_back(v);
  }
  return out;
}

}  // namespace

SeedSet EnvState::willing_seeds() const { return support(willing_); }
SeedSet EnvState::pending_seeds() const { return support(pending_); }
SeedSet EnvState::unwilling_nodes() const { return support(unwilling_); }

EnvState reset(const Graph& graph, const EnvConfig& cfg) {
  if (cfg.rounds < 1 || cfg.budget < 1) {
    throw std::invalid_argument("environment needs T >= 1 and B >= 1");
  }
  if (!(cfg.q >= 0.0 && cfg.q <= 1.0)) {
    throw std::invalid_argument("willingness probability q must lie in [0, 1]");
  }
  if (cfg.rounds * cfg.budget > graph.node_count()) {
    throw std::invalid_argument("total budget T*B = " + std::to_string(cfg.rounds * cfg.budget) +
                                " exceeds |V| = " + std::to_string(graph.node_count()));
  }
  EnvState s;
  s.cfg_ = cfg;
  const std::size_t n = graph.node_count();
  s.willing_.assign(n, 0);
  s.unwilling_.assign(n, 0);
  s.pending_.assign(n, 0);
  s.feasible_.resize(n);
  for (NodeId v = 0; v < n; ++v) s.feasible_[v] = v;
  return s;
}

EnvState step_sub(EnvState state, NodeId action) {
  if (state.finished()) throw std::logic_error("episode already finished");
  if (state.round_complete_) {
    throw std::logic_error("round budget spent; call step_round_end first");
  }
  if (!state.is_feasible(action)) {
    throw std::invalid_argument("action " + std::to_string(action) + " is not feasible");
  }
  state.pending_[action] = 1;
  state.pending_order_.push_back(action);
  state.feasible_.erase(std::lower_bound(state.feasible_.begin(), state.feasible_.end(), action));
  if (state.sub_step_ < state.cfg_.budget) {
    ++state.sub_step_;
  } else {
    state.round_complete_ = true;
  }
  return state;
}

std::pair<EnvState, RoundRealization> step_round_end(EnvState state, Rng& rng) {
  if (!state.round_complete_) throw std::logic_error("round end requested mid-round");
  RoundRealization r;
  r.selected = state.pending_order_;
  for (NodeId v : state.pending_order_) {
    if (uniform01(rng) < state.cfg_.q) {
      state.willing_[v] = 1;
      r.willing.push_back(v);
    } else {
      state.unwilling_[v] = 1;
    }
    state.pending_[v] = 0;
  }
  state.pending_order_.clear();
  state.round_complete_ = false;
  state.sub_step_ = 1;
  ++state.round_;
  return {std::move(state), std::move(r)};
}

double realization_probability(std::size_t selected_count, std::size_t willing_count, double q) {
  if (willing_count > selected_count) {
    throw std::invalid_argument("willing count exceeds selected count");
  }
  return std::pow(q, static_cast<double>(willing_count)) *
         std::pow(1.0 - q, static_cast<double>(selected_count - willing_count));
}

std::vector<double> abstract_state(const EnvState& state, double q) {
  const auto willing = state.willing_row();
  const auto pending = state.pending_row();
  std::vector<double> x(state.node_count());
  for (std::size_t v = 0; v < x.size(); ++v) {
    x[v] = static_cast<double>(willing[v]) + q * static_cast<double>(pending[v]);
  }
  return x;
}

double terminal_influence(const Graph& graph, const EnvState& state, InfluenceEstimator& est) {
  if (!state.finished()) throw std::logic_error("terminal influence requested mid-episode");
  return est.estimate(graph, state.willing_seeds());
}

Environment::Environment(const Graph& graph, const EnvConfig& cfg)
    : graph_(&graph), rng_(cfg.rng_seed), state_(reset(graph, cfg)) {}

std::optional<RoundRealization> Environment::act(NodeId action) {
  state_ = step_sub(state_, action);
  if (!state_.round_complete()) return std::nullopt;
  auto [next, realization] = step_round_end(std::move(state_), rng_);
  state_ = std::move(next);
  return realization;
}

}  // namespace rl4im
