#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "rl4im/env.hpp"
#include "rl4im/graph.hpp"
#include "rl4im/qnet.hpp"
#include "rl4im/rng.hpp"
#include "rl4im/rollout.hpp"

namespace rl4im {

enum class RewardMode {
  surrogate,    // (1 - q) delta_i0 + q delta_ib1
  optimistic,   // delta_i0
  pessimistic,  // delta_ib1
};

struct TrainConfig {
  double gamma = 0.99;
  std::size_t batch_size = 32;
  std::size_t max_train_steps = 2000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::size_t epsilon_decay_steps = 0;  // 0: half of max_train_steps
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t target_update_interval = 50;  // in gradient updates
  std::size_t validation_interval = 20;     // in environment sub-steps
  std::size_t episodes_per_validation_graph = 20;
  std::size_t replay_capacity = 4096;
  std::size_t num_sims = 100;  // Monte Carlo runs per influence evaluation
  RewardMode reward = RewardMode::surrogate;
  QNetworkShape network;
  std::uint64_t rng_seed = 0;

  /// Linear decay from epsilon_start to epsilon_end, then flat.
  double epsilon_at(std::size_t step) const;
};

struct TransitionRecord {
  std::size_t graph_index = 0;  // into the graph set the buffer was filled from
  std::vector<double> abstracted_state;
  NodeId action = 0;
  double reward = 0.0;
  std::vector<double> next_abstracted_state;
  std::vector<NodeId> next_feasible;
  bool terminal = false;
};

/// Fixed-capacity FIFO of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(TransitionRecord record);
  std::size_t size() const { return records_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// 0 is the oldest stored record.
  const TransitionRecord& at(std::size_t i) const { return records_.at(i); }
  /// Draws `count` records uniformly with replacement.
  std::vector<const TransitionRecord*> sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<TransitionRecord> records_;
};

class Adam {
 public:
  Adam(const QNetworkShape& shape, double learning_rate, double beta1, double beta2,
       double epsilon);

  void step(QNetworkParams& params, const QNetworkParams& grad);
  std::size_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<double> m_, v_;
};

/// With probability epsilon a uniform feasible node, otherwise the feasible
/// argmax of q (lowest id on ties). q is aligned with `feasible`.
NodeId select_action(std::span<const double> q, std::span<const NodeId> feasible, double epsilon,
                     Rng& rng);

/// argmax_a Q(abstract(state), a) over the feasible set.
NodeId greedy_action(const QNetworkParams& params, const Graph& graph, const EnvState& state);

Policy make_q_policy(const QNetworkParams& params);

/// One Adam step on the mean squared TD error of `batch`, with targets
/// r + gamma * max_{a' feasible} Q_target(s', a') (no continuation when
/// terminal). Returns the loss before the update. Throws std::runtime_error
/// on a non-finite loss.
double td_update(QNetworkParams& params, const QNetworkParams& target_params,
                 std::span<const TransitionRecord* const> batch, std::span<const Graph> graphs,
                 double gamma, Adam& optimizer);

struct TrainLogRow {
  std::size_t step = 0;
  double loss = 0.0;  // mean TD loss of the updates since the previous row; NaN if none
  double val_mean = 0.0;
  double val_std = 0.0;
};

struct TrainResult {
  QNetworkParams best;
  std::vector<TrainLogRow> log;
  /// Row of `log` whose validation mean was highest (first on ties);
  /// log.size() when no validation ran and `best` is the initial network.
  std::size_t best_row = 0;
};

/// Trains on `train_graphs`, validating greedily every validation_interval
/// sub-steps on `val_graphs` with fixed per-(graph, episode) seeds.
TrainResult train(std::span<const Graph> train_graphs, std::span<const Graph> val_graphs,
                  const EnvConfig& env_cfg, const TrainConfig& cfg);

}  // namespace rl4im
