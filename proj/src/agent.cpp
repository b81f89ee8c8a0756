#include "rl4im/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rl4im/diffusion.hpp"
#include "rl4im/reward.hpp"

namespace rl4im {

double TrainConfig::epsilon_at(std::size_t step) const {
  const std::size_t decay = epsilon_decay_steps > 0 ? epsilon_decay_steps : max_train_steps / 2;
  if (decay == 0 || step >= decay) return epsilon_end;
  const double frac = static_cast<double>(step) / static_cast<double>(decay);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(TransitionRecord record) {
  if (!std::isfinite(record.reward)) throw std::invalid_argument("non-finite reward in transition");
  if (records_.size() == capacity_) records_.pop_front();
  records_.push_back(std::move(record));
}

std::vector<const TransitionRecord*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (records_.empty()) throw std::logic_error("cannot sample from an empty replay buffer");
  std::vector<const TransitionRecord*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(&records_[uniform_index(rng, records_.size())]);
  return out;
}

Adam::Adam(const QNetworkShape& shape, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  const std::size_t n = QNetworkParams(shape).size();
  m_.assign(n, 0.0);
  v_.assign(n, 0.0);
}

void Adam::step(QNetworkParams& params, const QNetworkParams& grad) {
  auto w = params.values();
  auto g = grad.values();
  if (w.size() != m_.size() || g.size() != m_.size()) {
    throw std::invalid_argument("Adam state does not match the parameter layout");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < w.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g[i] * g[i];
    w[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

NodeId select_action(std::span<const double> q, std::span<const NodeId> feasible, double epsilon,
                     Rng& rng) {
  if (feasible.empty()) throw std::invalid_argument("select_action: feasible set is empty");
  if (q.size() != feasible.size()) {
    throw std::invalid_argument("select_action: one Q-value per feasible node expected");
  }
  if (uniform01(rng) < epsilon) return feasible[uniform_index(rng, feasible.size())];
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (q[i] > q[best] || (q[i] == q[best] && feasible[i] < feasible[best])) best = i;
  }
  return feasible[best];
}

NodeId greedy_action(const QNetworkParams& params, const Graph& graph, const EnvState& state) {
  const auto feasible = state.feasible();
  const auto x = abstract_state(state, state.config().q);
  const auto q = q_values(params, graph, x, feasible);
  Rng unused(0);
  return select_action(q, feasible, 0.0, unused);
}

Policy make_q_policy(const QNetworkParams& params) {
  return [&params](const Graph& graph, const EnvState& state, Rng&) {
    return greedy_action(params, graph, state);
  };
}

double td_update(QNetworkParams& params, const QNetworkParams& target_params,
                 std::span<const TransitionRecord* const> batch, std::span<const Graph> graphs,
                 double gamma, Adam& optimizer) {
  if (batch.empty()) throw std::invalid_argument("td_update: empty batch");
  const double n = static_cast<double>(batch.size());
  QNetworkParams grad(params.shape());
  double loss = 0.0;
  for (const TransitionRecord* rec : batch) {
    const Graph& graph = graphs[rec->graph_index];
    double target = rec->reward;
    if (!rec->terminal && gamma != 0.0 && !rec->next_feasible.empty()) {
      const auto next_q =
          q_values(target_params, graph, rec->next_abstracted_state, rec->next_feasible);
      target += gamma * *std::max_element(next_q.begin(), next_q.end());
    }
    accumulate_q_gradient(
        params, graph, rec->abstracted_state, rec->action,
        [&](double q) {
          const double err = q - target;
          loss += err * err;
          return 2.0 * err / n;
        },
        grad);
  }
  loss /= n;
  if (!std::isfinite(loss)) {
    throw std::runtime_error("TD loss became non-finite (" + std::to_string(loss) + ")");
  }
  optimizer.step(params, grad);
  if (!params.all_finite()) throw std::runtime_error("Q-network weights became non-finite");
  return loss;
}

TrainResult train(std::span<const Graph> train_graphs, std::span<const Graph> val_graphs,
                  const EnvConfig& env_cfg, const TrainConfig& cfg) {
  if (train_graphs.empty()) throw std::invalid_argument("training needs at least one graph");
  if (val_graphs.empty()) throw std::invalid_argument("training needs validation graphs");
  if (cfg.batch_size == 0 || cfg.validation_interval == 0 || cfg.target_update_interval == 0) {
    throw std::invalid_argument("batch size and intervals must be positive");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");

  Rng rng(derive_seed(cfg.rng_seed, {0}));
  QNetworkParams params = QNetworkParams::initialize(cfg.network, derive_seed(cfg.rng_seed, {1}));
  QNetworkParams target = params;
  Adam adam(cfg.network, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);
  ReplayBuffer buffer(cfg.replay_capacity);
  InfluenceEstimator reward_est =
      InfluenceEstimator::monte_carlo(cfg.num_sims, derive_seed(cfg.rng_seed, {2}));
  const std::uint64_t val_seed = derive_seed(cfg.rng_seed, {3});
  const EstimatorSpec scoring{false, cfg.num_sims};
  const double q = env_cfg.q;

  TrainResult result{params, {}, 0};
  double best_val = -std::numeric_limits<double>::infinity();
  double loss_sum = 0.0;
  std::size_t loss_count = 0;
  std::size_t updates = 0;
  std::size_t step = 0;

  while (step < cfg.max_train_steps) {
    const std::size_t g = uniform_index(rng, train_graphs.size());
    const Graph& graph = train_graphs[g];
    EnvState state = reset(graph, env_cfg);
    Rng env_rng(rng());
    while (!state.finished() && step < cfg.max_train_steps) {
      std::vector<double> x = abstract_state(state, q);
      std::vector<NodeId> feasible(state.feasible().begin(), state.feasible().end());
      const auto qv = q_values(params, graph, x, feasible);
      const NodeId action = select_action(qv, feasible, cfg.epsilon_at(step), rng);

      const RewardTerms terms = compute_reward_terms(graph, state, action, reward_est);
      double reward = 0.0;
      switch (cfg.reward) {
        case RewardMode::surrogate:
          reward = surrogate_reward(terms, q);
          break;
        case RewardMode::optimistic:
          reward = terms.delta_i0;
          break;
        case RewardMode::pessimistic:
          reward = terms.delta_ib1;
          break;
      }

      state = step_sub(std::move(state), action);
      if (state.round_complete()) state = step_round_end(std::move(state), env_rng).first;

      TransitionRecord rec;
      rec.graph_index = g;
      rec.abstracted_state = std::move(x);
      rec.action = action;
      rec.reward = reward;
      rec.next_abstracted_state = abstract_state(state, q);
      rec.next_feasible.assign(state.feasible().begin(), state.feasible().end());
      rec.terminal = state.finished();
      buffer.push(std::move(rec));

      if (buffer.size() >= cfg.batch_size) {
        const auto batch = buffer.sample(cfg.batch_size, rng);
        loss_sum += td_update(params, target, batch, train_graphs, cfg.gamma, adam);
        ++loss_count;
        if (++updates % cfg.target_update_interval == 0) target = params;
      }

      ++step;
      if (step % cfg.validation_interval == 0) {
        const auto values = evaluate_policy(val_graphs, env_cfg, make_q_policy(params),
                                            cfg.episodes_per_validation_graph, scoring, val_seed);
        const PolicyStats stats = summarize(values);
        TrainLogRow row{step,
                        loss_count > 0 ? loss_sum / static_cast<double>(loss_count)
                                       : std::numeric_limits<double>::quiet_NaN(),
                        stats.mean, stats.stddev};
        loss_sum = 0.0;
        loss_count = 0;
        if (row.val_mean > best_val) {
          best_val = row.val_mean;
          result.best = params;
          result.best_row = result.log.size();
        }
        result.log.push_back(row);
      }
    }
  }
  return result;
}

}  // namespace rl4im
