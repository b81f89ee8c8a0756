#include <doctest.h>

#include <cmath>

#include "rl4im/agent.hpp"
#include "test_support.hpp"

using namespace rl4im;

namespace {

const QNetworkShape kSmall{8, 2, 16};

TransitionRecord transition(const Graph& g, double reward, bool terminal) {
  TransitionRecord t;
  t.graph_index = 0;
  t.abstracted_state.assign(g.node_count(), 0.0);
  t.abstracted_state[1] = 0.6;
  t.action = 2;
  t.reward = reward;
  t.next_abstracted_state = t.abstracted_state;
  t.next_abstracted_state[2] = 0.6;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v != 1 && v != 2) t.next_feasible.push_back(v);
  }
  t.terminal = terminal;
  return t;
}

double q_of(const QNetworkParams& p, const Graph& g, const TransitionRecord& t) {
  return q_values(p, g, t.abstracted_state, std::vector<NodeId>{t.action})[0];
}

}  // namespace

TEST_CASE("epsilon schedule") {
  TrainConfig c;
  c.max_train_steps = 100;
  CHECK(c.epsilon_at(0) == 1.0);
  CHECK(c.epsilon_at(25) == doctest::Approx(0.525));
  CHECK(c.epsilon_at(50) == 0.05);
  CHECK(c.epsilon_at(99) == 0.05);
  c.epsilon_decay_steps = 10;
  CHECK(c.epsilon_at(10) == 0.05);
}

TEST_CASE("action selection") {
  Rng rng(1);
  const std::vector<NodeId> feasible{2, 5, 7};
  CHECK(select_action(std::vector<double>{0.1, 0.9, 0.3}, feasible, 0.0, rng) == 5);
  CHECK(select_action(std::vector<double>{0.4, 0.4, 0.3}, feasible, 0.0, rng) == 2);
  std::vector<int> count(8, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++count[select_action(std::vector<double>{0, 1, 0}, feasible, 1.0, rng)];
  const double sigma = std::sqrt(draws / 3.0 * (2.0 / 3.0));
  for (NodeId v = 0; v < 8; ++v) {
    if (v == 2 || v == 5 || v == 7) {
      CHECK(std::abs(count[v] - draws / 3.0) <= 3.5 * sigma);
    } else {
      CHECK(count[v] == 0);
    }
  }
  CHECK_THROWS_AS(select_action({}, {}, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(select_action(std::vector<double>{1.0}, feasible, 0.0, rng), std::invalid_argument);
}

TEST_CASE("replay buffer is a bounded FIFO") {
  ReplayBuffer buf(3);
  const Graph g = testing::path(5, 0.1);
  for (int i = 0; i < 5; ++i) buf.push(transition(g, i, false));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).reward == 2.0);
  CHECK(buf.at(2).reward == 4.0);
  Rng rng(0);
  for (const auto* t : buf.sample(50, rng)) CHECK(t->reward >= 2.0);
  CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
  CHECK_THROWS_AS(ReplayBuffer(2).sample(1, rng), std::logic_error);
  CHECK_THROWS_AS(buf.push(transition(g, std::nan(""), false)), std::invalid_argument);
}

TEST_CASE("TD targets") {
  const Graph g = testing::path(5, 0.1);
  const std::vector<Graph> graphs{g};
  const auto params = QNetworkParams::initialize(kSmall, 4);
  auto target = QNetworkParams::initialize(kSmall, 5);

  SUBCASE("terminal transitions ignore gamma") {
    const auto t = transition(g, 1.5, true);
    for (double gamma : {0.0, 0.99}) {
      auto p = params;
      Adam adam(kSmall, 1e-3, 0.9, 0.999, 1e-8);
      const std::vector<const TransitionRecord*> batch{&t};
      const double err = q_of(params, g, t) - 1.5;
      CHECK(td_update(p, target, batch, graphs, gamma, adam) == doctest::Approx(err * err).epsilon(1e-14));
    }
  }
  SUBCASE("gamma = 0 drops the continuation") {
    const auto t = transition(g, -0.5, false);
    auto p = params;
    Adam adam(kSmall, 1e-3, 0.9, 0.999, 1e-8);
    const std::vector<const TransitionRecord*> batch{&t};
    const double err = q_of(params, g, t) + 0.5;
    CHECK(td_update(p, target, batch, graphs, 0.0, adam) == doctest::Approx(err * err).epsilon(1e-14));
  }
  SUBCASE("continuation uses the target network's best feasible action") {
    const auto t = transition(g, 0.25, false);
    auto p = params;
    Adam adam(kSmall, 1e-3, 0.9, 0.999, 1e-8);
    const std::vector<const TransitionRecord*> batch{&t};
    const auto next = q_values(target, g, t.next_abstracted_state, t.next_feasible);
    const double y = 0.25 + 0.9 * *std::max_element(next.begin(), next.end());
    const double err = q_of(params, g, t) - y;
    CHECK(td_update(p, target, batch, graphs, 0.9, adam) == doctest::Approx(err * err).epsilon(1e-14));
    CHECK_FALSE(p == params);
  }
  SUBCASE("repeated updates fit a single transition") {
    const auto t = transition(g, 2.0, true);
    auto p = params;
    Adam adam(kSmall, 1e-2, 0.9, 0.999, 1e-8);
    const std::vector<const TransitionRecord*> batch{&t};
    for (int i = 0; i < 500; ++i) td_update(p, target, batch, graphs, 0.99, adam);
    CHECK(std::abs(q_of(p, g, t) - 2.0) < 1e-3);
    CHECK(adam.steps() == 500);
  }
  SUBCASE("non-finite loss is reported") {
    auto t = transition(g, 1.0, true);
    auto p = params;
    p.output_bias() = std::numeric_limits<double>::infinity();
    Adam adam(kSmall, 1e-3, 0.9, 0.999, 1e-8);
    const std::vector<const TransitionRecord*> batch{&t};
    CHECK_THROWS_AS(td_update(p, target, batch, graphs, 0.9, adam), std::runtime_error);
  }
}

namespace {

struct TinySetup {
  std::vector<Graph> train_graphs;
  std::vector<Graph> val_graphs;
  EnvConfig env;
  TrainConfig cfg;
};

TinySetup tiny_setup() {
  TinySetup s;
  for (std::uint64_t i = 0; i < 4; ++i) s.train_graphs.push_back(generate_powerlaw_cluster({15, 2, 0.05, i}, 0.2));
  s.val_graphs.push_back(generate_powerlaw_cluster({15, 2, 0.05, 100}, 0.2));
  s.env.rounds = 2;
  s.env.budget = 2;
  s.env.q = 0.6;
  s.cfg.network = kSmall;
  s.cfg.max_train_steps = 60;
  s.cfg.batch_size = 8;
  s.cfg.num_sims = 10;
  s.cfg.episodes_per_validation_graph = 3;
  s.cfg.rng_seed = 12;
  return s;
}

}  // namespace

TEST_CASE("training is deterministic") {
  const auto s = tiny_setup();
  const auto a = train(s.train_graphs, s.val_graphs, s.env, s.cfg);
  const auto b = train(s.train_graphs, s.val_graphs, s.env, s.cfg);
  REQUIRE(a.log.size() == 3);
  CHECK(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].step == 20 * (i + 1));
    CHECK(a.log[i].val_mean == b.log[i].val_mean);
    CHECK(a.log[i].val_std == b.log[i].val_std);
    CHECK(std::isnan(a.log[i].loss) == std::isnan(b.log[i].loss));
    if (!std::isnan(a.log[i].loss)) CHECK(a.log[i].loss == b.log[i].loss);
  }
  CHECK(a.best == b.best);
  CHECK(a.best_row < a.log.size());
  for (const auto& row : a.log) CHECK(row.val_mean <= a.log[a.best_row].val_mean);
}

TEST_CASE("training without updates keeps the initial network") {
  auto s = tiny_setup();
  s.cfg.max_train_steps = 5;
  s.cfg.batch_size = 32;
  s.cfg.validation_interval = 5;
  const auto r = train(s.train_graphs, s.val_graphs, s.env, s.cfg);
  CHECK(r.best == QNetworkParams::initialize(s.cfg.network, derive_seed(s.cfg.rng_seed, {1})));
  REQUIRE(r.log.size() == 1);
  CHECK(std::isnan(r.log[0].loss));

  s.cfg.max_train_steps = 0;
  const auto none = train(s.train_graphs, s.val_graphs, s.env, s.cfg);
  CHECK(none.log.empty());
  CHECK(none.best_row == 0);
}

TEST_CASE("training rejects bad inputs") {
  auto s = tiny_setup();
  CHECK_THROWS_AS(train({}, s.val_graphs, s.env, s.cfg), std::invalid_argument);
  CHECK_THROWS_AS(train(s.train_graphs, {}, s.env, s.cfg), std::invalid_argument);
  s.cfg.gamma = 1.5;
  CHECK_THROWS_AS(train(s.train_graphs, s.val_graphs, s.env, s.cfg), std::invalid_argument);
}

TEST_CASE("greedy Q policy picks a feasible argmax") {
  const Graph g = testing::path(6, 0.1);
  const auto p = QNetworkParams::initialize(kSmall, 1);
  EnvConfig cfg;
  cfg.rounds = 1;
  cfg.budget = 3;
  EnvState s = step_sub(reset(g, cfg), 2);
  const NodeId a = greedy_action(p, g, s);
  CHECK(s.is_feasible(a));
  const auto x = abstract_state(s, cfg.q);
  const auto feasible = std::vector<NodeId>(s.feasible().begin(), s.feasible().end());
  const auto q = q_values(p, g, x, feasible);
  CHECK(q[std::find(feasible.begin(), feasible.end(), a) - feasible.begin()] ==
        *std::max_element(q.begin(), q.end()));
}
