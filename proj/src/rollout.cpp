#include "rl4im/rollout.hpp"

#include <chrono>
#include <cmath>

#include "rl4im/baselines.hpp"

namespace rl4im {

EpisodeSeeds episode_seeds(std::uint64_t base, std::size_t graph_index, std::size_t run) {
  return {derive_seed(base, {graph_index, run, 1}), derive_seed(base, {graph_index, run, 2}),
          derive_seed(base, {graph_index, run, 3})};
}

EpisodeOutcome run_episode(const Graph& graph, const EnvConfig& env_cfg, const Policy& policy,
                           const EpisodeSeeds& seeds, const EstimatorSpec& scoring) {
  EnvConfig cfg = env_cfg;
  cfg.rng_seed = seeds.environment;
  Environment env(graph, cfg);
  Rng policy_rng(seeds.policy);
  EpisodeOutcome out;
  while (!env.done()) {
    const auto start = std::chrono::steady_clock::now();
    const NodeId action = policy(graph, env.state(), policy_rng);
    out.selection_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.selected.push_back(action);
    env.act(action);
  }
  out.willing = env.state().willing_seeds();
  InfluenceEstimator est = scoring.make(seeds.influence);
  out.influence = terminal_influence(graph, env.state(), est);
  return out;
}

PolicyStats summarize(std::span<const double> values) {
  PolicyStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<double> evaluate_policy(std::span<const Graph> graphs, const EnvConfig& env_cfg,
                                    const Policy& policy, std::size_t episodes_per_graph,
                                    const EstimatorSpec& scoring, std::uint64_t seed) {
  std::vector<double> values;
  values.reserve(graphs.size() * episodes_per_graph);
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    for (std::size_t run = 0; run < episodes_per_graph; ++run) {
      values.push_back(
          run_episode(graphs[g], env_cfg, policy, episode_seeds(seed, g, run), scoring).influence);
    }
  }
  return values;
}

Policy make_random_policy() {
  return [](const Graph&, const EnvState& state, Rng& rng) { return random_policy(state, rng); };
}

Policy make_greedy_policy(const EstimatorSpec& marginals) {
  return [marginals](const Graph& graph, const EnvState& state, Rng& rng) {
    InfluenceEstimator est = marginals.make(rng());
    return adaptive_greedy_policy(graph, state, est);
  };
}

}  // namespace rl4im
