#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rl4im/diffusion.hpp"
#include "rl4im/env.hpp"
#include "rl4im/graph.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

/// How influence gets estimated wherever a fresh estimator is needed.
struct EstimatorSpec {
  bool exact = false;
  std::size_t num_sims = 100;

  InfluenceEstimator make(std::uint64_t seed) const {
    return exact ? InfluenceEstimator::exact() : InfluenceEstimator::monte_carlo(num_sims, seed);
  }
};

/// Chooses the next node for the given state. The Rng is a per-episode
/// stream reserved for the policy's own randomness.
using Policy = std::function<NodeId(const Graph&, const EnvState&, Rng&)>;

/// Seeds for one episode, derived from (base seed, graph index, run index)
/// so every method sees the same willingness coins and evaluation worlds.
struct EpisodeSeeds {
  std::uint64_t environment;
  std::uint64_t influence;
  std::uint64_t policy;
};

EpisodeSeeds episode_seeds(std::uint64_t base, std::size_t graph_index, std::size_t run);

struct EpisodeOutcome {
  double influence = 0.0;
  SeedSet selected;  // every pick in order
  SeedSet willing;
  double selection_seconds = 0.0;  // wall time spent inside the policy
};

/// Runs one full episode (T * B picks, T round ends) and scores the
/// confirmed seeds with a fresh estimator.
EpisodeOutcome run_episode(const Graph& graph, const EnvConfig& env_cfg, const Policy& policy,
                           const EpisodeSeeds& seeds, const EstimatorSpec& scoring);

struct PolicyStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

PolicyStats summarize(std::span<const double> values);

/// Terminal influence over graphs x episodes_per_graph paired episodes.
std::vector<double> evaluate_policy(std::span<const Graph> graphs, const EnvConfig& env_cfg,
                                    const Policy& policy, std::size_t episodes_per_graph,
                                    const EstimatorSpec& scoring, std::uint64_t seed);

Policy make_random_policy();
/// Adaptive greedy baseline; its estimator is seeded from the episode's
/// policy stream.
Policy make_greedy_policy(const EstimatorSpec& marginals);

}  // namespace rl4im
