#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rl4im/graph.hpp"
#include "rl4im/rng.hpp"

namespace rl4im {

using SeedSet = std::vector<NodeId>;

/// Liveness of `edge` in the live-edge world identified by `world`. Every
/// cascade evaluated on the same world sees the same coin for each edge.
inline bool edge_live(std::uint64_t world, std::uint32_t edge, double p) {
  return to_unit_interval(splitmix64(world ^ splitmix64(edge))) < p;
}

/// One Independent Cascade run. Newly active nodes are processed in
/// ascending id order; each probes each inactive neighbor once with
/// probability p. Returns the active set at quiescence, sorted.
SeedSet simulate_ic_once(const Graph& graph, std::span<const NodeId> seeds, Rng& rng);

struct InfluenceSample {
  double mean = 0.0;
  double std_error = 0.0;  // zero for exact enumeration
};

/// I(G, S) estimator. Monte Carlo mode averages independent cascades;
/// exact mode sums P(world) * |reachable(S)| over all 2^|E| live-edge worlds.
/// Not synchronized; use one instance per worker.
class InfluenceEstimator {
 public:
  static constexpr std::size_t kMaxExactEdges = 20;

  static InfluenceEstimator monte_carlo(std::size_t num_sims, std::uint64_t seed);
  static InfluenceEstimator exact();

  bool is_exact() const { return exact_; }
  std::size_t num_sims() const { return num_sims_; }
  /// Number of influence evaluations performed so far (one per seed set).
  std::uint64_t call_count() const { return calls_; }

  double estimate(const Graph& graph, std::span<const NodeId> seeds);
  InfluenceSample estimate_with_error(const Graph& graph, std::span<const NodeId> seeds);

  /// I(G, base + v) - I(G, base); both terms share one sample of worlds.
  double marginal_contribution(const Graph& graph, std::span<const NodeId> base, NodeId v);

  /// Evaluates every set on one shared sample of live-edge worlds (common
  /// random numbers). Counts one evaluation per set.
  std::vector<double> estimate_jointly(const Graph& graph, std::span<const SeedSet> sets);

 private:
  InfluenceEstimator(bool exact, std::size_t num_sims, std::uint64_t seed);

  std::vector<InfluenceSample> evaluate(const Graph& graph, std::span<const SeedSet> sets);
  std::vector<InfluenceSample> evaluate_monte_carlo(const Graph& graph,
                                                    std::span<const SeedSet> sets);
  std::vector<InfluenceSample> evaluate_exact(const Graph& graph, std::span<const SeedSet> sets);

  bool exact_ = false;
  std::size_t num_sims_ = 0;
  Rng rng_;
  std::uint64_t calls_ = 0;

  // Cascade scratch, reused across calls.
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

}  // namespace rl4im
