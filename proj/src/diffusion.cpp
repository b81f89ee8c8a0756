#include "rl4im/diffusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rl4im {

namespace {

void check_seeds(const Graph& graph, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) {
      throw std::out_of_range("seed node " + std::to_string(s) + " out of range for graph with " +
                              std::to_string(graph.node_count()) + " nodes");
    }
  }
}

struct CascadeScratch {
  std::vector<std::uint32_t>& stamp;
  std::uint32_t epoch;
  std::vector<NodeId>& frontier;
  std::vector<NodeId>& next;
};

// Runs one cascade on a fixed live-edge world and returns the number of
// active nodes. Active nodes are those with stamp == epoch afterwards.
std::size_t cascade(const Graph& graph, std::span<const NodeId> seeds, std::uint64_t world,
                    CascadeScratch s) {
  const double p = graph.edge_probability();
  s.frontier.clear();
  std::size_t active = 0;
  for (NodeId v : seeds) {
    if (s.stamp[v] != s.epoch) {
      s.stamp[v] = s.epoch;
      s.frontier.push_back(v);
      ++active;
    }
  }
  while (!s.frontier.empty()) {
    std::sort(s.frontier.begin(), s.frontier.end());
    s.next.clear();
    for (NodeId u : s.frontier) {
      for (const Neighbor& nb : graph.neighbors(u)) {
        if (s.stamp[nb.node] == s.epoch) continue;
        if (edge_live(world, nb.edge, p)) {
          s.stamp[nb.node] = s.epoch;
          s.next.push_back(nb.node);
          ++active;
        }
      }
    }
    std::swap(s.frontier, s.next);
  }
  return active;
}

}  // namespace

SeedSet simulate_ic_once(const Graph& graph, std::span<const NodeId> seeds, Rng& rng) {
  check_seeds(graph, seeds);
  std::vector<std::uint32_t> stamp(graph.node_count(), 0);
  std::vector<NodeId> frontier, next;
  const std::uint64_t world = rng();
  cascade(graph, seeds, world, {stamp, 1, frontier, next});
  SeedSet active;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (stamp[v] == 1) active.push_back(v);
  }
  return active;
}

InfluenceEstimator::InfluenceEstimator(bool exact, std::size_t num_sims, std::uint64_t seed)
    : exact_(exact), num_sims_(num_sims), rng_(seed) {}

InfluenceEstimator InfluenceEstimator::monte_carlo(std::size_t num_sims, std::uint64_t seed) {
  if (num_sims == 0) throw std::invalid_argument("monte carlo estimator needs num_sims > 0");
  return InfluenceEstimator(false, num_sims, seed);
}

InfluenceEstimator InfluenceEstimator::exact() { return InfluenceEstimator(true, 0, 0); }

double InfluenceEstimator::estimate(const Graph& graph, std::span<const NodeId> seeds) {
  return estimate_with_error(graph, seeds).mean;
}

InfluenceSample InfluenceEstimator::estimate_with_error(const Graph& graph,
                                                        std::span<const NodeId> seeds) {
  const SeedSet set(seeds.begin(), seeds.end());
  return evaluate(graph, std::span<const SeedSet>(&set, 1)).front();
}

double InfluenceEstimator::marginal_contribution(const Graph& graph,
                                                 std::span<const NodeId> base, NodeId v) {
  if (std::find(base.begin(), base.end(), v) != base.end()) {
    throw std::invalid_argument("node " + std::to_string(v) + " is already in the base set");
  }
  std::vector<SeedSet> sets(2, SeedSet(base.begin(), base.end()));
  sets[1].push_back(v);
  const auto values = estimate_jointly(graph, sets);
  return values[1] - values[0];
}

std::vector<double> InfluenceEstimator::estimate_jointly(const Graph& graph,
                                                         std::span<const SeedSet> sets) {
  const auto samples = evaluate(graph, sets);
  std::vector<double> means;
  means.reserve(samples.size());
  for (const auto& s : samples) means.push_back(s.mean);
  return means;
}

std::vector<InfluenceSample> InfluenceEstimator::evaluate(const Graph& graph,
                                                          std::span<const SeedSet> sets) {
  for (const SeedSet& s : sets) check_seeds(graph, s);
  auto result = exact_ ? evaluate_exact(graph, sets) : evaluate_monte_carlo(graph, sets);
  calls_ += sets.size();
  return result;
}

std::vector<InfluenceSample> InfluenceEstimator::evaluate_monte_carlo(
    const Graph& graph, std::span<const SeedSet> sets) {
  if (stamp_.size() < graph.node_count()) {
    stamp_.assign(graph.node_count(), 0);
    epoch_ = 0;
  }
  std::vector<double> sum(sets.size(), 0.0), sum_sq(sets.size(), 0.0);
  for (std::size_t sim = 0; sim < num_sims_; ++sim) {
    const std::uint64_t world = rng_();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
      }
      const auto n = static_cast<double>(cascade(graph, sets[i], world, {stamp_, epoch_, frontier_, next_}));
      sum[i] += n;
      sum_sq[i] += n * n;
    }
  }
  const auto count = static_cast<double>(num_sims_);
  std::vector<InfluenceSample> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double mean = sum[i] / count;
    double var = num_sims_ > 1 ? (sum_sq[i] - count * mean * mean) / (count - 1.0) : 0.0;
    var = std::max(var, 0.0);
    out[i] = {mean, std::sqrt(var / count)};
  }
  return out;
}

std::vector<InfluenceSample> InfluenceEstimator::evaluate_exact(const Graph& graph,
                                                                std::span<const SeedSet> sets) {
  const std::size_t m = graph.edge_count();
  if (m > kMaxExactEdges) {
    throw std::invalid_argument("exact enumeration refuses graphs with more than " +
                                std::to_string(kMaxExactEdges) + " edges (got " +
                                std::to_string(m) + ")");
  }
  const std::size_t n = graph.node_count();
  const double p = graph.edge_probability();
  std::vector<double> weight_by_live(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    weight_by_live[k] = std::pow(p, static_cast<double>(k)) *
                        std::pow(1.0 - p, static_cast<double>(m - k));
  }

  std::vector<double> total(sets.size(), 0.0);
  std::vector<NodeId> parent(n);
  std::vector<std::size_t> size(n);
  std::vector<std::uint8_t> counted(n);
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const auto edges = graph.edges();
  const std::uint64_t worlds = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    std::iota(parent.begin(), parent.end(), NodeId{0});
    std::fill(size.begin(), size.end(), 1);
    for (std::size_t e = 0; e < m; ++e) {
      if (!((mask >> e) & 1U)) continue;
      NodeId a = find(edges[e].u), b = find(edges[e].v);
      if (a == b) continue;
      if (size[a] < size[b]) std::swap(a, b);
      parent[b] = a;
      size[a] += size[b];
    }
    const double w = weight_by_live[static_cast<std::size_t>(std::popcount(mask))];
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::size_t reached = 0;
      for (NodeId s : sets[i]) {
        const NodeId r = find(s);
        if (!counted[r]) {
          counted[r] = 1;
          reached += size[r];
        }
      }
      for (NodeId s : sets[i]) counted[find(s)] = 0;
      total[i] += w * static_cast<double>(reached);
    }
  }
  std::vector<InfluenceSample> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out[i] = {total[i], 0.0};
  return out;
}

}  // namespace rl4im
