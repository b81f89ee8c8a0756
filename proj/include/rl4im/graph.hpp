#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace rl4im {

using NodeId = std::uint32_t;

// Undirected edge, always stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  std::uint32_t edge;  // index into Graph::edges()
};

class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable undirected graph with a uniform Independent Cascade activation
/// probability. Adjacency is stored in CSR form with neighbors sorted by id,
/// which fixes the order in which cascades probe edges.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges (in either
  /// orientation), out-of-range endpoints or p outside [0, 1].
  Graph(std::size_t node_count, std::vector<Edge> edges, double edge_probability);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  double edge_probability() const { return edge_probability_; }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId a, NodeId b) const;

  Graph with_edge_probability(double p) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  double edge_probability_ = 0.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

struct GraphGenConfig {
  std::size_t n = 200;
  std::size_t m = 2;
  double triangle_prob = 0.05;
  std::uint64_t rng_seed = 0;
};

/// Holme-Kim growth: preferential attachment where every attachment edge is
/// followed, with probability triangle_prob, by a triad-closure attempt to a
/// neighbor of the last target. Produces exactly m * (n - m) edges.
Graph generate_powerlaw_cluster(const GraphGenConfig& cfg, double edge_probability = 0.1);

/// Text format: header `n <node_count>` then one `u v` line per edge.
void save_edge_list(const Graph& graph, const std::filesystem::path& path);
Graph load_edge_list(const std::filesystem::path& path, double edge_probability);

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

DegreeStats degree_stats(const Graph& graph);

}  // namespace rl4im
