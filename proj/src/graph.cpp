#include "rl4im/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "rl4im/rng.hpp"

namespace rl4im {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges, double edge_probability)
    : node_count_(node_count), edges_(std::move(edges)), edge_probability_(edge_probability) {
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  std::vector<Edge> sorted;
  sorted.reserve(edges_.size());
  for (Edge& e : edges_) {
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    sorted.push_back(e);
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate edge");
  }

  offsets_.assign(node_count_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adjacency_[cursor[e.u]++] = {e.v, id};
    adjacency_[cursor[e.v]++] = {e.u, id};
  }
  for (std::size_t v = 0; v < node_count_; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= node_count_ || b >= node_count_) return false;
  auto nbrs = neighbors(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), Neighbor{b, 0},
                            [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
}

Graph Graph::with_edge_probability(double p) const {
  return Graph(node_count_, edges_, p);
}

Graph generate_powerlaw_cluster(const GraphGenConfig& cfg, double edge_probability) {
  if (cfg.m < 1 || cfg.m >= cfg.n) {
    throw std::invalid_argument("powerlaw cluster graph requires 1 <= m < n");
  }
  if (!(cfg.triangle_prob >= 0.0 && cfg.triangle_prob <= 1.0)) {
    throw std::invalid_argument("triangle probability must lie in [0, 1]");
  }
  Rng rng(cfg.rng_seed);
  std::vector<std::set<NodeId>> adj(cfg.n);
  std::vector<Edge> edges;
  edges.reserve(cfg.m * (cfg.n - cfg.m));
  // Each node appears once per incident edge (seed nodes once), giving
  // degree-proportional sampling.
  std::vector<NodeId> repeated;
  for (NodeId v = 0; v < cfg.m; ++v) repeated.push_back(v);

  auto connect = [&](NodeId a, NodeId b) {
    adj[a].insert(b);
    adj[b].insert(a);
    edges.push_back({std::min(a, b), std::max(a, b)});
    repeated.push_back(b);
  };
  auto attach_target = [&](NodeId source) {
    NodeId t;
    do {
      t = repeated[uniform_index(rng, repeated.size())];
    } while (adj[source].contains(t));
    return t;
  };

  for (NodeId source = static_cast<NodeId>(cfg.m); source < cfg.n; ++source) {
    NodeId target = attach_target(source);
    connect(source, target);
    for (std::size_t count = 1; count < cfg.m; ++count) {
      if (uniform01(rng) < cfg.triangle_prob) {
        std::vector<NodeId> closure;
        for (NodeId w : adj[target]) {
          if (w != source && !adj[source].contains(w)) closure.push_back(w);
        }
        if (!closure.empty()) {
          connect(source, closure[uniform_index(rng, closure.size())]);
          continue;
        }
      }
      target = attach_target(source);
      connect(source, target);
    }
    for (std::size_t k = 0; k < cfg.m; ++k) repeated.push_back(source);
  }
  return Graph(cfg.n, std::move(edges), edge_probability);
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "n " << graph.node_count() << '\n';
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

bool parse_index(const std::string& token, std::uint64_t& value) {
  if (token.empty() || token.size() > 19) return false;
  value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, double edge_probability) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphFormatError("cannot open " + path.string());
  auto fail = [&](std::size_t line, const std::string& what) -> GraphFormatError {
    return GraphFormatError(path.string() + ": " + what + " at line " + std::to_string(line));
  };

  std::string line;
  std::size_t line_no = 0;
  std::uint64_t n = 0;
  {
    ++line_no;
    if (!std::getline(in, line)) throw fail(line_no, "missing header");
    std::istringstream ss(line);
    std::string tag, count, extra;
    ss >> tag >> count;
    if (tag != "n" || !parse_index(count, n) || (ss >> extra)) {
      throw fail(line_no, "malformed header");
    }
  }
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string a, b, extra;
    std::uint64_t u = 0, v = 0;
    ss >> a >> b;
    if (!parse_index(a, u) || !parse_index(b, v) || (ss >> extra)) {
      throw fail(line_no, "malformed line");
    }
    if (u >= n || v >= n) throw fail(line_no, "endpoint out of range");
    if (u == v) throw fail(line_no, "self-loop");
    const std::pair<NodeId, NodeId> key = std::minmax(static_cast<NodeId>(u), static_cast<NodeId>(v));
    if (!seen.insert(key).second) throw fail(line_no, "duplicate edge");
    edges.push_back({key.first, key.second});
  }
  return Graph(n, std::move(edges), edge_probability);
}

DegreeStats degree_stats(const Graph& graph) {
  DegreeStats s;
  if (graph.node_count() == 0) return s;
  s.min = graph.degree(0);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    s.min = std::min(s.min, graph.degree(v));
    s.max = std::max(s.max, graph.degree(v));
  }
  s.mean = 2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(graph.node_count());
  return s;
}

}  // namespace rl4im
