#include <doctest.h>

#include <fstream>
#include <set>
#include <string>

#include "rl4im/graph.hpp"
#include "test_support.hpp"

using namespace rl4im;

TEST_CASE("graph rejects invalid edges") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {0, 1}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}}, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}}, -0.1), std::invalid_argument);
}

TEST_CASE("adjacency is symmetric and sorted") {
  const Graph g(5, {{3, 4}, {0, 3}, {0, 1}, {1, 3}}, 0.2);
  CHECK(g.degree(3) == 3);
  CHECK(g.degree(2) == 0);
  CHECK(g.has_edge(4, 3));
  CHECK(g.has_edge(3, 4));
  CHECK_FALSE(g.has_edge(0, 4));
  const auto nb = g.neighbors(3);
  REQUIRE(nb.size() == 3);
  CHECK(nb[0].node == 0);
  CHECK(nb[1].node == 1);
  CHECK(nb[2].node == 4);
  for (const auto& n : nb) {
    const Edge e = g.edges()[n.edge];
    CHECK(((e.u == 3 && e.v == n.node) || (e.v == 3 && e.u == n.node)));
  }
  CHECK(g.with_edge_probability(0.7).edge_probability() == doctest::Approx(0.7));
}

TEST_CASE("generator edge counts") {
  SUBCASE("three nodes") {
    const Graph g = generate_powerlaw_cluster({3, 2, 0.05, 1});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("ten nodes") {
    const Graph g = generate_powerlaw_cluster({10, 2, 0.05, 7});
    CHECK(g.edge_count() == 16);
  }
  SUBCASE("exactly m(n - m) across seeds and parameters") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      for (std::size_t m : {1, 2, 3, 5}) {
        for (double tri : {0.0, 0.05, 0.5, 1.0}) {
          const std::size_t n = 30 + seed;
          const Graph g = generate_powerlaw_cluster({n, m, tri, seed});
          CHECK(g.edge_count() == m * (n - m));
        }
      }
    }
  }
  SUBCASE("mean degree at n = 200") {
    const Graph g = generate_powerlaw_cluster({200, 2, 0.05, 42});
    const auto s = degree_stats(g);
    CHECK(s.mean == doctest::Approx(3.96).epsilon(1e-12));
    CHECK(s.min >= 2);
  }
  CHECK_THROWS_AS(generate_powerlaw_cluster({2, 2, 0.05, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_powerlaw_cluster({5, 0, 0.05, 1}), std::invalid_argument);
}

TEST_CASE("generator is deterministic and seed-sensitive") {
  const Graph a = generate_powerlaw_cluster({60, 2, 0.05, 11});
  const Graph b = generate_powerlaw_cluster({60, 2, 0.05, 11});
  const Graph c = generate_powerlaw_cluster({60, 2, 0.05, 12});
  CHECK(std::vector<Edge>(a.edges().begin(), a.edges().end()) ==
        std::vector<Edge>(b.edges().begin(), b.edges().end()));
  CHECK(std::vector<Edge>(a.edges().begin(), a.edges().end()) !=
        std::vector<Edge>(c.edges().begin(), c.edges().end()));
}

TEST_CASE("generator output is heavy-tailed and connected") {
  const Graph g = generate_powerlaw_cluster({200, 2, 0.05, 5});
  const auto s = degree_stats(g);
  // Preferential attachment produces hubs far above the mean degree.
  CHECK(s.max >= 12);
  std::vector<int> seen(g.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& n : g.neighbors(u)) {
      if (!seen[n.node]) {
        seen[n.node] = 1;
        ++reached;
        stack.push_back(n.node);
      }
    }
  }
  CHECK(reached == g.node_count());
}

TEST_CASE("degree stats") {
  CHECK(degree_stats(Graph(4, {}, 0.1)).mean == 0.0);
  CHECK(degree_stats(Graph(4, {}, 0.1)).max == 0);
  const auto s = degree_stats(testing::star(3, 0.1));
  CHECK(s.min == 1);
  CHECK(s.max == 3);
  CHECK(s.mean == doctest::Approx(1.5));
}

TEST_CASE("edge list round trip") {
  testing::TempDir dir("graph");
  SUBCASE("triangle") {
    const Graph g(3, {{0, 1}, {1, 2}, {0, 2}}, 0.1);
    const auto path = dir.path() / "tri.txt";
    save_edge_list(g, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n 3");
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) lines += l.empty() ? 0 : 1;
    CHECK(lines == 3);
    const Graph back = load_edge_list(path, 0.1);
    CHECK(back.node_count() == 3);
    CHECK(std::set<Edge>(back.edges().begin(), back.edges().end()) ==
          std::set<Edge>(g.edges().begin(), g.edges().end()));
  }
  SUBCASE("no edges") {
    const auto path = dir.path() / "empty.txt";
    save_edge_list(Graph(5, {}, 0.1), path);
    const Graph back = load_edge_list(path, 0.1);
    CHECK(back.node_count() == 5);
    CHECK(back.edge_count() == 0);
  }
}

TEST_CASE("edge list errors name the line") {
  testing::TempDir dir("graph-bad");
  auto write = [&](const std::string& body) {
    const auto path = dir.path() / "g.txt";
    std::ofstream(path) << body;
    return path;
  };
  auto message = [](const std::filesystem::path& p) {
    try {
      load_edge_list(p, 0.1);
    } catch (const GraphFormatError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(write("n 3\n0 1\n0 0\n")).find("self-loop at line 3") != std::string::npos);
  CHECK(message(write("n 3\n0 1\n1 0\n")).find("duplicate edge") != std::string::npos);
  CHECK(message(write("n 3\n0 7\n")).find("out of range") != std::string::npos);
  CHECK(message(write("n 3\n0 x\n")).find("malformed") != std::string::npos);
  CHECK(message(write("3\n")).find("header") != std::string::npos);
  CHECK_THROWS(load_edge_list(dir.path() / "missing.txt", 0.1));
}
