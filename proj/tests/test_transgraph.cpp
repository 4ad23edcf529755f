#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuzz.hpp"
#include "oracles.hpp"

using namespace bdk;
using oracle::fixture;
using oracle::GraphEdge;

static Diagram load(const std::string& name) { return load_diagram(fixture(name)); }

TEST_CASE("example-5-7 transition graph is the two-cycle") {
  Diagram d = load("example-5-7.json");
  std::vector<GraphEdge> expect{{"v1", 2, 1}, {"v2", 1, 2}};
  for (std::size_t n = 2; n <= 8; ++n) {
    CAPTURE(n);
    TransitionGraph g = transition_graph(d, n);
    CHECK(oracle::edges_of(g) == expect);
    CHECK(oracle::transition_edges(d, n) == expect);
  }
}

TEST_CASE("five-vertex transition graph is the path Y1 -> Y2 -> Y3") {
  Diagram d = load("five-vertex.json");
  std::vector<GraphEdge> expect{{"B", 1, 2}, {"D", 2, 3}};
  for (std::size_t n = 2; n <= 8; ++n) {
    TransitionGraph g = transition_graph(d, n);
    CHECK(g.edges.size() == 2);
    CHECK(oracle::edges_of(g) == expect);
  }
}

TEST_CASE("k = 1 graphs consist of loops") {
  Diagram d = load("example-8-2.json");
  for (std::size_t n = 2; n <= 5; ++n) {
    TransitionGraph g = transition_graph(d, n);
    CHECK(g.edges.size() == 2);
    for (const auto& e : g.edges) CHECK(e.loop());
  }
}

TEST_CASE("structure checks on example-5-7") {
  Diagram d = load("example-5-7.json");
  Report r = check_structure(transition_graph(d, 3), true);
  CHECK(r.verdict("connected") == Verdict::Holds);
  CHECK(r.verdict("edge_count") == Verdict::Holds);
  CHECK(r.verdict("closed_walks") == Verdict::Holds);
}

TEST_CASE("structure checks catch defects") {
  TransitionGraph g;
  g.k = 3;
  g.level = 2;
  g.edges = {{0, "a", 1, 2}};
  Report r = check_structure(g, true);
  CHECK(r.verdict("connected") == Verdict::Fails);
  CHECK(r.verdict("edge_count") == Verdict::Fails);
  CHECK(r.verdict("closed_walks") == Verdict::Fails);
  g.edges.push_back({1, "b", 2, 3});
  Report e = check_structure(g, false);
  CHECK(e.verdict("connected") == Verdict::Holds);
  CHECK(e.verdict("edge_count") == Verdict::Holds);
}

TEST_CASE("path lifting satisfies all four conditions") {
  for (auto name : {"example-5-7.json", "five-vertex.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    for (std::size_t n = 2; n <= 5; ++n)
      for (auto w : d.vertices(n + 1, 0)) {
        LiftedPath lp = lift_edge_to_path(d, n, w);
        CHECK(lp.checks.overall() == Verdict::Holds);
        // the labels read off the fiber are exactly its V_o sources
        std::size_t count = 0;
        for (auto e : d.level(n + 1).fiber[w]) count += d.comp(n, d.level(n + 1).edges[e].source) == 0;
        CHECK(lp.labels.size() == count);
      }
  }
}

TEST_CASE("path lifting of example-5-7 v1 at level 3") {
  Diagram d = load("example-5-7.json");
  std::size_t v1 = 1;
  REQUIRE(d.name(3, v1) == "v1");
  LiftedPath lp = lift_edge_to_path(d, 2, v1);
  CHECK(lp.start == 2);
  CHECK(lp.end == 1);
  std::vector<std::string> names;
  for (auto v : lp.labels) names.push_back(d.name(2, v));
  CHECK(names == std::vector<std::string>{"v1", "v2", "v1"});
}

TEST_CASE("lifting refuses minimal vertices") {
  Diagram d = load("example-5-7.json");
  CHECK_THROWS(lift_edge_to_path(d, 2, 0));
}

TEST_CASE("fuzz transition graphs") {
  for (const auto& c : fuzz::cases(50)) {
    CAPTURE(c.seed);
    const Diagram& d = c.ordered;
    for (std::size_t n = 2; n <= 5; ++n) {
      TransitionGraph g = transition_graph(d, n);
      CHECK(oracle::edges_of(g) == oracle::transition_edges(d, n));
      if (c.k >= 2) {
        Report r = check_structure(g, true);
        CHECK(r.overall() == Verdict::Holds);
        CHECK(d.vertices(n, 0).size() >= static_cast<std::size_t>(c.k));
      }
    }
  }
}

TEST_CASE("DOT and JSON renderings") {
  Diagram d = load("example-5-7.json");
  TransitionGraph g = transition_graph(d, 2);
  std::string dot = to_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("v1") != std::string::npos);
  json j = to_json(g);
  CHECK(j.dump().find("v2") != std::string::npos);
}
