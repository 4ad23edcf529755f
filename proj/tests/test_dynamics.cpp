#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuzz.hpp"
#include "oracles.hpp"

#include <random>

using namespace bdk;
using oracle::fixture;

static Diagram load(const std::string& name) { return load_diagram(fixture(name)); }

static CylinderGraph graph_of(const Diagram& d, std::size_t N, std::size_t M = 16) {
  return cylinder_graph(d, extreme_paths(d), N, M);
}

static std::vector<std::size_t> all_nodes(const CylinderGraph& g) {
  std::vector<std::size_t> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

TEST_CASE("dyadic odometer cylinders form one cycle") {
  Diagram d = load("dyadic-odometer.json");
  for (std::size_t N = 1; N <= 6; ++N) {
    CylinderGraph g = graph_of(d, N);
    CHECK(g.size() == (std::size_t(1) << N));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.succ[i].size() == 1);
      CHECK(g.pred[i].size() == 1);
    }
    // following successors from node 0 returns after exactly 2^N steps
    std::size_t at = 0, steps = 0;
    do at = g.succ[at][0], ++steps; while (at != 0 && steps <= g.size());
    CHECK(steps == g.size());
    CHECK(chain_transitive(d, g).verdict == Verdict::Holds);
  }
}

TEST_CASE("cylinder graph degrees") {
  for (auto name : {"example-5-7.json", "example-8-2.json", "five-vertex.json", "glued-odometers.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    ExtremePaths ex = extreme_paths(d);
    for (std::size_t N = 1; N <= 4; ++N) {
      CylinderGraph g = cylinder_graph(d, ex, N, 16);
      CHECK_FALSE(g.any_flagged());
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g.succ[i].size() >= 1);
        CHECK(g.pred[i].size() >= 1);
        if (successor(d, ex, g.nodes[i]).path) CHECK(g.succ[i].size() == 1);
      }
    }
  }
}

TEST_CASE("example-5-7 at N = 2, M = 2 is strongly connected") {
  Diagram d = load("example-5-7.json");
  CylinderGraph g = graph_of(d, 2, 2);
  CHECK(oracle::strongly_connected(g));
  CHECK(chain_transitive(d, g).verdict == Verdict::Holds);
}

TEST_CASE("chain transitivity of the non-elementary fixtures") {
  for (auto name : {"example-5-7.json", "example-8-2.json", "dyadic-odometer.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    for (std::size_t N = 1; N <= 5; ++N) {
      CylinderGraph g = graph_of(d, N);
      ChainVerdict cv = chain_transitive(d, g);
      CHECK(cv.verdict == Verdict::Holds);
      CHECK(cv.moving == cv.verdict);
      CHECK(oracle::strongly_connected(g));
    }
  }
}

TEST_CASE("glued odometers: two cycles and a closed witness") {
  Diagram d = load("glued-odometers.json");
  for (std::size_t N = 1; N <= 5; ++N) {
    CylinderGraph g = graph_of(d, N);
    ChainVerdict cv = chain_transitive(d, g);
    CHECK(cv.verdict == Verdict::Fails);
    CHECK(cv.components == 2);
    REQUIRE_FALSE(cv.closed_set.empty());
    CHECK(cv.closed_set.size() < g.size());
    std::set<std::size_t> in(cv.closed_set.begin(), cv.closed_set.end());
    for (auto u : cv.closed_set)
      for (auto v : g.succ[u]) CHECK(in.count(v) == 1);
  }
}

TEST_CASE("five-vertex system is not chain transitive") {
  Diagram d = load("five-vertex.json");
  for (std::size_t N = 2; N <= 5; ++N) {
    CylinderGraph g = graph_of(d, N);
    CHECK(chain_transitive(d, g).verdict == Verdict::Fails);
    CHECK_FALSE(oracle::strongly_connected(g));
  }
}

TEST_CASE("failure persists under refinement") {
  for (auto name : {"glued-odometers.json", "five-vertex.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    bool failed = false;
    for (std::size_t N = 1; N <= 6; ++N) {
      Verdict v = chain_transitive(d, graph_of(d, N)).verdict;
      if (failed) CHECK(v == Verdict::Fails);
      failed = failed || v == Verdict::Fails;
    }
    CHECK(failed);
  }
}

TEST_CASE("epsilon chains") {
  Diagram d = load("dyadic-odometer.json");
  CylinderGraph g = graph_of(d, 3);
  std::size_t p = g.at(FinitePath{{0, 0, 0}}), q = g.at(FinitePath{{1, 1, 1}});
  auto same = epsilon_chain(g, p, p);
  REQUIRE(same.has_value());
  CHECK(same->size() == 1);
  auto c = epsilon_chain(g, p, q);
  REQUIRE(c.has_value());
  CHECK(c->size() == 8);
  for (std::size_t j = 0; j + 1 < c->size(); ++j)
    CHECK(std::count(g.succ[(*c)[j]].begin(), g.succ[(*c)[j]].end(), (*c)[j + 1]) == 1);

  Diagram e = load("example-5-7.json");
  CylinderGraph h = graph_of(e, 2);
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = 0; b < h.size(); ++b) CHECK(epsilon_chain(h, a, b).has_value());

  Diagram glued = load("glued-odometers.json");
  CylinderGraph gg = graph_of(glued, 2);
  auto fam1 = family(glued, gg, 1), fam2 = family(glued, gg, 2);
  CHECK_FALSE(epsilon_chain(gg, fam1.front(), fam2.front()).has_value());
}

TEST_CASE("families match the oracle") {
  for (auto name : {"example-5-7.json", "example-8-2.json", "five-vertex.json", "glued-odometers.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    for (std::size_t N = 1; N <= 4; ++N) {
      CylinderGraph g = graph_of(d, N);
      for (int i = 1; i <= d.k(); ++i) {
        auto f = family(d, g, i);
        auto o = oracle::family_nodes(d, g, i, 8);
        std::vector<std::size_t> expect;
        for (std::size_t j = 0; j < g.size(); ++j)
          if (o[j]) expect.push_back(j);
        CHECK(f == expect);
        CHECK_FALSE(f.empty());
      }
    }
  }
}

TEST_CASE("saturation sets") {
  SUBCASE("example-5-7: both sets are everything") {
    Diagram d = load("example-5-7.json");
    for (std::size_t N = 1; N <= 4; ++N) {
      Saturation s = saturation_sets(d, graph_of(d, N));
      CHECK(s.all_full);
      CHECK(s.report.verdict("criterion_agrees") == Verdict::Holds);
    }
  }
  SUBCASE("k = 1: one full set") {
    for (auto name : {"example-8-2.json", "dyadic-odometer.json"}) {
      Diagram d = load(name);
      CylinderGraph g = graph_of(d, 3);
      Saturation s = saturation_sets(d, g);
      REQUIRE(s.sets.size() == 1);
      CHECK(s.sets[0].size() == g.size());
    }
  }
  SUBCASE("glued odometers: the two halves") {
    Diagram d = load("glued-odometers.json");
    CylinderGraph g = graph_of(d, 3);
    Saturation s = saturation_sets(d, g);
    CHECK_FALSE(s.all_full);
    CHECK(s.report.verdict("criterion_agrees") == Verdict::Holds);
    REQUIRE(s.sets.size() == 2);
    CHECK(s.sets[0].size() + s.sets[1].size() == g.size());
    std::vector<std::size_t> both;
    std::set_intersection(s.sets[0].begin(), s.sets[0].end(), s.sets[1].begin(), s.sets[1].end(),
                          std::back_inserter(both));
    CHECK(both.empty());
  }
  SUBCASE("sets match the backward closure oracle") {
    for (auto name : {"example-5-7.json", "five-vertex.json", "glued-odometers.json"}) {
      Diagram d = load(name);
      CylinderGraph g = graph_of(d, 3);
      Saturation s = saturation_sets(d, g);
      for (int i = 1; i <= d.k(); ++i) {
        auto in = oracle::backward_closure(g, oracle::family_nodes(d, g, i, 8));
        std::vector<std::size_t> expect;
        for (std::size_t j = 0; j < g.size(); ++j)
          if (in[j]) expect.push_back(j);
        CHECK(s.sets[i - 1] == expect);
      }
    }
  }
}

TEST_CASE("cover steps") {
  Diagram d = load("dyadic-odometer.json");
  for (std::size_t N = 1; N <= 6; ++N) {
    CylinderGraph g = graph_of(d, N);
    std::size_t h = d.path_counts(1)[0].convert_to<std::size_t>();
    for (bool forward : {true, false}) {
      Cover c = cover_steps(d, g, {0}, forward);
      REQUIRE(c.steps.has_value());
      CHECK(*c.steps == (std::size_t(1) << (N - 1)) * h - 1);
      CHECK(*cover_steps(d, g, all_nodes(g), forward).steps == 0);
    }
  }
  Diagram e = load("example-5-7.json");
  CylinderGraph g = graph_of(e, 2);
  ExtremePaths ex = extreme_paths(e);
  std::vector<std::size_t> zs{g.at(z_path(e, ex, 1, true, 2)), g.at(z_path(e, ex, 2, true, 2))};
  CHECK(cover_steps(e, g, zs, true).steps.has_value());
  Cover miss = cover_steps(e, g, {g.at(z_path(e, ex, 1, true, 2))}, true);
  CHECK_FALSE(miss.steps.has_value());
  CHECK(miss.missing == 2);
}

TEST_CASE("cover steps are antitone in S") {
  std::mt19937 rng(5);
  Diagram d = load("example-5-7.json");
  CylinderGraph g = graph_of(d, 3);
  auto f1 = family(d, g, 1), f2 = family(d, g, 2);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::size_t> S{f1[rng() % f1.size()], f2[rng() % f2.size()]};
    std::vector<std::size_t> T = S;
    for (int j = 0; j < 5; ++j) T.push_back(rng() % g.size());
    for (bool forward : {true, false}) {
      Cover a = cover_steps(d, g, S, forward), b = cover_steps(d, g, T, forward);
      REQUIRE(a.steps.has_value());
      REQUIRE(b.steps.has_value());
      CHECK(*b.steps <= *a.steps);
    }
  }
}

TEST_CASE("pseudo-orbits") {
  Diagram d = load("dyadic-odometer.json");
  CylinderGraph g = graph_of(d, 3);
  auto w = pseudo_orbit(g, 0);
  REQUIRE(w.has_value());
  CHECK(w->size() == 9);
  CHECK(std::set<std::size_t>(w->begin(), w->end()).size() == 8);

  Diagram e = load("example-5-7.json");
  CylinderGraph h = graph_of(e, 2);
  auto f1 = family(e, h, 1), f2 = family(e, h, 2);
  std::size_t mid = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (e.comp(2, range_of(e, h.nodes[i])) == 0) mid = i;
  auto o = pseudo_orbit(h, mid, {f1, f2});
  REQUIRE(o.has_value());
  CHECK(o->front() == mid);
  CHECK(o->back() == mid);
  CHECK(std::find_first_of(o->begin(), o->end(), f1.begin(), f1.end()) != o->end());
  CHECK(std::find_first_of(o->begin(), o->end(), f2.begin(), f2.end()) != o->end());
  for (std::size_t j = 0; j + 1 < o->size(); ++j)
    CHECK(std::count(h.succ[(*o)[j]].begin(), h.succ[(*o)[j]].end(), (*o)[j + 1]) == 1);
  auto loop = pseudo_orbit(h, f1.front());
  REQUIRE(loop.has_value());
  CHECK(loop->size() >= 2);
  CHECK(loop->back() == f1.front());
}

TEST_CASE("DOT export lists every node") {
  Diagram d = load("dyadic-odometer.json");
  CylinderGraph g = graph_of(d, 2);
  std::string dot = to_dot(d, g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '>') >= 4);
}

TEST_CASE("fuzz: chain transitive and matching the oracle") {
  for (const auto& c : fuzz::cases(30)) {
    CAPTURE(c.seed);
    ExtremePaths ex = extreme_paths(c.ordered);
    for (std::size_t N = 1; N <= 4; ++N) {
      CylinderGraph g = cylinder_graph(c.ordered, ex, N, 16);
      CHECK(chain_transitive(c.ordered, g).verdict == Verdict::Holds);
      CHECK(oracle::strongly_connected(g));
      CHECK(saturation_sets(c.ordered, g).all_full);
    }
  }
}
