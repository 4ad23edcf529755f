#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuzz.hpp"
#include "oracles.hpp"

using namespace bdk;
using oracle::fixture;

static Diagram load(const std::string& name) { return load_diagram(fixture(name)); }

static const char* ordered_fixtures[] = {"example-5-7.json", "example-8-2.json", "five-vertex.json",
                                         "dyadic-odometer.json"};

TEST_CASE("successor matches the sorted-tower oracle") {
  for (auto name : ordered_fixtures) {
    CAPTURE(name);
    Diagram d = load(name);
    ExtremePaths ex = extreme_paths(d);
    for (std::size_t N = 1; N <= 4; ++N)
      for (const auto& p : oracle::root_paths(d, N)) {
        Successor s = successor(d, ex, FinitePath{p});
        auto o = oracle::successor(d, p);
        REQUIRE(s.path.has_value() == o.has_value());
        if (o) CHECK(s.path->edges == *o);
        else CHECK(oracle::all_rank(d, p, true));
      }
  }
}

TEST_CASE("sigma and tau are inverse off the extreme paths") {
  for (auto name : ordered_fixtures) {
    CAPTURE(name);
    Diagram d = load(name);
    ExtremePaths ex = extreme_paths(d);
    for (std::size_t N = 1; N <= 6; ++N)
      for (const auto& p : all_paths(d, N)) {
        Successor s = successor(d, ex, p);
        if (s.path) {
          Successor b = predecessor(d, ex, *s.path);
          REQUIRE(b.path.has_value());
          CHECK(*b.path == p);
        }
        Successor t = predecessor(d, ex, p);
        if (t.path) {
          Successor f = successor(d, ex, *t.path);
          REQUIRE(f.path.has_value());
          CHECK(*f.path == p);
        }
      }
  }
}

TEST_CASE("odometer: the maximal path steps to the minimal one") {
  Diagram d = load("dyadic-odometer.json");
  ExtremePaths ex = extreme_paths(d);
  for (std::size_t N = 1; N <= 5; ++N) {
    FinitePath mx = z_path(d, ex, 1, true, N), mn = z_path(d, ex, 1, false, N);
    StepResult r = vershik_step(d, ex, mx, 8);
    CHECK_FALSE(r.exhausted);
    CHECK_FALSE(r.flagged);
    REQUIRE(r.images.size() == 1);
    CHECK(*r.images.begin() == mn);
    StepResult back = inverse_step(d, ex, mn, 8);
    REQUIRE(back.images.size() == 1);
    CHECK(*back.images.begin() == mx);
  }
}

TEST_CASE("z_{i,max} is sent to z_{i,min}") {
  for (auto name : {"example-5-7.json", "five-vertex.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    ExtremePaths ex = extreme_paths(d);
    for (int i = 1; i <= d.k(); ++i) {
      StepResult r = vershik_step(d, ex, z_path(d, ex, i, true, 3), 16);
      CHECK(r.images.count(z_path(d, ex, i, false, 3)) == 1);
    }
  }
}

TEST_CASE("cylinder images of maximal cylinders are all-min cylinders") {
  Diagram d = load("example-5-7.json");
  ExtremePaths ex = extreme_paths(d);
  for (std::size_t N = 1; N <= 4; ++N)
    for (const auto& p : all_paths(d, N)) {
      if (!oracle::all_rank(d, p.edges, true)) continue;
      StepResult r = vershik_step(d, ex, p, 16);
      CHECK_FALSE(r.exhausted);
      CHECK_FALSE(r.images.empty());
      for (const auto& q : r.images) CHECK(oracle::all_rank(d, q.edges, false));
    }
}

TEST_CASE("lookahead of zero is exhausted on a maximal cylinder") {
  Diagram d = load("example-5-7.json");
  ExtremePaths ex = extreme_paths(d);
  FinitePath p;
  for (const auto& q : all_paths(d, 2))
    if (oracle::all_rank(d, q.edges, true) && d.comp(2, range_of(d, q)) == 0) p = q;
  REQUIRE(p.depth() == 2);
  CHECK(vershik_step(d, ex, p, 0).exhausted);
}

TEST_CASE("all_paths lists every path once, grouped and sorted") {
  for (auto name : ordered_fixtures) {
    CAPTURE(name);
    Diagram d = load(name);
    for (std::size_t N = 1; N <= 4; ++N) {
      auto ps = all_paths(d, N);
      std::vector<oracle::EdgePath> expect;
      for (std::size_t v = 0; v < d.size(N); ++v)
        for (auto& p : oracle::sorted_into(d, N, v)) expect.push_back(p);
      REQUIRE(ps.size() == expect.size());
      for (std::size_t j = 0; j < ps.size(); ++j) CHECK(ps[j].edges == expect[j]);
    }
  }
}

TEST_CASE("path encoding round trip") {
  Diagram d = load("five-vertex.json");
  for (const auto& p : all_paths(d, 4)) CHECK(decode_path(d, encode_path(d, p)) == p);
}

TEST_CASE("malformed path encodings are rejected") {
  Diagram d = load("example-5-7.json");
  CHECK_THROWS_AS(decode_path(d, "garbage"), std::invalid_argument);
  CHECK_THROWS_AS(decode_path(d, "2:root->Y1#1"), std::invalid_argument);
  CHECK_THROWS_AS(decode_path(d, "1:root->Y1#9"), std::invalid_argument);
  CHECK_THROWS_AS(decode_path(d, "1:root->nowhere#1"), std::invalid_argument);
  CHECK_THROWS_AS(decode_path(d, "1:Y2->Y1#1"), std::invalid_argument);
}

TEST_CASE("towers climb by successor and match the incidence matrix") {
  for (auto name : ordered_fixtures) {
    CAPTURE(name);
    Diagram d = load(name);
    ExtremePaths ex = extreme_paths(d);
    for (std::size_t n = 1; n <= 5; ++n) {
      KRPartition kr = towers(d, ex, n);
      Vec h = d.path_counts(n);
      for (std::size_t v = 0; v < d.size(n); ++v) {
        CHECK(kr.heights[v] == h[v]);
        auto expect = oracle::sorted_into(d, n, v);
        REQUIRE(kr.towers[v].size() == expect.size());
        for (std::size_t j = 0; j < expect.size(); ++j) CHECK(kr.towers[v][j].edges == expect[j]);
      }
      if (n < 5) CHECK(traversal_matrix(d, ex, n).to_ll() == oracle::incidence_ll(d, n));
    }
  }
}

TEST_CASE("fuzz orders: successor is a bijection between non-extreme paths") {
  for (const auto& c : fuzz::cases(20)) {
    CAPTURE(c.seed);
    const Diagram& d = c.ordered;
    ExtremePaths ex = extreme_paths(d);
    for (std::size_t N = 1; N <= 4; ++N) {
      std::set<FinitePath> images;
      std::size_t non_max = 0;
      for (const auto& p : all_paths(d, N)) {
        Successor s = successor(d, ex, p);
        if (!s.path) continue;
        ++non_max;
        images.insert(*s.path);
        CHECK(*predecessor(d, ex, *s.path).path == p);
      }
      CHECK(images.size() == non_max);
    }
  }
}
