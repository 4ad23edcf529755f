#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuzz.hpp"
#include "oracles.hpp"

#include <random>

using namespace bdk;
using oracle::fixture;

static Diagram load(const std::string& name) { return load_diagram(fixture(name)); }

static Vec vec(std::initializer_list<long long> xs) {
  Vec v;
  for (auto x : xs) v.push_back(Int(x));
  return v;
}

static std::vector<long long> ll(const Vec& v) {
  std::vector<long long> out;
  for (const auto& x : v) out.push_back(static_cast<long long>(x));
  return out;
}

// Pushes x from level n up `steps` levels with plain integer products.
static std::vector<long long> push_ll(const Diagram& d, std::size_t n, std::vector<long long> x, std::size_t steps) {
  for (std::size_t j = 0; j < steps; ++j) x = oracle::apply(oracle::incidence_ll(d, n + j), x);
  return x;
}

TEST_CASE("example-5-7 index elements") {
  Diagram d = load("example-5-7.json");
  for (std::size_t n = 2; n <= 6; ++n) {
    IndexSet s = index_elements(d, n);
    REQUIRE(s.vertices.size() == 2);
    CHECK(d.name(n, s.vertices[0]) == "v1");
    CHECK(s.d[0].vector == vec({-1, 1}));
    CHECK(s.d[1].vector == vec({1, -1}));
  }
}

TEST_CASE("index relations on the reference fixtures") {
  for (std::string name : {"example-5-7.json", "five-vertex.json", "example-8-2.json"}) {
    CAPTURE(name);
    Report r = check_index_relations(load(name));
    for (const auto& p : r.results) {
      CAPTURE(p.property);
      if (p.required) CHECK(p.verdict == Verdict::Holds);
    }
    CHECK(r.overall() == Verdict::Holds);
  }
}

TEST_CASE("index rank is k - 1") {
  std::pair<const char*, std::size_t> cases[] = {{"example-5-7.json", 1}, {"five-vertex.json", 2}, {"example-8-2.json", 0}};
  for (auto [name, rank] : cases) {
    CAPTURE(name);
    Diagram d = load(name);
    IndexSet s = index_elements(d, 3);
    std::vector<Vec> vs;
    for (const auto& x : s.d) vs.push_back(x.vector);
    CHECK(rank_of(vs) == rank);
  }
}

TEST_CASE("equality in the direct limit") {
  Diagram d = load("example-5-7.json");
  DirectLimitGroup g(d, GroupKind::Ideal);
  IndexSet s = index_elements(d, 2);
  CHECK(eq(g, add(s.d[0], s.d[1]), g.zero(2)).verdict == Verdict::Holds);
  CHECK(eq(g, s.d[0], g.zero(2)).verdict == Verdict::Fails);
  CHECK(eq(g, s.d[0], g.pushforward(s.d[0], 5)).verdict == Verdict::Holds);
  CHECK(eq(g, g.basis(2, 1), g.basis(2, 2)).verdict == Verdict::Fails);
}

TEST_CASE("equality agrees with brute-force pushforward") {
  std::mt19937 rng(7);
  for (std::string name : {"example-5-7.json", "example-8-2.json", "five-vertex.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    DirectLimitGroup g(d, GroupKind::Full);
    std::size_t r = d.size(2);
    for (int t = 0; t < 40; ++t) {
      Vec x(r), y(r);
      for (std::size_t i = 0; i < r; ++i) {
        x[i] = std::uniform_int_distribution<int>(-2, 2)(rng);
        y[i] = t % 2 ? x[i] : Int(std::uniform_int_distribution<int>(-2, 2)(rng));
      }
      // tail-only differences vanish after rank-many steps or never
      bool same = push_ll(d, 2, ll(x), r + 2) == push_ll(d, 2, ll(y), r + 2);
      Decision e = eq(g, {2, x, GroupKind::Full}, {2, y, GroupKind::Full});
      CHECK(e.verdict == (same ? Verdict::Holds : Verdict::Fails));
    }
  }
}

TEST_CASE("positivity") {
  Diagram d = load("example-5-7.json");
  DirectLimitGroup ideal(d, GroupKind::Ideal);
  IndexSet s = index_elements(d, 2);
  CHECK(is_positive(ideal, s.d[0]).verdict == Verdict::Fails);
  CHECK(is_positive(ideal, scale(-1, s.d[0])).verdict == Verdict::Fails);
  CHECK(is_positive(ideal, ideal.basis(2, 1)).verdict == Verdict::Holds);
  DirectLimitGroup full(d, GroupKind::Full);
  CHECK(is_positive(full, order_unit(full, 3)).verdict == Verdict::Holds);
  CHECK(is_positive(full, scale(-1, order_unit(full, 3))).verdict == Verdict::Fails);
}

TEST_CASE("positivity agrees with brute-force pushforward") {
  std::mt19937 rng(11);
  for (std::string name : {"example-5-7.json", "example-8-2.json"}) {
    CAPTURE(name);
    Diagram d = load(name);
    DirectLimitGroup g(d, GroupKind::Full);
    std::size_t r = d.size(2);
    for (int t = 0; t < 60; ++t) {
      Vec x(r);
      for (std::size_t i = 0; i < r; ++i) x[i] = std::uniform_int_distribution<int>(-3, 3)(rng);
      Decision p = is_positive(g, {2, x, GroupKind::Full});
      CAPTURE(p.reason);
      CAPTURE(t);
      REQUIRE(p.verdict != Verdict::Unknown);
      // sign is settled once the Perron direction dominates; 24 steps is ample at these sizes
      auto y = push_ll(d, 2, ll(x), 24);
      bool nonneg = std::all_of(y.begin(), y.end(), [](long long v) { return v >= 0; });
      CHECK((p.verdict == Verdict::Holds) == nonneg);
    }
  }
}

TEST_CASE("order unit of the one-edge odometer is 2^(n-1)") {
  Level l1 = oracle::level({"a"}, {1}, {{0, 0}});
  Level l2 = oracle::level({"a"}, {1}, {{0, 0}, {0, 0}});
  Diagram d(1, true, {l1, l2});
  DirectLimitGroup g(d, GroupKind::Full);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(order_unit(g, n).vector == Vec{Int(1) << (n - 1)});
  CHECK_THROWS(order_unit(DirectLimitGroup(load("example-8-2.json"), GroupKind::Ideal), 2));
}

TEST_CASE("example-8-2 pushforwards") {
  Diagram d = load("example-8-2.json");
  DirectLimitGroup g(d, GroupKind::Ideal);
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(g.pushforward({n, vec({1, 0}), GroupKind::Ideal}, n + 1).vector == vec({2, 0}));
    CHECK(g.pushforward({n, vec({0, 1}), GroupKind::Ideal}, n + 1).vector == vec({0, 3}));
  }
  CHECK(g.pushforward({1, vec({1, 1}), GroupKind::Ideal}, 4).vector == vec({8, 27}));
}

TEST_CASE("example-8-2 bounded norm membership") {
  Diagram d = load("example-8-2.json");
  DirectLimitGroup g(d, GroupKind::Ideal);
  for (long long m = 0; m <= 10; ++m) {
    CAPTURE(m);
    CHECK(bounded_norm_membership(g, {1, vec({1, 1}), GroupKind::Ideal}, m, 10).verdict == Verdict::Fails);
    CHECK(bounded_norm_membership(g, {1, vec({1, 0}), GroupKind::Ideal}, m, 10).verdict == Verdict::Fails);
  }
  CHECK(bounded_norm_membership(g, g.zero(1), 0, 10).verdict == Verdict::Holds);
}

TEST_CASE("index elements have bounded norm") {
  Diagram d = load("example-5-7.json");
  DirectLimitGroup g(d, GroupKind::Ideal);
  IndexSet s = index_elements(d, 2);
  for (const auto& x : s.d) CHECK(bounded_norm_membership(g, x, 1, 10).verdict == Verdict::Holds);
  std::vector<GroupElement> fam;
  for (std::size_t n = 2; n <= 6; ++n) fam.push_back(index_elements(d, n).d[0]);
  CHECK(bounded_norm_family(g, fam, 1, 10).verdict == Verdict::Holds);
  CHECK(bounded_norm_family(g, fam, 0, 10).verdict == Verdict::Unknown);
}

TEST_CASE("rank lower bound") {
  Diagram d = load("example-5-7.json");
  RankBound rb = rational_rank_lower_bound(d, 3);
  CHECK(rb.report.overall() == Verdict::Holds);
  CHECK(rb.index_rank == 1);
  CHECK(rb.ideal_rank == 2);
  REQUIRE(rb.witness.has_value());
  for (const auto& c : fuzz::cases(30)) {
    CAPTURE(c.seed);
    if (c.k < 2) continue;
    RankBound f = rational_rank_lower_bound(c.ordered, 3);
    CHECK(f.report.overall() == Verdict::Holds);
    CHECK(f.ideal_rank >= static_cast<std::size_t>(c.k));
  }
}

TEST_CASE("the elementary five-vertex diagram falls short of the rank bound") {
  Diagram d = load("five-vertex.json");
  CHECK(validate_unordered(d).verdict("non_elementary") == Verdict::Fails);
  RankBound rb = rational_rank_lower_bound(d, 3);
  CHECK(rb.ideal_rank == 2);
  CHECK(rb.index_rank == 2);
  CHECK(rb.report.verdict("vertex_count") == Verdict::Fails);
  CHECK(rb.report.verdict("index_rank") == Verdict::Holds);
  CHECK_FALSE(rb.witness.has_value());
}

TEST_CASE("group element JSON and checks") {
  Diagram d = load("example-5-7.json");
  DirectLimitGroup g(d, GroupKind::Ideal);
  GroupElement x = group_element_from_json(json::parse(R"({"level": 3, "vector": [2, "-5"], "group": "ideal"})"));
  CHECK(x.vector == vec({2, -5}));
  CHECK(group_element_from_json(to_json(x)) == x);
  CHECK_NOTHROW(g.check(x));
  CHECK_THROWS(g.check({3, vec({1, 2, 3}), GroupKind::Ideal}));
  CHECK_THROWS(g.check({3, vec({1, 2}), GroupKind::Full}));
  CHECK_THROWS(g.pushforward(x, 2));
}

TEST_CASE("fuzz index elements: entries, sum and coherence") {
  for (const auto& c : fuzz::cases(50)) {
    CAPTURE(c.seed);
    const Diagram& d = c.ordered;
    for (std::size_t n = 2; n <= 5; ++n) {
      IndexSet s = index_elements(d, n);
      Vec sum(s.vertices.size());
      for (const auto& x : s.d) {
        for (const auto& v : x.vector) CHECK(abs(v) <= 1);
        sum = sum + x.vector;
      }
      CHECK(is_zero(sum));
      // pushforward of d_i^(n) equals d_i^(n+1) exactly
      IdealDiagram id = ideal_subdiagram(d);
      IndexSet t = index_elements(d, n + 1);
      for (int i = 0; i < c.k; ++i) CHECK(id.G(n) * s.d[i].vector == t.d[i].vector);
    }
    CHECK(check_index_relations(d).overall() == Verdict::Holds);
  }
}

TEST_CASE("rational-spectrum sign agrees with long pushforward") {
  std::mt19937 rng(5);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int decided = 0;
  for (int t = 0; t < 300; ++t) {
    // lower triangular with integer diagonal, so the spectrum is the diagonal
    std::size_t n = static_cast<std::size_t>(pick(2, 4));
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = i == j ? pick(0, 3) : pick(0, 2);
    Vec y(n);
    for (auto& v : y) v = pick(-3, 3);
    auto sign = detail::rational_spectrum_sign(a, y);
    REQUIRE(sign.has_value());
    Vec x = y;
    for (int s = 0; s < 80; ++s) x = a * x;
    bool late = is_nonneg(x) && is_nonneg(a * x);
    CAPTURE(t);
    CHECK(*sign == late);
    ++decided;
  }
  CHECK(decided == 300);
}
