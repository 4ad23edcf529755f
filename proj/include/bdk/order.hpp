#pragma once

// Ordered diagrams. The order on a fiber is the edge listing order, so a
// Diagram already carries it; this header adds paths, extreme chains,
// markers and the ordered validator.

#include "diagram.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdk {

struct FinitePath {
  std::vector<std::size_t> edges;  // edges[j] indexes level(j+1).edges
  std::size_t depth() const { return edges.size(); }
  auto operator<=>(const FinitePath&) const = default;
};

inline std::size_t vertex_at(const Diagram& d, const FinitePath& p, std::size_t n) {
  if (n == 0) return 0;
  return d.level(n).edges[p.edges[n - 1]].range;
}

inline std::size_t range_of(const Diagram& d, const FinitePath& p) { return vertex_at(d, p, p.depth()); }

inline bool is_valid_path(const Diagram& d, const FinitePath& p) {
  std::size_t prev = 0;
  for (std::size_t n = 1; n <= p.depth(); ++n) {
    if (!d.has_level(n)) return false;
    const Level& L = d.level(n);
    if (p.edges[n - 1] >= L.edges.size() || L.edges[p.edges[n - 1]].source != prev) return false;
    prev = L.edges[p.edges[n - 1]].range;
  }
  return true;
}

inline std::size_t min_source(const Diagram& d, std::size_t n, std::size_t v) {
  const Level& L = d.level(n);
  return L.edges[L.fiber[v].front()].source;
}
inline std::size_t max_source(const Diagram& d, std::size_t n, std::size_t v) {
  const Level& L = d.level(n);
  return L.edges[L.fiber[v].back()].source;
}

// Lexicographic comparison: the deepest differing edge decides.
inline std::strong_ordering lex_compare(const Diagram& d, const FinitePath& p, const FinitePath& q) {
  if (p.depth() != q.depth()) throw std::invalid_argument("lex_compare: paths of different depth");
  if (p.depth() == 0) return std::strong_ordering::equal;
  if (range_of(d, p) != range_of(d, q)) throw std::invalid_argument("lex_compare: incomparable, different range vertices");
  for (std::size_t n = p.depth(); n >= 1; --n) {
    std::size_t a = p.edges[n - 1], b = q.edges[n - 1];
    if (a != b) return d.level(n).rank[a] <=> d.level(n).rank[b];
  }
  return std::strong_ordering::equal;
}

// Component of the first minimal vertex met by the backward min (or max)
// chain from (n, v); 0 when the chain reaches the root inside V_o.
inline int chain_component(const Diagram& d, std::size_t n, std::size_t v, bool use_max) {
  while (n >= 1) {
    int c = d.comp(n, v);
    if (c != 0) return c;
    v = use_max ? max_source(d, n, v) : min_source(d, n, v);
    --n;
  }
  return 0;
}

// Levels past which backward chains no longer change their outcome.
inline std::size_t marker_horizon(const Diagram& d) {
  return d.stationary() ? d.depth() + d.size(d.depth()) + 1 : d.depth();
}

struct Marker {
  std::size_t vertex = 0;
  int m_minus = 0;
  int m_plus = 0;
};

inline bool markers_resolve(const Diagram& d, std::size_t n) {
  for (auto v : d.vertices(n, 0))
    if (chain_component(d, n, v, false) == 0 || chain_component(d, n, v, true) == 0) return false;
  return true;
}

// Least L with all V_o markers resolved on [L, horizon]; nullopt if none.
inline std::optional<std::size_t> marker_level(const Diagram& d) {
  std::size_t H = marker_horizon(d);
  std::optional<std::size_t> L;
  for (std::size_t n = H; n >= 1; --n) {
    if (!markers_resolve(d, n)) break;
    L = n;
  }
  return L;
}

inline std::vector<Marker> markers(const Diagram& d, std::size_t n) {
  std::vector<Marker> out;
  for (auto v : d.vertices(n, 0)) {
    Marker m{v, chain_component(d, n, v, false), chain_component(d, n, v, true)};
    if (m.m_minus == 0 || m.m_plus == 0)
      throw std::domain_error("markers: backward chain of " + d.name(n, v) + " at level " + std::to_string(n) +
                              " ends in V_o^1");
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maximal and minimal paths

struct ExtremePaths {
  Verdict verdict = Verdict::Unknown;
  json witness = json::object();
  std::size_t top = 0;                       // chains are stored for levels 1..top
  std::vector<std::vector<std::size_t>> zmax;  // zmax[i-1][n-1]
  std::vector<std::vector<std::size_t>> zmin;
  bool stationary = false;

  std::size_t vertex(int i, bool max, std::size_t n) const {
    const auto& z = (max ? zmax : zmin)[i - 1];
    if (n >= 1 && n <= top) return z[n - 1];
    if (stationary && n > top) return z.back();
    throw std::out_of_range("extreme path level " + std::to_string(n) + " unavailable");
  }
};

namespace detail {

// Periodic points of a self-map on {0..n-1}.
inline std::vector<bool> periodic_points(const std::vector<std::size_t>& f) {
  std::size_t n = f.size();
  std::vector<bool> per(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t y = f[x];
    for (std::size_t t = 0; t < n && y != x; ++t) y = f[y];
    per[x] = y == x;
  }
  return per;
}

inline std::size_t preperiod(const std::vector<std::size_t>& f) {
  auto per = periodic_points(f);
  std::size_t worst_steps = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::size_t y = x, t = 0;
    while (!per[y]) {
      y = f[y];
      ++t;
    }
    worst_steps = std::max(worst_steps, t);
  }
  return worst_steps;
}

inline std::vector<std::size_t> tail_map(const Diagram& d, bool use_max) {
  std::size_t D = d.depth();
  std::vector<std::size_t> f(d.size(D));
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = use_max ? max_source(d, D, v) : min_source(d, D, v);
  return f;
}

}  // namespace detail

inline ExtremePaths extreme_paths(const Diagram& d) {
  ExtremePaths ex;
  ex.stationary = d.stationary();
  const std::size_t D = d.depth();
  const int k = d.k();
  if (D < 2) {
    ex.verdict = Verdict::Unknown;
    ex.witness = {{"reason", "a single presented level gives no extreme chains"}};
    return ex;
  }
  ex.top = D - 1;
  for (int pass = 0; pass < 2; ++pass) {
    bool use_max = pass == 0;
    auto& z = use_max ? ex.zmax : ex.zmin;
    z.assign(k, std::vector<std::size_t>(ex.top));
    const char* which = use_max ? "max" : "min";
    if (d.stationary()) {
      auto f = detail::tail_map(d, use_max);
      auto per = detail::periodic_points(f);
      std::vector<std::vector<std::size_t>> per_comp(k + 1);
      for (std::size_t v = 0; v < f.size(); ++v)
        if (per[v]) per_comp[d.comp(D, v)].push_back(v);
      if (!per_comp[0].empty()) {
        ex.verdict = Verdict::Fails;
        ex.witness = {{"chain", which}, {"reason", "extreme path through V_o"},
                      {"vertices", detail::vertex_list(d, D, per_comp[0])}};
        return ex;
      }
      for (int i = 1; i <= k; ++i)
        if (per_comp[i].size() != 1) {
          ex.verdict = Verdict::Fails;
          ex.witness = {{"chain", which}, {"component", i}, {"count", per_comp[i].size()},
                        {"vertices", detail::vertex_list(d, D, per_comp[i])}};
          return ex;
        }
      for (int i = 1; i <= k; ++i) {
        std::size_t v = per_comp[i][0];
        z[i - 1][ex.top - 1] = v;
        for (std::size_t n = ex.top; n >= 2; --n) {
          v = use_max ? max_source(d, n, v) : min_source(d, n, v);
          z[i - 1][n - 2] = v;
        }
      }
    } else {
      // backward images of the last level
      std::set<std::size_t> S;
      for (std::size_t v = 0; v < d.size(D); ++v) S.insert(use_max ? max_source(d, D, v) : min_source(d, D, v));
      for (std::size_t n = D - 1; n >= 1; --n) {
        std::vector<std::vector<std::size_t>> by(k + 1);
        for (auto v : S) by[d.comp(n, v)].push_back(v);
        bool ok = by[0].empty();
        for (int i = 1; i <= k; ++i) ok = ok && by[i].size() == 1;
        if (!ok) {
          ex.verdict = Verdict::Unknown;
          ex.witness = {{"chain", which}, {"level", n}, {"reason", "extreme images not yet separated"}};
          return ex;
        }
        for (int i = 1; i <= k; ++i) z[i - 1][n - 1] = by[i][0];
        std::set<std::size_t> next;
        if (n >= 2)
          for (auto v : S) next.insert(use_max ? max_source(d, n, v) : min_source(d, n, v));
        S = next;
      }
    }
  }
  ex.verdict = Verdict::Holds;
  ex.witness = {{"levels", ex.top}};
  return ex;
}

// Truncation of z_{i,max} (or z_{i,min}) to depth N.
inline FinitePath z_path(const Diagram& d, const ExtremePaths& ex, int i, bool max, std::size_t N) {
  FinitePath p;
  for (std::size_t n = 1; n <= N; ++n) {
    const Level& L = d.level(n);
    const auto& fib = L.fiber[ex.vertex(i, max, n)];
    p.edges.push_back(max ? fib.back() : fib.front());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Continuity conditions

// The values m_-(s(e'+1)) over all ways of reading s(e+1) for the edge e at
// level n+1 (source at level n): the next edge in the fiber if e is not
// maximal, otherwise the first non-maximal edge on each all-maximal
// continuation.
struct SuccessorComponents {
  std::set<int> values;
  bool unknown = false;     // a finite presentation ran out
  bool unresolved = false;  // a chain ended in V_o^1
};

inline SuccessorComponents successor_components(const Diagram& d, std::size_t n, std::size_t e) {
  SuccessorComponents out;
  const Level& L = d.level(n + 1);
  auto record = [&](std::size_t lvl, std::size_t src) {
    int c = chain_component(d, lvl, src, false);
    if (c == 0) out.unresolved = true;
    else out.values.insert(c);
  };
  if (!L.is_max(e)) {
    record(n, L.edges[L.fiber[L.edges[e].range][L.rank[e] + 1]].source);
    return out;
  }
  const std::size_t H = marker_horizon(d);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{L.edges[e].range, n + 1}};
  while (!stack.empty()) {
    auto [u, lvl] = stack.back();
    stack.pop_back();
    if (!seen.insert({u, std::min(lvl, H)}).second) continue;
    if (!d.has_level(lvl + 1)) {
      out.unknown = true;
      continue;
    }
    const Level& M = d.level(lvl + 1);
    for (auto f : d.out_edges(lvl, u)) {
      if (!M.is_max(f)) record(lvl, M.edges[M.fiber[M.edges[f].range][M.rank[f] + 1]].source);
      else stack.push_back({M.edges[f].range, lvl + 1});
    }
  }
  return out;
}

namespace detail {

inline json edge_json(const Diagram& d, std::size_t level, std::size_t e) {
  const Level& L = d.level(level);
  return {{"level", level}, {"source", d.name(level - 1, L.edges[e].source)}, {"range", L.ids[L.edges[e].range]},
          {"rank", L.rank[e] + 1}};
}

}  // namespace detail

inline Report validate_ordered(const Diagram& d, std::size_t depth_budget = 10) {
  Report rep = validate_unordered(d, depth_budget);
  if (rep.verdict("k_simple") == Verdict::Fails) {
    rep.findings.push_back("ordered conditions skipped: the unordered diagram is not k-simple");
    rep.add("extreme_paths", Verdict::Unknown, {{"reason", "skipped"}});
    return rep;
  }
  ExtremePaths ex = extreme_paths(d);
  rep.add("extreme_paths", ex.verdict, ex.witness);

  if (d.k() == 1) {
    rep.add("condition_3a", Verdict::Holds, {{"reason", "vacuous for k = 1"}});
    rep.add("condition_3b", Verdict::Holds, {{"reason", "vacuous for k = 1"}});
    return rep;
  }

  auto L = marker_level(d);
  if (!L) {
    rep.add("markers", d.stationary() ? Verdict::Fails : Verdict::Unknown,
            {{"reason", "backward extreme chains do not resolve up to level " + std::to_string(marker_horizon(d))}});
    rep.add("condition_3a", Verdict::Unknown, {{"reason", "markers unavailable"}});
    rep.add("condition_3b", Verdict::Unknown, {{"reason", "markers unavailable"}});
    return rep;
  }
  rep.add("markers", Verdict::Holds, {{"L", *L}});

  const std::size_t H = marker_horizon(d);
  const std::size_t top_a = d.stationary() ? H : d.depth() - 1;
  Verdict a = Verdict::Holds;
  json wa = {{"levels", json::array({*L, top_a})}};
  for (std::size_t n = *L; n <= top_a && a != Verdict::Fails; ++n) {
    for (auto v : d.vertices(n, 0)) {
      int mp = chain_component(d, n, v, true);
      const Level& N1 = d.level(n + 1);
      for (auto e : d.out_edges(n, v)) {
        auto sc = successor_components(d, n, e);
        bool bad = false;
        for (int c : sc.values) bad = bad || c != mp;
        if (bad) {
          a = Verdict::Fails;
          wa = {{"vertex", d.name(n, v)}, {"level", n}, {"edge", detail::edge_json(d, n + 1, e)},
                {"m_plus", mp}, {"observed", std::vector<int>(sc.values.begin(), sc.values.end())},
                {"maximal", N1.is_max(e)}};
          break;
        }
        if ((sc.unknown || sc.unresolved) && a == Verdict::Holds) {
          a = Verdict::Unknown;
          wa = {{"vertex", d.name(n, v)}, {"level", n}, {"edge", detail::edge_json(d, n + 1, e)},
                {"reason", sc.unknown ? "presentation exhausted" : "unresolved chain"}};
        }
      }
      if (a == Verdict::Fails) break;
    }
  }
  rep.add("condition_3a", a, wa);

  const std::size_t top_b = d.stationary() ? H : d.depth();
  Verdict b = Verdict::Holds;
  std::size_t from_b = std::max<std::size_t>(3, *L + 1);
  json wb = {{"levels", json::array({from_b, top_b})}};
  for (std::size_t n = from_b; n <= top_b && b != Verdict::Fails; ++n) {
    const Level& Ln = d.level(n);
    for (auto v : d.vertices(n, 0)) {
      for (auto e : Ln.fiber[v]) {
        int i = d.comp(n - 1, Ln.edges[e].source);
        if (i == 0 || Ln.is_max(e)) continue;
        std::size_t nxt = Ln.edges[Ln.fiber[v][Ln.rank[e] + 1]].source;
        int c = chain_component(d, n - 1, nxt, false);
        if (c != i) {
          b = c == 0 ? worst(b, Verdict::Unknown) : Verdict::Fails;
          wb = {{"vertex", d.name(n, v)}, {"level", n}, {"edge", detail::edge_json(d, n, e)}, {"expected", i},
                {"observed", c}};
          if (b == Verdict::Fails) break;
        }
      }
      if (b == Verdict::Fails) break;
    }
  }
  rep.add("condition_3b", b, wb);
  return rep;
}

// ---------------------------------------------------------------------------
// Shortening telescope

// First level n and source u where a max (min) edge at level n+1 leaves a
// vertex u that is not on the corresponding extreme path.
inline std::optional<std::pair<std::size_t, std::size_t>> chained_extreme_violation(const Diagram& d,
                                                                                   const ExtremePaths& ex) {
  std::size_t top = d.stationary() ? marker_horizon(d) : d.depth() - 1;
  for (std::size_t n = 1; n <= top; ++n) {
    const Level& L = d.level(n + 1);
    for (int pass = 0; pass < 2; ++pass) {
      bool use_max = pass == 0;
      for (std::size_t e = 0; e < L.edges.size(); ++e) {
        if (use_max ? !L.is_max(e) : !L.is_min(e)) continue;
        std::size_t u = L.edges[e].source;
        bool on_z = false;
        for (int i = 1; i <= d.k(); ++i) on_z = on_z || ex.vertex(i, use_max, n) == u;
        if (!on_z) return std::make_pair(n, u);
      }
    }
  }
  return std::nullopt;
}

inline bool fibers_at_least_two(const Diagram& d) {
  std::size_t top = d.depth();
  for (std::size_t n = 1; n <= top; ++n)
    for (const auto& f : d.level(n).fiber)
      if (f.size() < 2) return false;
  return true;
}

// Telescopes so that consecutive maximal (minimal) edges only occur along
// the extreme paths; with `aperiodic`, also until every fiber has >= 2 edges.
inline Diagram shorten_telescope(const Diagram& d, bool aperiodic = false) {
  ExtremePaths ex = extreme_paths(d);
  if (ex.verdict != Verdict::Holds) throw std::invalid_argument("shorten_telescope: maximal/minimal path condition does not hold");
  bool ok = !chained_extreme_violation(d, ex);
  if (ok && (!aperiodic || fibers_at_least_two(d))) return d;
  if (!d.stationary())
    throw std::runtime_error("shorten_telescope: finite presentation exhausted before the contraction stabilised");
  std::size_t p = std::max<std::size_t>(
      {std::size_t{1}, detail::preperiod(detail::tail_map(d, true)), detail::preperiod(detail::tail_map(d, false))});
  const std::size_t base = d.depth() - 1;
  for (std::size_t guard = 0; guard < 64; ++guard, ++p) {
    Diagram t = telescope(d, {0, base + p, base + 2 * p});
    ExtremePaths et = extreme_paths(t);
    if (et.verdict != Verdict::Holds || chained_extreme_violation(t, et))
      throw std::logic_error("shorten_telescope: telescoped diagram still chains extreme edges");
    if (!aperiodic || fibers_at_least_two(t)) return t;
  }
  throw std::runtime_error("shorten_telescope: fibers stay singletons; the diagram has periodic points");
}

}  // namespace bdk
