#pragma once

// Order synthesis from prescribed d-vectors, via Euler walks on lifted
// transition graphs, and the matching compatibility checker.
//
// d-vectors use the realization sign: -1 at the source component of v,
// +1 at its target. index_elements uses the opposite sign.

#include "ktheory.hpp"
#include "order.hpp"
#include "transgraph.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdk {

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DVectors {
  bool stationary = false;
  // level -> V_o vertex index -> k-tuple
  std::map<std::size_t, std::map<std::size_t, std::vector<int>>> values;

  std::size_t last_level() const { return values.empty() ? 0 : values.rbegin()->first; }
  bool has(std::size_t n) const { return values.count(n) || (stationary && !values.empty() && n > last_level()); }
  const std::map<std::size_t, std::vector<int>>& at(std::size_t n) const {
    auto it = values.find(n);
    if (it != values.end()) return it->second;
    if (stationary && !values.empty() && n > last_level()) return values.rbegin()->second;
    throw std::out_of_range("d-vectors missing at level " + std::to_string(n));
  }
};

inline DVectors dvectors_from_json(const Diagram& d, const json& doc) {
  if (!doc.is_object() || !doc.contains("d") || !doc["d"].is_array())
    throw ParseError("d-vectors: expected {\"d\": [...], \"stationary\": bool}");
  DVectors dv;
  dv.stationary = doc.value("stationary", d.stationary());
  if (dv.stationary && !d.stationary()) throw ParseError("d-vectors: stationary block for a finite diagram");
  for (std::size_t b = 0; b < doc["d"].size(); ++b) {
    std::string where = "d[" + std::to_string(b) + "]";
    const json& blk = doc["d"][b];
    if (!blk.is_object() || !blk.contains("level") || !blk["level"].is_number_integer() || !blk.contains("values") ||
        !blk["values"].is_object())
      throw ParseError(where + ": expected {\"level\": n, \"values\": {...}}");
    long long n = blk["level"].get<long long>();
    if (n < 2 || !d.has_level(static_cast<std::size_t>(n))) throw ParseError(where + ".level: out of range");
    const Level& L = d.level(n);
    auto& out = dv.values[static_cast<std::size_t>(n)];
    for (auto it = blk["values"].begin(); it != blk["values"].end(); ++it) {
      auto pos = std::find(L.ids.begin(), L.ids.end(), it.key());
      if (pos == L.ids.end()) throw ParseError(where + ".values: unknown vertex " + it.key());
      std::size_t v = pos - L.ids.begin();
      if (L.comp[v] != 0) throw ParseError(where + ".values: vertex " + it.key() + " is not in V_o");
      if (!it.value().is_array() || it.value().size() != static_cast<std::size_t>(d.k()))
        throw ParseError(where + ".values." + it.key() + ": expected " + std::to_string(d.k()) + " integers");
      std::vector<int> t;
      for (const auto& x : it.value()) {
        if (!x.is_number_integer()) throw ParseError(where + ".values." + it.key() + ": expected integers");
        t.push_back(x.get<int>());
      }
      out[v] = t;
    }
    for (auto v : d.vertices(n, 0))
      if (!out.count(v)) throw ParseError(where + ".values: missing V_o vertex " + L.ids[v]);
  }
  if (dv.values.empty()) throw ParseError("d-vectors: no levels");
  return dv;
}

inline json to_json(const Diagram& d, const DVectors& dv) {
  json out = {{"d", json::array()}, {"stationary", dv.stationary}};
  for (const auto& [n, vals] : dv.values) {
    json vs = json::object();
    for (const auto& [v, t] : vals) vs[d.name(n, v)] = t;
    out["d"].push_back({{"level", n}, {"values", vs}});
  }
  return out;
}

// Last level carrying a transition graph used by synthesis.
inline std::size_t synthesis_top(const Diagram& d, const DVectors& dv) {
  if (!d.stationary()) return d.depth();
  return std::max({d.depth(), dv.last_level(), std::size_t(2)}) + 1;
}

// Conditions (b), (c) on the entries and (a) via connectivity of the built graphs.
inline Report check_dvectors(const Diagram& d, const DVectors& dv) {
  Report rep;
  Verdict b = Verdict::Holds, c = Verdict::Holds, a = Verdict::Holds, cover = Verdict::Holds;
  json wb = json::object(), wc = json::object(), wa = json::object(), wcov = json::object();
  std::size_t top = synthesis_top(d, dv);
  for (std::size_t n = 2; n <= top; ++n) {
    if (!dv.has(n)) {
      if (cover == Verdict::Holds) wcov = {{"level", n}};
      cover = Verdict::Fails;
      continue;
    }
    std::vector<std::pair<int, int>> cut_edges;
    for (const auto& [v, t] : dv.at(n)) {
      int plus = 0, minus = 0, src = 0, tgt = 0;
      for (int i = 0; i < d.k(); ++i) {
        if (t[i] == 1) ++plus, tgt = i + 1;
        else if (t[i] == -1) ++minus, src = i + 1;
        else if (t[i] != 0) {
          if (b == Verdict::Holds) wb = {{"level", n}, {"vertex", d.name(n, v)}, {"entry", t[i]}};
          b = Verdict::Fails;
        }
      }
      if (!((plus == 0 && minus == 0) || (plus == 1 && minus == 1))) {
        if (c == Verdict::Holds) wc = {{"level", n}, {"vertex", d.name(n, v)}, {"values", t}};
        c = Verdict::Fails;
      } else if (plus == 1) {
        cut_edges.emplace_back(src, tgt);
      }
    }
    auto comp = detail::weak_components(d.k(), cut_edges);
    for (int i = 2; i <= d.k(); ++i)
      if (comp[i] != comp[1]) {
        if (a == Verdict::Holds) wa = {{"level", n}, {"separated", json::array({1, i})}};
        a = Verdict::Fails;
        break;
      }
  }
  rep.add("levels_present", cover, wcov);
  rep.add("entries", b, wb);
  rep.add("pair_pattern", c, wc);
  rep.add("combinations", a, wa);
  return rep;
}

inline std::vector<TransitionGraph> graphs_from_dvectors(const Diagram& d, const DVectors& dv) {
  std::vector<TransitionGraph> out;
  std::size_t top = synthesis_top(d, dv);
  for (std::size_t n = 2; n <= top; ++n) {
    TransitionGraph g;
    g.level = n;
    g.k = d.k();
    const auto& vals = dv.at(n);
    const Level& L = d.level(n);
    for (auto v : d.vertices(n, 0)) {
      const auto& t = vals.at(v);
      int src = 0, tgt = 0;
      for (int i = 0; i < d.k(); ++i) {
        if (t[i] == -1) src = i + 1;
        if (t[i] == 1) tgt = i + 1;
      }
      if (src == 0 || tgt == 0) {
        int base = 0;
        for (int i = 1; i <= d.k() && !base; ++i)
          for (auto e : L.fiber[v])
            if (d.comp(n - 1, L.edges[e].source) == i) {
              base = i;
              break;
            }
        if (!base)
          throw SynthesisError("level " + std::to_string(n) + ": zero d-vector at " + L.ids[v] +
                               " but no edge from a minimal component");
        src = tgt = base;
      }
      g.edges.push_back({v, L.ids[v], src, tgt});
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multigraphs and Euler walks

struct MEdge {
  int from = 0, to = 0;
  std::size_t label = 0;  // V_o vertex behind this copy
};

struct Multigraph {
  int k = 1;
  std::vector<MEdge> edges;

  // out-degree minus in-degree
  std::vector<int> degree() const {
    std::vector<int> deg(k + 1, 0);
    for (const auto& e : edges) ++deg[e.from], --deg[e.to];
    return deg;
  }
};

// L_n^w: each label v of L_n repeated F(w, v) times.
inline Multigraph lifted_graph(const Diagram& d, const TransitionGraph& g, std::size_t w) {
  Multigraph m;
  m.k = g.k;
  const Level& L = d.level(g.level + 1);
  for (const auto& e : g.edges) {
    std::size_t c = 0;
    for (auto f : L.fiber[w])
      if (L.edges[f].source == e.vertex) ++c;
    for (std::size_t j = 0; j < c; ++j) m.edges.push_back({e.source, e.target, e.vertex});
  }
  return m;
}

struct EulerResult {
  bool ok = false;
  std::vector<std::size_t> walk;  // edge indices in order
  std::string reason;
};

inline EulerResult euler_walk(const Multigraph& g, int start, int end) {
  EulerResult r;
  auto deg = g.degree();
  for (int i = 1; i <= g.k; ++i) {
    int want = start == end ? 0 : (i == start ? 1 : (i == end ? -1 : 0));
    if (deg[i] != want) {
      r.reason = "degree defect at Y" + std::to_string(i) + ": " + std::to_string(deg[i]) + ", expected " +
                 std::to_string(want);
      return r;
    }
  }
  if (g.edges.empty()) {
    r.ok = start == end;
    if (!r.ok) r.reason = "no edges to join distinct endpoints";
    return r;
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : g.edges) pairs.emplace_back(e.from, e.to);
  auto comp = detail::weak_components(g.k, pairs);
  for (const auto& e : g.edges)
    if (comp[e.from] != comp[start]) {
      r.reason = "disconnected";
      return r;
    }
  // Hierholzer, lowest edge index first
  std::vector<std::vector<std::size_t>> adj(g.k + 1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) adj[g.edges[i].from].push_back(i);
  std::vector<std::size_t> next(g.k + 1, 0);
  std::vector<std::pair<int, std::optional<std::size_t>>> stack{{start, std::nullopt}};
  std::vector<std::size_t> rev;
  while (!stack.empty()) {
    int u = stack.back().first;
    if (next[u] < adj[u].size()) {
      std::size_t e = adj[u][next[u]++];
      stack.push_back({g.edges[e].to, e});
    } else {
      if (stack.back().second) rev.push_back(*stack.back().second);
      stack.pop_back();
    }
  }
  r.walk.assign(rev.rbegin(), rev.rend());
  r.ok = r.walk.size() == g.edges.size();
  if (!r.ok) r.reason = "disconnected";
  return r;
}

// ---------------------------------------------------------------------------
// Compatibility of a graph sequence with a diagram

namespace detail {

inline const TransitionGraph* graph_at(const std::vector<TransitionGraph>& gs, std::size_t n) {
  for (const auto& g : gs)
    if (g.level == n) return &g;
  return nullptr;
}

inline bool has_edge_from(const Diagram& d, std::size_t n, std::size_t w, int c) {
  const Level& L = d.level(n);
  for (auto e : L.fiber[w])
    if (d.comp(n - 1, L.edges[e].source) == c) return true;
  return false;
}

// Components Y_c with at least one edge from V_c^{n} into w at level n+1.
inline std::set<int> touched(const Diagram& d, std::size_t n, std::size_t w) {
  std::set<int> out;
  const Level& L = d.level(n + 1);
  for (auto e : L.fiber[w]) {
    int c = d.comp(n, L.edges[e].source);
    if (c) out.insert(c);
  }
  return out;
}

}  // namespace detail

inline Report check_compatibility(const Diagram& d, const std::vector<TransitionGraph>& graphs) {
  Report rep;
  Verdict euler = Verdict::Holds, c3 = Verdict::Holds, c4 = Verdict::Holds;
  json we = {{"checked", 0}}, w3 = json::object(), w4 = json::object();
  std::size_t checked = 0;
  for (const auto& g : graphs) {
    std::size_t n = g.level;
    for (const auto& e : g.edges) {
      if (c4 != Verdict::Holds) break;
      for (int c : {e.source, e.target})
        if (!detail::has_edge_from(d, n, e.vertex, c)) {
          c4 = Verdict::Fails;
          w4 = {{"level", n}, {"vertex", e.label}, {"missing", c}};
          break;
        }
    }
    const TransitionGraph* up = detail::graph_at(graphs, n + 1);
    if (!up || !d.has_level(n + 1)) continue;
    for (const auto& top : up->edges) {
      std::size_t w = top.vertex;
      Multigraph m = lifted_graph(d, g, w);
      EulerResult r = euler_walk(m, top.source, top.target);
      ++checked;
      if (!r.ok) {
        if (euler == Verdict::Holds)
          we = {{"level", n}, {"vertex", top.label}, {"start", top.source}, {"end", top.target}, {"reason", r.reason}};
        euler = Verdict::Fails;
        continue;
      }
      std::set<int> visited{top.source};
      for (const auto& me : m.edges) visited.insert(me.from), visited.insert(me.to);
      for (int c : detail::touched(d, n, w))
        if (!visited.count(c) && c3 == Verdict::Holds) {
          c3 = Verdict::Fails;
          w3 = {{"level", n}, {"vertex", top.label}, {"component", c}};
        }
    }
  }
  if (euler == Verdict::Holds) we = {{"checked", checked}};
  rep.add("euler_walks", euler, we);
  rep.add("comp_3", c3, w3);
  rep.add("comp_4", c4, w4);
  return rep;
}

// ---------------------------------------------------------------------------
// Synthesis

struct WalkRecord {
  std::size_t level = 0;  // level of w
  std::size_t vertex = 0;
  Multigraph graph;
  int start = 0, end = 0;
  std::vector<std::size_t> walk;
};

struct Synthesis {
  Diagram diagram;
  std::vector<TransitionGraph> graphs;
  std::vector<WalkRecord> walks;
  Report report;
};

namespace detail {

// Every V_o^{n+1} vertex receives an edge from every vertex of V^n.
inline std::optional<std::pair<std::size_t, std::size_t>> fully_connected_violation(const Diagram& d, std::size_t top) {
  for (std::size_t n = 1; n < top; ++n) {
    Matrix F = d.incidence(n);
    for (auto w : d.vertices(n + 1, 0))
      for (std::size_t v = 0; v < d.size(n); ++v)
        if (F(w, v) == 0) return std::make_pair(n + 1, w);
  }
  return std::nullopt;
}

// Edges into w from V_c^{n-1} in listing order, grouped by source index.
inline std::vector<std::size_t> edges_from(const Diagram& d, std::size_t n, std::size_t w, int c) {
  const Level& L = d.level(n);
  std::vector<std::size_t> out;
  for (auto e : L.fiber[w])
    if (d.comp(n - 1, L.edges[e].source) == c) out.push_back(e);
  std::stable_sort(out.begin(), out.end(),
                   [&](std::size_t a, std::size_t b) { return L.edges[a].source < L.edges[b].source; });
  return out;
}

// min first, max last, the rest in listing order
inline std::vector<std::size_t> extremes_then_rest(const std::vector<std::size_t>& fiber, std::size_t mn,
                                                   std::size_t mx) {
  std::vector<std::size_t> out{mn};
  for (auto e : fiber)
    if (e != mn && e != mx) out.push_back(e);
  if (mx != mn) out.push_back(mx);
  return out;
}

inline std::pair<int, int> endpoints(const TransitionGraph& g, std::size_t w) {
  const TGEdge* e = g.edge_for(w);
  return {e->source, e->target};
}

}  // namespace detail

inline Synthesis synthesize_order(const Diagram& d, const DVectors& dv, bool strict = false) {
  Report unordered = validate_unordered(d);
  if (unordered.verdict("k_simple") == Verdict::Fails) throw SynthesisError("diagram is not k-simple");
  Report cond = check_dvectors(d, dv);
  for (const auto& r : cond.results)
    if (r.verdict != Verdict::Holds)
      throw SynthesisError("d-vectors violate " + r.property + ": " + r.witness.dump());
  std::size_t top = synthesis_top(d, dv);
  if (strict) {
    if (unordered.verdict("strongly_k_simple") != Verdict::Holds)
      throw SynthesisError("strict synthesis needs a strongly k-simple diagram");
    if (auto bad = detail::fully_connected_violation(d, top))
      throw SynthesisError("strict synthesis needs full connectivity: level " + std::to_string(bad->first) +
                           " vertex " + d.name(bad->first, bad->second) + " misses part of the level below");
  }
  Synthesis out;
  out.graphs = graphs_from_dvectors(d, dv);
  Report compat = check_compatibility(d, out.graphs);
  for (const auto& r : compat.results)
    if (r.verdict != Verdict::Holds) throw SynthesisError("graphs are not realizable, " + r.property + ": " + r.witness.dump());

  const std::size_t depth = d.stationary() ? std::max(top, std::size_t(3)) : d.depth();
  auto graph = [&](std::size_t n) -> const TransitionGraph& {
    return *detail::graph_at(out.graphs, std::min(n, top));
  };
  std::vector<Level> levels;
  Verdict degree = Verdict::Holds;
  json wdeg = json::object();
  for (std::size_t n = 1; n <= depth; ++n) {
    const Level& L = d.level(n);
    std::vector<std::vector<std::size_t>> order(L.size());
    for (std::size_t w = 0; w < L.size(); ++w) {
      const auto& fib = L.fiber[w];
      int c = L.comp[w];
      if (n == 1) {
        order[w] = fib;
      } else if (c != 0) {
        auto own = detail::edges_from(d, n, w, c);
        if (own.empty()) throw SynthesisError("level " + std::to_string(n) + ": " + L.ids[w] + " has no edge from its component");
        order[w] = detail::extremes_then_rest(fib, own.front(), own.back());
      } else if (n == 2) {
        auto [a, b] = detail::endpoints(graph(2), w);
        auto from_a = detail::edges_from(d, 2, w, a), from_b = detail::edges_from(d, 2, w, b);
        // V_o^1 has no markers, so both extremes must come from Y_a and Y_b
        bool one_for_two = a == b && from_a.size() == 1 && fib.size() > 1;
        if (from_a.empty() || from_b.empty() || (fib.size() == 1 && a != b) || one_for_two)
          throw SynthesisError("level 2: " + L.ids[w] + " cannot start in Y" + std::to_string(a) + " and end in Y" +
                               std::to_string(b));
        order[w] = detail::extremes_then_rest(fib, from_a.front(), from_b.back());
      } else {
        auto [a, b] = detail::endpoints(graph(n), w);
        const TransitionGraph& below = graph(n - 1);
        Multigraph m = lifted_graph(d, below, w);
        auto deg = m.degree();
        const auto& t = dv.at(n).at(w);
        for (int i = 1; i <= d.k(); ++i)
          if (deg[i] != -t[i - 1] && degree == Verdict::Holds) {
            degree = Verdict::Fails;
            wdeg = {{"level", n}, {"vertex", L.ids[w]}, {"component", i}, {"degree", deg[i]}, {"d", t[i - 1]}};
          }
        EulerResult r = euler_walk(m, a, b);
        if (!r.ok) throw SynthesisError("level " + std::to_string(n) + ": no Euler walk for " + L.ids[w] + ": " + r.reason);
        out.walks.push_back({n, w, m, a, b, r.walk});
        // pick actual edges for the walk copies, per source in listing order
        std::map<std::size_t, std::vector<std::size_t>> by_source;
        for (auto e : fib)
          if (d.comp(n - 1, L.edges[e].source) == 0) by_source[L.edges[e].source].push_back(e);
        std::map<std::size_t, std::size_t> used;
        std::vector<std::size_t> seq;
        std::set<int> placed{a, b};
        auto from_a = detail::edges_from(d, n, w, a);
        if (a == b) {
          if (!from_a.empty()) seq.push_back(from_a.front());
        } else {
          seq.insert(seq.end(), from_a.begin(), from_a.end());
        }
        for (auto idx : r.walk) {
          const MEdge& me = m.edges[idx];
          seq.push_back(by_source[me.label][used[me.label]++]);
          if (placed.insert(me.to).second) {
            auto from_c = detail::edges_from(d, n, w, me.to);
            seq.insert(seq.end(), from_c.begin(), from_c.end());
          }
        }
        if (a == b) {
          if (from_a.size() > 1) seq.insert(seq.end(), from_a.begin() + 1, from_a.end());
        } else {
          auto from_b = detail::edges_from(d, n, w, b);
          seq.insert(seq.end(), from_b.begin(), from_b.end());
        }
        if (seq.size() != fib.size())
          throw SynthesisError("level " + std::to_string(n) + ": " + L.ids[w] +
                               " has edges from a component the walk never visits");
        order[w] = seq;
      }
    }
    Level nl;
    nl.ids = L.ids;
    nl.comp = L.comp;
    for (std::size_t w = 0; w < L.size(); ++w)
      for (auto e : order[w]) nl.edges.push_back(L.edges[e]);
    levels.push_back(std::move(nl));
  }
  out.diagram = Diagram(d.k(), d.stationary(), std::move(levels));

  out.report.merge(cond);
  out.report.merge(compat);
  out.report.add("degree_identity", degree, wdeg);
  Report v = validate_ordered(out.diagram);
  out.report.add("validate_ordered", v.overall(), {{"report", v.to_json()}});
  Verdict rt = Verdict::Holds, ix = Verdict::Holds;
  json wrt = json::object(), wix = json::object();
  if (v.overall() == Verdict::Holds) {
    for (const auto& g : out.graphs) {
      if (!markers_resolve(out.diagram, g.level)) continue;
      if (!transition_graph(out.diagram, g.level).same_as(g) && rt == Verdict::Holds) {
        rt = Verdict::Fails;
        wrt = {{"level", g.level}};
      }
      IndexSet s = index_elements(out.diagram, g.level);
      const auto& vals = dv.at(g.level);
      for (std::size_t c = 0; c < s.vertices.size(); ++c)
        for (int i = 0; i < d.k(); ++i)
          if (s.d[i].vector[c] != -vals.at(s.vertices[c])[i] && ix == Verdict::Holds) {
            ix = Verdict::Fails;
            wix = {{"level", g.level}, {"vertex", d.name(g.level, s.vertices[c])}, {"index", i + 1}};
          }
    }
  } else {
    rt = ix = Verdict::Unknown;
  }
  out.report.add("round_trip", rt, wrt);
  out.report.add("index_round_trip", ix, wix);
  return out;
}

}  // namespace bdk
