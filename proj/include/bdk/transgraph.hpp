#pragma once

// Transition graphs L_n on the minimal components Y_1..Y_k.

#include "json_io.hpp"
#include "order.hpp"

#include <algorithm>
#include <functional>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace bdk {

struct TGEdge {
  std::size_t vertex = 0;  // index of the labelling V_o^n vertex
  std::string label;
  int source = 0;
  int target = 0;
  bool loop() const { return source == target; }
};

struct TransitionGraph {
  std::size_t level = 0;
  int k = 1;
  std::vector<TGEdge> edges;

  // Equality as labelled multigraphs.
  bool same_as(const TransitionGraph& o) const {
    auto key = [](const TransitionGraph& g) {
      std::vector<std::tuple<std::string, int, int>> v;
      for (const auto& e : g.edges) v.emplace_back(e.label, e.source, e.target);
      std::sort(v.begin(), v.end());
      return v;
    };
    return k == o.k && key(*this) == key(o);
  }

  const TGEdge* edge_for(std::size_t vertex) const {
    for (const auto& e : edges)
      if (e.vertex == vertex) return &e;
    return nullptr;
  }
};

inline TransitionGraph transition_graph(const Diagram& d, std::size_t n) {
  TransitionGraph g;
  g.level = n;
  g.k = d.k();
  for (const auto& m : markers(d, n)) g.edges.push_back({m.vertex, d.name(n, m.vertex), m.m_minus, m.m_plus});
  return g;
}

namespace detail {

// Weak components over Y_1..Y_k (1-based ids); returns the component id per vertex.
inline std::vector<int> weak_components(int k, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(k + 1);
  for (int i = 0; i <= k; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : edges) parent[find(a)] = find(b);
  std::vector<int> c(k + 1);
  for (int i = 1; i <= k; ++i) c[i] = find(i);
  return c;
}

inline std::vector<std::vector<bool>> reachability(int k, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<bool>> r(k + 1, std::vector<bool>(k + 1, false));
  for (int i = 1; i <= k; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (int m = 1; m <= k; ++m)
    for (int i = 1; i <= k; ++i)
      if (r[i][m])
        for (int j = 1; j <= k; ++j)
          if (r[m][j]) r[i][j] = true;
  return r;
}

inline std::vector<std::pair<int, int>> as_pairs(const TransitionGraph& g) {
  std::vector<std::pair<int, int>> p;
  for (const auto& e : g.edges) p.emplace_back(e.source, e.target);
  return p;
}

}  // namespace detail

inline Report check_structure(const TransitionGraph& g, bool non_elementary) {
  Report rep;
  auto pairs = detail::as_pairs(g);
  auto comp = detail::weak_components(g.k, pairs);
  Verdict conn = Verdict::Holds;
  json wc = {{"edges", g.edges.size()}};
  for (int i = 2; i <= g.k; ++i)
    if (comp[i] != comp[1]) {
      conn = Verdict::Fails;
      wc = {{"level", g.level}, {"separated", json::array({1, i})}};
      break;
    }
  rep.add("connected", conn, wc);
  if (g.k >= 2) {
    std::size_t need = non_elementary ? g.k : g.k - 1;
    rep.add("edge_count", g.edges.size() >= need ? Verdict::Holds : Verdict::Fails,
            {{"level", g.level}, {"edges", g.edges.size()}, {"required", need}});
  }
  if (non_elementary && g.k >= 2) {
    // every edge starts a closed walk: its target reaches its source
    auto r = detail::reachability(g.k, pairs);
    Verdict cw = Verdict::Holds;
    json w = json::object();
    for (const auto& e : g.edges)
      if (!r[e.target][e.source]) {
        cw = Verdict::Fails;
        w = {{"level", g.level}, {"edge", e.label}, {"source", e.source}, {"target", e.target}};
        break;
      }
    rep.add("closed_walks", cw, w);
  }
  return rep;
}

struct LiftedPath {
  std::vector<std::size_t> labels;  // V_o^n vertices along the path
  int start = 0, end = 0;
  Report checks;
};

// Reads the path in L_n attached to w in V_o^{n+1} off the order of r^{-1}(w).
inline LiftedPath lift_edge_to_path(const Diagram& d, std::size_t n, std::size_t w) {
  if (d.comp(n + 1, w) != 0) throw std::invalid_argument("lift_edge_to_path: vertex is not in V_o");
  TransitionGraph g = transition_graph(d, n);
  LiftedPath out;
  out.start = chain_component(d, n + 1, w, false);
  out.end = chain_component(d, n + 1, w, true);
  const Level& L = d.level(n + 1);
  std::set<int> touches;
  for (auto e : L.fiber[w]) {
    std::size_t s = L.edges[e].source;
    int c = d.comp(n, s);
    if (c != 0) touches.insert(c);
    else out.labels.push_back(s);
  }
  // (1) consecutive steps compose and the endpoints match the markers of w
  Verdict c1 = Verdict::Holds;
  json w1 = json::object();
  int at = out.start;
  std::set<int> visited{at};
  for (std::size_t j = 0; j < out.labels.size(); ++j) {
    const TGEdge* e = g.edge_for(out.labels[j]);
    if (e->source != at) {
      c1 = Verdict::Fails;
      w1 = {{"position", j + 1}, {"label", e->label}, {"expected_source", at}, {"source", e->source}};
      break;
    }
    at = e->target;
    visited.insert(at);
  }
  if (c1 == Verdict::Holds && at != out.end) {
    c1 = Verdict::Fails;
    w1 = {{"reason", "endpoint differs from m_+"}, {"end", at}, {"m_plus", out.end}};
  }
  out.checks.add("comp_1", c1, w1);
  // (2) multiplicities equal the incidence entries
  Matrix F = d.incidence(n);
  Verdict c2 = Verdict::Holds;
  json w2 = json::object();
  for (auto v : d.vertices(n, 0)) {
    Int count = static_cast<long long>(std::count(out.labels.begin(), out.labels.end(), v));
    if (count != F(w, v)) {
      c2 = Verdict::Fails;
      w2 = {{"label", d.name(n, v)}, {"count", int_json(count)}, {"multiplicity", int_json(F(w, v))}};
      break;
    }
  }
  out.checks.add("comp_2", c2, w2);
  // (3) the path passes through every Y_i that w sees directly
  Verdict c3 = Verdict::Holds;
  json w3 = json::object();
  for (int i : touches)
    if (!visited.count(i)) {
      c3 = Verdict::Fails;
      w3 = {{"component", i}};
      break;
    }
  out.checks.add("comp_3", c3, w3);
  // (4) each traversed label sees both of its endpoint components one level down
  Verdict c4 = Verdict::Holds;
  json w4 = json::object();
  if (n >= 2) {
    const Level& Ln = d.level(n);
    for (auto v : std::set<std::size_t>(out.labels.begin(), out.labels.end())) {
      const TGEdge* e = g.edge_for(v);
      bool src = false, tgt = false;
      for (auto f : Ln.fiber[v]) {
        int c = d.comp(n - 1, Ln.edges[f].source);
        src = src || c == e->source;
        tgt = tgt || c == e->target;
      }
      if (!src || !tgt) {
        c4 = Verdict::Fails;
        w4 = {{"label", e->label}, {"missing", !src ? e->source : e->target}};
        break;
      }
    }
  }
  out.checks.add("comp_4", c4, w4);
  return out;
}

inline std::string to_dot(const TransitionGraph& g) {
  std::ostringstream os;
  os << "digraph L" << g.level << " {\n";
  for (int i = 1; i <= g.k; ++i) os << "  Y" << i << ";\n";
  for (const auto& e : g.edges) os << "  Y" << e.source << " -> Y" << e.target << " [label=\"" << e.label << "\"];\n";
  os << "}\n";
  return os.str();
}

inline json to_json(const TransitionGraph& g) {
  json out = {{"level", g.level}, {"k", g.k}, {"edges", json::array()}};
  for (const auto& e : g.edges) out["edges"].push_back({{"label", e.label}, {"source", e.source}, {"target", e.target}});
  return out;
}

}  // namespace bdk
