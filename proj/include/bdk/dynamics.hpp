#pragma once

// Dynamics at resolution 2^-N: cylinder graphs, chains, covering, E_i.

#include "vershik.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdk {

struct CylinderGraph {
  std::size_t depth = 0;
  std::size_t lookahead = 0;
  std::vector<FinitePath> nodes;
  std::vector<std::vector<std::size_t>> succ, pred;
  std::vector<bool> flagged;  // sigma unresolved on this cylinder; no out-edges recorded
  std::map<FinitePath, std::size_t> index;

  std::size_t size() const { return nodes.size(); }
  bool any_flagged() const { return std::find(flagged.begin(), flagged.end(), true) != flagged.end(); }
  std::size_t at(const FinitePath& p) const {
    auto it = index.find(p);
    if (it == index.end()) throw std::invalid_argument("path is not a node of the cylinder graph");
    return it->second;
  }
};

inline CylinderGraph cylinder_graph(const Diagram& d, const ExtremePaths& ex, std::size_t N, std::size_t M) {
  CylinderGraph g;
  g.depth = N;
  g.lookahead = M;
  g.nodes = all_paths(d, N);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) g.index[g.nodes[i]] = i;
  g.succ.assign(g.size(), {});
  g.pred.assign(g.size(), {});
  g.flagged.assign(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    StepResult r = vershik_step(d, ex, g.nodes[i], M);
    if (r.exhausted || r.flagged) {
      g.flagged[i] = true;
      continue;
    }
    for (const auto& q : r.images) g.succ[i].push_back(g.index.at(q));
    std::sort(g.succ[i].begin(), g.succ[i].end());
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.succ[i]) g.pred[j].push_back(i);
  return g;
}

namespace detail {

inline std::vector<bool> reach_from(const std::vector<std::vector<std::size_t>>& adj, const std::vector<std::size_t>& src) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<std::size_t> q;
  for (auto s : src)
    if (!seen[s]) seen[s] = true, q.push_back(s);
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto v : adj[u])
      if (!seen[v]) seen[v] = true, q.push_back(v);
  }
  return seen;
}

// Tarjan, iterative; component ids in reverse topological order.
inline std::vector<std::size_t> scc(const std::vector<std::vector<std::size_t>>& adj, std::size_t& count) {
  const std::size_t n = adj.size(), none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> idx(n, none), low(n, 0), comp(n, none), st;
  std::vector<bool> on(n, false);
  std::size_t counter = 0;
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (idx[s] != none) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{s, 0}};
    idx[s] = low[s] = counter++;
    st.push_back(s);
    on[s] = true;
    while (!work.empty()) {
      auto& [u, i] = work.back();
      if (i < adj[u].size()) {
        std::size_t v = adj[u][i++];
        if (idx[v] == none) {
          idx[v] = low[v] = counter++;
          st.push_back(v);
          on[v] = true;
          work.push_back({v, 0});
        } else if (on[v]) {
          low[u] = std::min(low[u], idx[v]);
        }
      } else {
        std::size_t done = u;
        work.pop_back();
        if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        if (low[done] == idx[done]) {
          while (true) {
            std::size_t x = st.back();
            st.pop_back();
            on[x] = false;
            comp[x] = count;
            if (x == done) break;
          }
          ++count;
        }
      }
    }
  }
  return comp;
}

}  // namespace detail

inline json node_list(const Diagram& d, const CylinderGraph& g, const std::vector<std::size_t>& ids) {
  json a = json::array();
  for (auto i : ids) a.push_back(encode_path(d, g.nodes[i]));
  return a;
}

struct ChainVerdict {
  Verdict verdict = Verdict::Unknown;
  Verdict moving = Verdict::Unknown;  // same as verdict, by the equivalence
  std::size_t components = 0;
  std::vector<std::size_t> closed_set;  // proper, closed under sigma when Fails
  json witness;
};

inline ChainVerdict chain_transitive(const Diagram& d, const CylinderGraph& g) {
  ChainVerdict cv;
  std::size_t count = 0;
  auto comp = detail::scc(g.succ, count);
  cv.components = count;
  // Independent check: a proper nonempty set closed under out-edges.
  // The forward closure of node 0 is proper, or else the forward closure of a
  // node that cannot reach 0 is; if neither exists, no proper closed set does.
  std::optional<std::vector<std::size_t>> closed;
  auto as_set = [&](const std::vector<bool>& r) -> std::optional<std::vector<std::size_t>> {
    if (std::find(r.begin(), r.end(), false) == r.end()) return std::nullopt;
    std::vector<std::size_t> e;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (r[i]) e.push_back(i);
    return e;
  };
  if (g.size() > 0) {
    closed = as_set(detail::reach_from(g.succ, {0}));
    if (!closed) {
      auto back = detail::reach_from(g.pred, {0});
      auto it = std::find(back.begin(), back.end(), false);
      if (it != back.end()) closed = as_set(detail::reach_from(g.succ, {std::size_t(it - back.begin())}));
    }
  }
  bool strongly = count == 1;
  if (strongly == closed.has_value())
    throw std::logic_error("chain_transitive: SCC count and closed-set search disagree");
  if (g.any_flagged()) {
    std::vector<std::size_t> fl;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.flagged[i]) fl.push_back(i);
    cv.verdict = Verdict::Unknown;
    cv.witness = {{"depth", g.depth}, {"reason", "unresolved cylinders"}, {"flagged", node_list(d, g, fl)}};
  } else if (strongly) {
    cv.verdict = Verdict::Holds;
    cv.witness = {{"depth", g.depth}, {"nodes", g.size()}, {"components", count}};
  } else {
    cv.verdict = Verdict::Fails;
    cv.closed_set = *closed;
    cv.witness = {{"depth", g.depth},
                  {"components", count},
                  {"closed_set", node_list(d, g, *closed)},
                  {"reason", "sigma maps this proper set into itself"}};
  }
  cv.moving = cv.verdict;
  return cv;
}

inline std::optional<std::vector<std::size_t>> epsilon_chain(const CylinderGraph& g, std::size_t p, std::size_t q) {
  std::vector<std::size_t> parent(g.size(), static_cast<std::size_t>(-1));
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> bfs{p};
  seen[p] = true;
  while (!bfs.empty()) {
    auto u = bfs.front();
    bfs.pop_front();
    if (u == q) break;
    for (auto v : g.succ[u])
      if (!seen[v]) seen[v] = true, parent[v] = u, bfs.push_back(v);
  }
  if (!seen[q]) return std::nullopt;
  std::vector<std::size_t> chain{q};
  while (chain.back() != p) chain.push_back(parent[chain.back()]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// Level-N vertices from which an infinite path stays inside V_i.
inline std::vector<bool> extendable_in(const Diagram& d, int i, std::size_t N) {
  auto step_back = [&](std::size_t n, const std::vector<bool>& alive_next) {
    std::vector<bool> a(d.size(n), false);
    const Level& L = d.level(n + 1);
    for (const auto& e : L.edges)
      if (alive_next[e.range] && d.comp(n, e.source) == i) a[e.source] = true;
    return a;
  };
  std::size_t top;
  std::vector<bool> alive;
  if (d.stationary()) {
    top = d.tail_start();
    alive.assign(d.size(top), false);
    for (std::size_t v = 0; v < alive.size(); ++v) alive[v] = d.comp(top, v) == i;
    while (true) {
      auto next = step_back(top, alive);
      if (next == alive) break;
      alive = next;
    }
    if (N >= top) return alive;
  } else {
    top = d.depth();
    if (N > top) throw std::out_of_range("depth beyond a finite presentation");
    alive.assign(d.size(top), false);
    for (std::size_t v = 0; v < alive.size(); ++v) alive[v] = d.comp(top, v) == i;
  }
  for (std::size_t n = top; n > N; --n) alive = step_back(n - 1, alive);
  return alive;
}

// Cylinders meeting Y_i: every vertex in V_i, range extendable inside V_i.
inline std::vector<std::size_t> family(const Diagram& d, const CylinderGraph& g, int i) {
  auto alive = extendable_in(d, i, g.depth);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const FinitePath& p = g.nodes[j];
    bool in = alive[range_of(d, p)];
    for (std::size_t n = 1; n <= g.depth && in; ++n) in = d.comp(n, vertex_at(d, p, n)) == i;
    if (in) out.push_back(j);
  }
  return out;
}

struct Saturation {
  std::vector<std::vector<std::size_t>> sets;  // sets[i-1] = E_i
  bool all_full = false;
  Report report;
};

inline Saturation saturation_sets(const Diagram& d, const CylinderGraph& g) {
  Saturation s;
  s.all_full = true;
  for (int i = 1; i <= d.k(); ++i) {
    auto r = detail::reach_from(g.pred, family(d, g, i));
    std::vector<std::size_t> e;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (r[j]) e.push_back(j);
    s.all_full = s.all_full && e.size() == g.size();
    s.sets.push_back(std::move(e));
  }
  // E_i is a union of depth-N cylinders by construction; check the equivalence.
  ChainVerdict cv = chain_transitive(d, g);
  Verdict agree = Verdict::Unknown;
  if (cv.verdict != Verdict::Unknown)
    agree = (cv.verdict == Verdict::Holds) == s.all_full ? Verdict::Holds : Verdict::Fails;
  json sizes = json::array();
  for (const auto& e : s.sets) sizes.push_back(e.size());
  s.report.add("criterion_agrees", agree,
               {{"depth", g.depth}, {"nodes", g.size()}, {"sizes", sizes}, {"chain_transitive", to_string(cv.verdict)}});
  return s;
}

struct Cover {
  std::optional<std::size_t> steps;
  int missing = 0;  // a component S does not meet
  std::string reason;
};

inline Cover cover_steps(const Diagram& d, const CylinderGraph& g, const std::vector<std::size_t>& S, bool forward) {
  Cover c;
  std::set<std::size_t> s(S.begin(), S.end());
  for (int i = 1; i <= d.k(); ++i) {
    auto f = family(d, g, i);
    if (std::none_of(f.begin(), f.end(), [&](std::size_t j) { return s.count(j) > 0; })) {
      c.missing = i;
      c.reason = "S misses the cylinders of Y" + std::to_string(i);
      return c;
    }
  }
  const auto& adj = forward ? g.succ : g.pred;
  std::vector<std::size_t> dist(g.size(), static_cast<std::size_t>(-1));
  std::deque<std::size_t> q;
  for (auto j : s) dist[j] = 0, q.push_back(j);
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto v : adj[u])
      if (dist[v] == static_cast<std::size_t>(-1)) dist[v] = dist[u] + 1, q.push_back(v);
  }
  std::size_t K = 0;
  for (auto x : dist) {
    if (x == static_cast<std::size_t>(-1)) {
      c.reason = g.any_flagged() ? "unresolved cylinders block the saturation" : "saturation never covers";
      return c;
    }
    K = std::max(K, x);
  }
  c.steps = K;
  return c;
}

// Closed walk from p through each waypoint set in turn and back to p.
inline std::optional<std::vector<std::size_t>> pseudo_orbit(const CylinderGraph& g, std::size_t p,
                                                            const std::vector<std::vector<std::size_t>>& waypoints = {}) {
  std::vector<std::size_t> walk{p};
  auto go_to = [&](const std::vector<std::size_t>& targets, bool nonempty) -> bool {
    std::size_t from = walk.back();
    std::optional<std::vector<std::size_t>> best;
    for (auto t : targets) {
      std::optional<std::vector<std::size_t>> seg;
      if (t == from && nonempty) {
        // shortest return: via a successor
        for (auto s : g.succ[from]) {
          auto back = epsilon_chain(g, s, t);
          if (back && (!seg || back->size() + 1 < seg->size())) {
            std::vector<std::size_t> full{from};
            full.insert(full.end(), back->begin(), back->end());
            seg = full;
          }
        }
      } else {
        seg = epsilon_chain(g, from, t);
      }
      if (seg && (!best || seg->size() < best->size())) best = seg;
    }
    if (!best) return false;
    walk.insert(walk.end(), best->begin() + 1, best->end());
    return true;
  };
  for (const auto& w : waypoints)
    if (!go_to(w, false)) return std::nullopt;
  if (!go_to({p}, walk.size() == 1)) return std::nullopt;
  return walk;
}

inline std::string to_dot(const Diagram& d, const CylinderGraph& g) {
  std::ostringstream os;
  os << "digraph cylinders_" << g.depth << " {\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << "  n" << i << " [label=\"" << encode_path(d, g.nodes[i]) << "\"";
    if (g.flagged[i]) os << ", style=dashed";
    os << "];\n";
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.succ[i]) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace bdk
