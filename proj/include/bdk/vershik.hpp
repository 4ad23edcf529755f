#pragma once

// Vershik map on truncated paths, its inverse, and Kakutani-Rokhlin towers.

#include "order.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
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

struct Successor {
  std::optional<FinitePath> path;  // set unless p was extreme
  int extreme = -1;                // -1 not extreme, 0 extreme off the z paths, i for z_{i,max} (or z_{i,min})
};

namespace detail {

inline FinitePath extreme_path_into(const Diagram& d, std::size_t n, std::size_t v, bool max,
                                    std::vector<std::size_t> prefix_deeper = {}) {
  // edges for levels n, n-1, ..., 1 following extreme edges back from v
  std::vector<std::size_t> rev;
  for (std::size_t m = n; m >= 1; --m) {
    const auto& fib = d.level(m).fiber[v];
    std::size_t e = max ? fib.back() : fib.front();
    rev.push_back(e);
    v = d.level(m).edges[e].source;
  }
  FinitePath p;
  p.edges.assign(rev.rbegin(), rev.rend());
  p.edges.insert(p.edges.end(), prefix_deeper.begin(), prefix_deeper.end());
  return p;
}

inline int which_z(const Diagram& d, const ExtremePaths& ex, const FinitePath& p, bool max) {
  if (ex.verdict != Verdict::Holds) return 0;
  for (int i = 1; i <= d.k(); ++i)
    if (z_path(d, ex, i, max, p.depth()) == p) return i;
  return 0;
}

// forward: successor; otherwise predecessor.
inline Successor step_finite(const Diagram& d, const ExtremePaths& ex, const FinitePath& p, bool forward) {
  Successor out;
  const std::size_t N = p.depth();
  for (std::size_t j = 1; j <= N; ++j) {
    const Level& L = d.level(j);
    std::size_t e = p.edges[j - 1];
    bool at_end = forward ? L.is_max(e) : L.is_min(e);
    if (at_end) continue;
    const auto& fib = L.fiber[L.edges[e].range];
    std::size_t ne = fib[forward ? L.rank[e] + 1 : L.rank[e] - 1];
    FinitePath q;
    if (j > 1) q = extreme_path_into(d, j - 1, L.edges[ne].source, !forward);
    q.edges.push_back(ne);
    q.edges.insert(q.edges.end(), p.edges.begin() + j, p.edges.end());
    out.path = q;
    return out;
  }
  out.extreme = which_z(d, ex, p, forward);
  return out;
}

}  // namespace detail

inline Successor successor(const Diagram& d, const ExtremePaths& ex, const FinitePath& p) {
  return detail::step_finite(d, ex, p, true);
}
inline Successor predecessor(const Diagram& d, const ExtremePaths& ex, const FinitePath& p) {
  return detail::step_finite(d, ex, p, false);
}

struct StepResult {
  std::set<FinitePath> images;
  bool exhausted = false;  // the lookahead ran out before the exploration closed
  bool flagged = false;    // an all-extreme continuation not on a z path
};

namespace detail {

// Images at depth N of the extreme path p under sigma (forward) or its inverse.
inline StepResult step_set(const Diagram& d, const ExtremePaths& ex, const FinitePath& p, std::size_t lookahead,
                           bool forward) {
  StepResult out;
  Successor s = step_finite(d, ex, p, forward);
  if (s.path) {
    out.images.insert(*s.path);
    return out;
  }
  const std::size_t N = p.depth();
  const std::size_t u0 = range_of(d, p);
  // phi maps level-j vertices to level-N vertices along the refill chain
  std::vector<std::size_t> phi(d.size(N));
  for (std::size_t v = 0; v < phi.size(); ++v) phi[v] = v;
  struct State {
    std::size_t u, j;
    std::vector<std::size_t> phi;
  };
  std::set<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>> seen;
  // breadth first, so a state is first met at its lowest level
  std::deque<State> queue{{u0, N, phi}};
  bool cycle = false;
  while (!queue.empty()) {
    State st = queue.front();
    queue.pop_front();
    auto key = std::make_tuple(st.u, d.forward_class(st.j), st.phi);
    if (!seen.insert(key).second) {
      cycle = true;
      continue;
    }
    if (st.j + 1 > N + lookahead || !d.has_level(st.j + 1)) {
      out.exhausted = true;
      continue;
    }
    const Level& M = d.level(st.j + 1);
    std::vector<std::size_t> next_phi(M.size());
    for (std::size_t v = 0; v < M.size(); ++v) {
      const auto& fib = M.fiber[v];
      next_phi[v] = st.phi[M.edges[forward ? fib.front() : fib.back()].source];
    }
    for (auto f : d.out_edges(st.j, st.u)) {
      bool at_end = forward ? M.is_max(f) : M.is_min(f);
      if (!at_end) {
        std::size_t nf = M.fiber[M.edges[f].range][forward ? M.rank[f] + 1 : M.rank[f] - 1];
        std::size_t w = st.phi[M.edges[nf].source];
        out.images.insert(extreme_path_into(d, N, w, !forward));
      } else {
        queue.push_back({M.edges[f].range, st.j + 1, next_phi});
      }
    }
  }
  if (s.extreme > 0) {
    out.images.insert(z_path(d, ex, s.extreme, !forward, N));
  } else if (cycle) {
    // A repeated state may come from two branches; confirm an all-extreme cycle.
    const std::size_t H = marker_horizon(d);
    std::map<std::pair<std::size_t, std::size_t>, int> color;
    std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t j) -> bool {
      auto key = std::make_pair(u, std::min(j, H));
      auto it = color.find(key);
      if (it != color.end()) return it->second == 1;
      color[key] = 1;
      if (d.has_level(j + 1)) {
        const Level& M = d.level(j + 1);
        for (auto f : d.out_edges(j, u))
          if ((forward ? M.is_max(f) : M.is_min(f)) && dfs(M.edges[f].range, j + 1)) return true;
      }
      color[key] = 2;
      return false;
    };
    out.flagged = dfs(u0, N);
  }
  return out;
}

}  // namespace detail

inline StepResult vershik_step(const Diagram& d, const ExtremePaths& ex, const FinitePath& p, std::size_t lookahead) {
  return detail::step_set(d, ex, p, lookahead, true);
}
inline StepResult inverse_step(const Diagram& d, const ExtremePaths& ex, const FinitePath& p, std::size_t lookahead) {
  return detail::step_set(d, ex, p, lookahead, false);
}

// All root-based paths of depth N, grouped by range vertex, each group in lex order.
inline std::vector<FinitePath> all_paths(const Diagram& d, std::size_t N) {
  std::vector<FinitePath> out;
  for (std::size_t v = 0; v < d.size(N); ++v)
    for (auto& [s, path] : composite_fiber(d, 0, N, v)) out.push_back({path});
  return out;
}

inline std::string encode_path(const Diagram& d, const FinitePath& p) {
  std::ostringstream os;
  for (std::size_t n = 1; n <= p.depth(); ++n) {
    const Level& L = d.level(n);
    const Edge& e = L.edges[p.edges[n - 1]];
    if (n > 1) os << ' ';
    os << n << ':' << d.name(n - 1, e.source) << "->" << L.ids[e.range] << '#' << (L.rank[p.edges[n - 1]] + 1);
  }
  return os.str();
}

// Inverse of encode_path.
inline FinitePath decode_path(const Diagram& d, const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  FinitePath p;
  while (is >> tok) {
    std::size_t n = p.depth() + 1;
    auto colon = tok.find(':'), arrow = tok.find("->"), hash = tok.find('#');
    if (colon == std::string::npos || arrow == std::string::npos || hash == std::string::npos)
      throw std::invalid_argument("bad path token " + tok);
    if (std::stoul(tok.substr(0, colon)) != n) throw std::invalid_argument("path token out of sequence: " + tok);
    std::string rng = tok.substr(arrow + 2, hash - arrow - 2);
    std::size_t rank = std::stoul(tok.substr(hash + 1));
    const Level& L = d.level(n);
    auto it = std::find(L.ids.begin(), L.ids.end(), rng);
    if (it == L.ids.end() || rank == 0 || rank > L.fiber[it - L.ids.begin()].size())
      throw std::invalid_argument("path token does not name an edge: " + tok);
    std::size_t e = L.fiber[it - L.ids.begin()][rank - 1];
    if (d.name(n - 1, L.edges[e].source) != tok.substr(colon + 1, arrow - colon - 1))
      throw std::invalid_argument("path token names the wrong source: " + tok);
    p.edges.push_back(e);
  }
  if (!is_valid_path(d, p)) throw std::invalid_argument("edges do not compose into a path");
  return p;
}

// ---------------------------------------------------------------------------
// Towers

struct KRPartition {
  std::size_t level = 0;
  std::vector<std::vector<FinitePath>> towers;  // per vertex, floors in order
  Vec heights;
};

inline KRPartition towers(const Diagram& d, const ExtremePaths& ex, std::size_t n) {
  KRPartition kr;
  kr.level = n;
  for (std::size_t v = 0; v < d.size(n); ++v) {
    std::vector<FinitePath> floors;
    for (auto& [s, path] : composite_fiber(d, 0, n, v)) floors.push_back({path});
    for (std::size_t j = 0; j < floors.size(); ++j) {
      Successor s = successor(d, ex, floors[j]);
      bool ok = j + 1 < floors.size() ? (s.path && *s.path == floors[j + 1]) : !s.path;
      if (!ok)
        throw std::logic_error("towers: successor does not climb tower " + d.name(n, v) + " at floor " +
                               std::to_string(j + 1));
    }
    kr.heights.push_back(Int(floors.size()));
    kr.towers.push_back(std::move(floors));
  }
  return kr;
}

// Entry (l', l) counts complete passes of tower l' (level n+1) through tower l (level n).
inline Matrix traversal_matrix(const Diagram& d, const ExtremePaths& ex, std::size_t n) {
  KRPartition lo = towers(d, ex, n), hi = towers(d, ex, n + 1);
  std::map<FinitePath, std::pair<std::size_t, std::size_t>> floor_of;  // path -> (tower, floor)
  for (std::size_t l = 0; l < lo.towers.size(); ++l)
    for (std::size_t j = 0; j < lo.towers[l].size(); ++j) floor_of[lo.towers[l][j]] = {l, j};
  Matrix m(hi.towers.size(), lo.towers.size());
  for (std::size_t lp = 0; lp < hi.towers.size(); ++lp) {
    const auto& t = hi.towers[lp];
    std::size_t j = 0;
    while (j < t.size()) {
      FinitePath q{std::vector<std::size_t>(t[j].edges.begin(), t[j].edges.begin() + n)};
      auto [l, f] = floor_of.at(q);
      std::size_t J = lo.towers[l].size();
      bool complete = f == 0 && j + J <= t.size();
      for (std::size_t s = 0; complete && s < J; ++s) {
        FinitePath qs{std::vector<std::size_t>(t[j + s].edges.begin(), t[j + s].edges.begin() + n)};
        complete = qs == lo.towers[l][s];
      }
      if (!complete) throw std::logic_error("traversal_matrix: tower " + d.name(n + 1, lp) + " breaks a lower tower");
      m(lp, l) += 1;
      j += J;
    }
  }
  if (m != d.incidence(n)) throw std::logic_error("traversal_matrix: counts differ from the incidence matrix");
  return m;
}

}  // namespace bdk
