#pragma once

// Finitely presented Bratteli diagrams: explicit levels 1..D plus an
// optional stationary tail in which level D (edges and labels) repeats.

#include "arith.hpp"
#include "report.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bdk {

struct DiagramError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  std::size_t source = 0;  // index at level n-1 (0 for the root)
  std::size_t range = 0;   // index at level n
  bool operator==(const Edge&) const = default;
};

struct Level {
  std::vector<std::string> ids;
  std::vector<int> comp;    // 0 = other, i = minimal component i
  std::vector<Edge> edges;  // listing order; within a fiber this is the order

  // derived
  std::vector<std::vector<std::size_t>> fiber;  // per range vertex, ascending
  std::vector<std::size_t> rank;                // position of each edge in its fiber

  std::size_t size() const { return ids.size(); }
  bool is_min(std::size_t e) const { return rank[e] == 0; }
  bool is_max(std::size_t e) const { return rank[e] + 1 == fiber[edges[e].range].size(); }
};

class Diagram {
 public:
  Diagram() = default;

  Diagram(int k, bool stationary, std::vector<Level> levels)
      : k_(k), stationary_(stationary), levels_(std::move(levels)) {
    check();
  }

  int k() const { return k_; }
  bool stationary() const { return stationary_; }
  std::size_t depth() const { return levels_.size(); }
  const std::vector<Level>& explicit_levels() const { return levels_; }

  bool has_level(std::size_t n) const { return n <= depth() || stationary_; }

  // Level n >= 1; past the presentation a stationary diagram repeats level D.
  const Level& level(std::size_t n) const {
    if (n == 0) throw std::out_of_range("level 0 is the implicit root");
    if (n <= depth()) return levels_[n - 1];
    if (stationary_) return levels_.back();
    throw std::out_of_range("level " + std::to_string(n) + " beyond a finite presentation of depth " +
                            std::to_string(depth()));
  }

  // Levels at or above this one share the vertex set and the outgoing structure.
  std::size_t tail_start() const { return stationary_ ? depth() - 1 : depth(); }
  std::size_t forward_class(std::size_t n) const {
    return stationary_ && n > tail_start() ? tail_start() : n;
  }

  std::size_t size(std::size_t n) const { return n == 0 ? 1 : level(n).size(); }
  int comp(std::size_t n, std::size_t v) const { return n == 0 ? 0 : level(n).comp[v]; }
  std::string name(std::size_t n, std::size_t v) const { return n == 0 ? "root" : level(n).ids[v]; }

  std::vector<std::size_t> vertices(std::size_t n, int c) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(n); ++v)
      if (comp(n, v) == c) out.push_back(v);
    return out;
  }

  // F_n: rows are level n+1 vertices, columns level n vertices.
  Matrix incidence(std::size_t n) const {
    const Level& L = level(n + 1);
    Matrix m(L.size(), size(n));
    for (const auto& e : L.edges) m(e.range, e.source) += 1;
    return m;
  }

  Vec path_counts(std::size_t n) const {
    Vec p{1};
    for (std::size_t j = 0; j < n; ++j) p = incidence(j) * p;
    return p;
  }

  // Edges at level n+1 leaving vertex v of level n, in listing order.
  std::vector<std::size_t> out_edges(std::size_t n, std::size_t v) const {
    const Level& L = level(n + 1);
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < L.edges.size(); ++e)
      if (L.edges[e].source == v) out.push_back(e);
    return out;
  }

  // A copy whose levels 1..depth are explicit and whose tail (if any) is level `depth`.
  Diagram unrolled(std::size_t new_depth) const {
    if (new_depth < depth()) throw std::invalid_argument("unrolled: depth would shrink");
    std::vector<Level> ls;
    for (std::size_t n = 1; n <= new_depth; ++n) ls.push_back(level(n));
    return Diagram(k_, stationary_, std::move(ls));
  }

 private:
  void check() {
    if (k_ < 1) throw DiagramError("k must be positive");
    if (levels_.empty()) throw DiagramError("diagram has no levels");
    for (std::size_t n = 1; n <= levels_.size(); ++n) {
      Level& L = levels_[n - 1];
      std::string where = "level " + std::to_string(n);
      if (L.ids.empty()) throw DiagramError(where + ": no vertices");
      if (L.comp.size() != L.ids.size()) throw DiagramError(where + ": label count mismatch");
      std::set<std::string> seen;
      for (std::size_t v = 0; v < L.size(); ++v) {
        if (!seen.insert(L.ids[v]).second) throw DiagramError(where + ": duplicate vertex id " + L.ids[v]);
        if (L.comp[v] < 0 || L.comp[v] > k_)
          throw DiagramError(where + ": vertex " + L.ids[v] + " has component outside 1.." + std::to_string(k_));
      }
      std::size_t prev = n == 1 ? 1 : levels_[n - 2].size();
      L.fiber.assign(L.size(), {});
      L.rank.assign(L.edges.size(), 0);
      for (std::size_t e = 0; e < L.edges.size(); ++e) {
        const Edge& ed = L.edges[e];
        if (ed.source >= prev || ed.range >= L.size())
          throw DiagramError(where + ": edge " + std::to_string(e) + " has a dangling endpoint");
        L.rank[e] = L.fiber[ed.range].size();
        L.fiber[ed.range].push_back(e);
      }
      for (std::size_t v = 0; v < L.size(); ++v)
        if (L.fiber[v].empty()) throw DiagramError(where + ": r not surjective, vertex " + L.ids[v] + " has no incoming edge");
      if (n >= 2) {
        std::vector<bool> has_out(prev, false);
        for (const auto& ed : L.edges) has_out[ed.source] = true;
        for (std::size_t w = 0; w < prev; ++w)
          if (!has_out[w])
            throw DiagramError("level " + std::to_string(n - 1) + ": vertex " + levels_[n - 2].ids[w] +
                               " has no outgoing edge");
      }
    }
    if (stationary_) {
      if (levels_.size() < 2) throw DiagramError("stationary diagram needs at least two levels");
      const Level& a = levels_[levels_.size() - 2];
      const Level& b = levels_.back();
      if (a.size() != b.size())
        throw DiagramError("level " + std::to_string(levels_.size()) + ": stationary block is not square");
      if (a.comp != b.comp)
        throw DiagramError("level " + std::to_string(levels_.size()) + ": stationary labels differ from the previous level");
    }
  }

  int k_ = 1;
  bool stationary_ = false;
  std::vector<Level> levels_;
};

// ---------------------------------------------------------------------------
// k-simplicity

namespace detail {

inline SatMatrix block(const Diagram& d, std::size_t n, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols, unsigned cap) {
  Matrix f = d.incidence(n);
  return saturate(f.submatrix(rows, cols), cap);
}

struct SearchOutcome {
  Verdict verdict;
  std::size_t m;  // level reached (Holds) or where the search stopped
};

// Walks P_m = B_{m-1} ... B_n (blocks with rows/cols picked by sel) over m > n
// and reports the first m with pred(P_m). For stationary diagrams the walk is
// exact: once transitions are fixed a repeated state means pred never holds.
inline SearchOutcome search_products(const Diagram& d, std::size_t n,
                                     const std::function<std::vector<std::size_t>(std::size_t)>& sel,
                                     unsigned cap, const std::function<bool(const SatMatrix&)>& pred,
                                     std::size_t budget) {
  SatMatrix p = block(d, n, sel(n + 1), sel(n), cap);
  std::size_t m = n + 1;
  std::set<SatMatrix> seen;
  while (true) {
    if (pred(p)) return {Verdict::Holds, m};
    if (d.stationary()) {
      if (m >= d.tail_start() && !seen.insert(p).second) return {Verdict::Fails, m};
    } else if (m >= d.depth() || m - n >= budget) {
      return {Verdict::Unknown, m};
    }
    p = sat_mul(block(d, m, sel(m + 1), sel(m), cap), p, cap);
    ++m;
  }
}

inline bool all_positive(const SatMatrix& p) {
  for (const auto& row : p)
    for (auto x : row)
      if (!x) return false;
  return true;
}

inline bool rows_all_or_nothing(const SatMatrix& p) {
  for (const auto& row : p) {
    bool any = false, all = true;
    for (auto x : row) {
      if (x) any = true;
      else all = false;
    }
    if (any && !all) return false;
  }
  return true;
}

inline bool never_one(const SatMatrix& p) {
  for (const auto& row : p)
    for (auto x : row)
      if (x == 1) return false;
  return true;
}

inline json vertex_list(const Diagram& d, std::size_t n, const std::vector<std::size_t>& vs) {
  json a = json::array();
  for (auto v : vs) a.push_back(d.name(n, v));
  return a;
}

// Start levels whose search covers all levels: 1..D-1 when stationary.
inline std::size_t last_start(const Diagram& d) {
  return d.stationary() ? d.tail_start() : (d.depth() > 1 ? d.depth() - 1 : 0);
}

}  // namespace detail

inline Report validate_unordered(const Diagram& d, std::size_t depth_budget = 10) {
  Report rep;
  const std::size_t D = d.depth();

  // Condition (1): ranges in V_i only see sources in V_i.
  Verdict cond1 = Verdict::Holds;
  json w1 = json::object();
  for (std::size_t n = 2; n <= D && cond1 == Verdict::Holds; ++n) {
    const Level& L = d.level(n);
    for (const auto& e : L.edges) {
      int c = L.comp[e.range];
      if (c != 0 && d.comp(n - 1, e.source) != c) {
        cond1 = Verdict::Fails;
        w1 = {{"level", n}, {"edge", {{"source", d.name(n - 1, e.source)}, {"range", d.name(n, e.range)}}}};
        break;
      }
    }
  }
  // Every V_i^n must be nonempty for the minimal components to exist.
  for (std::size_t n = 1; n <= D && cond1 == Verdict::Holds; ++n)
    for (int i = 1; i <= d.k(); ++i)
      if (d.vertices(n, i).empty()) {
        cond1 = Verdict::Fails;
        w1 = {{"level", n}, {"component", i}, {"reason", "empty minimal component"}};
        break;
      }

  // Condition (2): V_i block products eventually positive.
  Verdict cond2 = Verdict::Holds;
  json w2 = json::object();
  std::size_t depth2 = 0;
  if (cond1 == Verdict::Holds) {
    for (int i = 1; i <= d.k() && cond2 != Verdict::Fails; ++i) {
      auto sel = [&d, i](std::size_t n) { return d.vertices(n, i); };
      for (std::size_t n = 1; n <= detail::last_start(d); ++n) {
        auto o = detail::search_products(d, n, sel, 1, detail::all_positive, depth_budget);
        if (o.verdict == Verdict::Holds) {
          depth2 = std::max(depth2, o.m);
          continue;
        }
        if (o.verdict == Verdict::Fails || cond2 == Verdict::Holds) {
          w2 = {{"level", n}, {"component", i}, {"vertices", detail::vertex_list(d, n, sel(n))}};
        }
        cond2 = worst(cond2, o.verdict);
        if (cond2 == Verdict::Fails) break;
      }
    }
    if (!d.stationary()) {
      if (D < 2) cond2 = Verdict::Unknown;
      rep.findings.push_back("finite presentation: verdicts are relative to levels 1.." + std::to_string(D));
    }
  }

  Verdict k_simple = cond1 == Verdict::Fails ? Verdict::Fails : cond2;
  json wk = cond1 == Verdict::Fails ? w1 : (cond2 == Verdict::Holds ? json{{"depth", depth2}} : w2);
  rep.add("k_simple", k_simple, wk);

  auto sel_o = [&d](std::size_t n) { return d.vertices(n, 0); };
  for (std::size_t n = 1; n <= D && d.k() >= 2; ++n)
    if (sel_o(n).empty()) {
      rep.findings.push_back("V_o is empty at level " + std::to_string(n) + ": the system is decomposable");
      break;
    }

  auto ideal_search = [&](const std::function<bool(const SatMatrix&)>& pred, unsigned cap,
                          std::size_t& depth_out, json& witness) {
    Verdict v = Verdict::Holds;
    for (std::size_t n = 1; n <= detail::last_start(d); ++n) {
      if (sel_o(n).empty()) continue;
      auto o = detail::search_products(d, n, sel_o, cap, pred, depth_budget);
      if (o.verdict == Verdict::Holds) {
        depth_out = std::max(depth_out, o.m);
        continue;
      }
      if (o.verdict == Verdict::Fails || v == Verdict::Holds)
        witness = {{"level", n}, {"vertices", detail::vertex_list(d, n, sel_o(n))}};
      v = worst(v, o.verdict);
      if (v == Verdict::Fails) break;
    }
    if (!d.stationary() && D < 2) v = Verdict::Unknown;
    return v;
  };

  std::size_t ds = 0, dn = 0;
  json ws, wn;
  Verdict strong = ideal_search(detail::rows_all_or_nothing, 1, ds, ws);
  rep.add("strongly_k_simple", worst(k_simple, strong),
          k_simple != Verdict::Holds ? wk : (strong == Verdict::Holds ? json{{"depth", ds}} : ws), false);
  Verdict nonel = ideal_search(detail::never_one, 2, dn, wn);
  rep.add("non_elementary", nonel, nonel == Verdict::Holds ? json{{"depth", dn}} : wn, false);
  return rep;
}

// ---------------------------------------------------------------------------
// Telescoping

namespace detail {

// Root-based or level-a-based paths into v at level b, lexicographic order
// (deepest edge most significant). Each path lists edge indices for levels a+1..b.
inline void paths_into(const Diagram& d, std::size_t a, std::size_t b, std::size_t v,
                       std::vector<std::size_t>& cur, std::vector<std::pair<std::size_t, std::vector<std::size_t>>>& out) {
  if (b == a) {
    out.push_back({v, std::vector<std::size_t>(cur.rbegin(), cur.rend())});
    return;
  }
  const Level& L = d.level(b);
  for (auto e : L.fiber[v]) {
    cur.push_back(e);
    paths_into(d, a, b - 1, L.edges[e].source, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Composite edges from level a to level b into vertex v, in order: (source, path).
inline std::vector<std::pair<std::size_t, std::vector<std::size_t>>> composite_fiber(const Diagram& d, std::size_t a,
                                                                                     std::size_t b, std::size_t v) {
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
  std::vector<std::size_t> cur;
  detail::paths_into(d, a, b, v, cur, out);
  return out;
}

inline Diagram telescope(const Diagram& d, const std::vector<std::size_t>& levels) {
  if (levels.size() < 2 || levels[0] != 0) throw std::invalid_argument("telescope: level list must start at 0 and retain a level");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw std::invalid_argument("telescope: non-monotone level list");
  for (auto n : levels)
    if (!d.has_level(n)) throw std::invalid_argument("telescope: level " + std::to_string(n) + " does not exist");
  std::vector<Level> out;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    std::size_t a = levels[i - 1], b = levels[i];
    const Level& src = d.level(b);
    Level L;
    L.ids = src.ids;
    L.comp = src.comp;
    for (std::size_t v = 0; v < src.size(); ++v)
      for (auto& [s, path] : composite_fiber(d, a, b, v)) L.edges.push_back({s, v});
    out.push_back(std::move(L));
  }
  bool stat = false;
  if (d.stationary() && levels.size() >= 3) {
    std::size_t a = levels[levels.size() - 2];
    stat = a >= d.tail_start();
  }
  return Diagram(d.k(), stat, std::move(out));
}

// Interleaves each pair of levels as in the two-row picture and keeps the
// intermediate rows. Minimal vertices pass through by identity; each V_o^{n+1}
// vertex fed by V_o^n is pulled up one row.
inline Diagram interpolate_strong(const Diagram& d) {
  Report r = validate_unordered(d);
  if (r.verdict("k_simple") == Verdict::Fails) throw std::invalid_argument("interpolate_strong: diagram is not k-simple");
  const std::size_t stop = d.stationary() ? d.depth() : d.depth() - 1;
  if (stop < 1) throw std::invalid_argument("interpolate_strong: needs at least two levels");
  std::vector<Level> inter;
  // interleaved levels: V^1, W^1, V^2, W^2, ..., V^stop, W^stop, V^{stop+1}
  inter.push_back(d.level(1));
  for (std::size_t n = 1; n <= stop; ++n) {
    const Level& cur = d.level(n);
    const Level& next = d.level(n + 1);
    Level W, V;
    std::vector<std::size_t> w_of_min(cur.size(), SIZE_MAX), w_of_next(next.size(), SIZE_MAX);
    for (std::size_t v = 0; v < cur.size(); ++v)
      if (cur.comp[v] != 0) {
        w_of_min[v] = W.ids.size();
        W.ids.push_back(cur.ids[v]);
        W.comp.push_back(cur.comp[v]);
        W.edges.push_back({v, w_of_min[v]});
      }
    for (std::size_t v = 0; v < next.size(); ++v) {
      if (next.comp[v] != 0) continue;
      bool fed = false;
      for (auto e : next.fiber[v]) fed = fed || cur.comp[next.edges[e].source] == 0;
      if (!fed) continue;
      w_of_next[v] = W.ids.size();
      W.ids.push_back(next.ids[v]);
      W.comp.push_back(0);
      for (auto e : next.fiber[v]) W.edges.push_back({next.edges[e].source, w_of_next[v]});
    }
    V.ids = next.ids;
    V.comp = next.comp;
    for (std::size_t v = 0; v < next.size(); ++v) {
      if (w_of_next[v] != SIZE_MAX) {
        V.edges.push_back({w_of_next[v], v});
        continue;
      }
      for (auto e : next.fiber[v]) {
        std::size_t s = next.edges[e].source;
        if (w_of_min[s] == SIZE_MAX) throw std::logic_error("interpolate_strong: unfed V_o vertex has a V_o source");
        V.edges.push_back({w_of_min[s], v});
      }
    }
    inter.push_back(std::move(W));
    inter.push_back(std::move(V));
  }
  Diagram full(d.k(), false, std::move(inter));
  std::vector<std::size_t> keep{0};
  for (std::size_t n = 1; n <= stop; ++n) keep.push_back(2 * n);
  Diagram t = telescope(full, keep);
  if (!d.stationary()) return t;
  return Diagram(d.k(), true, t.explicit_levels());
}

// ---------------------------------------------------------------------------
// Ideal subdiagram on V_o

struct IdealDiagram {
  std::vector<std::vector<std::size_t>> vertices;  // per level 1..depth, V_o indices
  std::vector<Matrix> g;                           // g[n-1] = G_n: V_o^{n+1} x V_o^n
  std::vector<std::vector<bool>> synthetic_root;   // per level, no incoming ideal edge
  bool stationary = false;

  std::size_t depth() const { return vertices.size(); }
  const std::vector<std::size_t>& at(std::size_t n) const { return vertices[stationary && n > depth() ? depth() - 1 : n - 1]; }
  const Matrix& G(std::size_t n) const {
    if (n >= 1 && n <= g.size()) return g[n - 1];
    if (stationary && !g.empty()) return g.back();
    throw std::out_of_range("ideal incidence G_" + std::to_string(n) + " unavailable");
  }
  bool has_G(std::size_t n) const { return n >= 1 && (n <= g.size() || (stationary && !g.empty())); }
};

inline IdealDiagram ideal_subdiagram(const Diagram& d) {
  IdealDiagram id;
  id.stationary = d.stationary();
  for (std::size_t n = 1; n <= d.depth(); ++n) {
    auto vs = d.vertices(n, 0);
    if (vs.empty()) throw std::invalid_argument("ideal trivial from level " + std::to_string(n) + ": V_o is empty");
    id.vertices.push_back(vs);
  }
  for (std::size_t n = 1; n < d.depth(); ++n) id.g.push_back(d.incidence(n).submatrix(id.vertices[n], id.vertices[n - 1]));
  for (std::size_t n = 1; n <= d.depth(); ++n) {
    std::vector<bool> syn(id.vertices[n - 1].size(), true);
    if (n >= 2) {
      const Matrix& G = id.g[n - 2];
      for (std::size_t r = 0; r < G.rows(); ++r)
        for (std::size_t c = 0; c < G.cols(); ++c)
          if (G(r, c) != 0) syn[r] = false;
    }
    id.synthetic_root.push_back(syn);
  }
  return id;
}

}  // namespace bdk
