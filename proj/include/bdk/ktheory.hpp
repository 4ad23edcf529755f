#pragma once

// Direct-limit ordered groups K_B (full) and K_{I_B} (ideal on V_o), exact.

#include "json_io.hpp"
#include "transgraph.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdk {

enum class GroupKind { Full, Ideal };

inline const char* to_string(GroupKind g) { return g == GroupKind::Full ? "full" : "ideal"; }

struct GroupElement {
  std::size_t level = 1;
  Vec vector;
  GroupKind group = GroupKind::Full;
  bool operator==(const GroupElement&) const = default;
};

class DirectLimitGroup {
 public:
  DirectLimitGroup(const Diagram& d, GroupKind kind) : d_(d), kind_(kind) {
    if (kind == GroupKind::Ideal) ideal_ = ideal_subdiagram(d);
  }

  GroupKind kind() const { return kind_; }
  const Diagram& diagram() const { return d_; }
  bool stationary() const { return d_.stationary(); }
  // Matrices from this level on are all equal.
  std::size_t tail_start() const { return d_.tail_start(); }

  bool has_level(std::size_t n) const { return n >= 1 && d_.has_level(n); }
  bool has_step(std::size_t n) const { return has_level(n) && d_.has_level(n + 1); }

  std::size_t rank(std::size_t n) const {
    return kind_ == GroupKind::Full ? d_.size(n) : ideal_->at(n).size();
  }

  // Diagram vertex indices labelling the coordinates at level n.
  std::vector<std::size_t> coordinates(std::size_t n) const {
    if (kind_ == GroupKind::Ideal) return ideal_->at(n);
    std::vector<std::size_t> all(d_.size(n));
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    return all;
  }

  Matrix step(std::size_t n) const {
    if (!has_step(n)) throw std::out_of_range("no connecting map out of level " + std::to_string(n));
    return kind_ == GroupKind::Full ? d_.incidence(n) : ideal_->G(n);
  }

  GroupElement zero(std::size_t n) const { return {n, Vec(rank(n)), kind_}; }

  GroupElement basis(std::size_t n, std::size_t vertex) const {
    auto cs = coordinates(n);
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i] == vertex) {
        GroupElement x = zero(n);
        x.vector[i] = 1;
        return x;
      }
    throw std::invalid_argument("vertex " + d_.name(n, vertex) + " is not a coordinate of this group at level " +
                                std::to_string(n));
  }

  void check(const GroupElement& x) const {
    if (x.group != kind_) throw std::invalid_argument("element belongs to the other group");
    if (!has_level(x.level)) throw std::invalid_argument("element level " + std::to_string(x.level) + " unavailable");
    if (x.vector.size() != rank(x.level))
      throw std::invalid_argument("element at level " + std::to_string(x.level) + " has " +
                                  std::to_string(x.vector.size()) + " entries, expected " +
                                  std::to_string(rank(x.level)));
  }

  GroupElement pushforward(const GroupElement& x, std::size_t m) const {
    check(x);
    if (m < x.level) throw std::invalid_argument("pushforward to a lower level");
    GroupElement y = x;
    for (std::size_t n = x.level; n < m; ++n) {
      y.vector = step(n) * y.vector;
      y.level = n + 1;
    }
    return y;
  }

  // Deepest level reachable from n without running past a finite presentation.
  std::size_t reach(std::size_t n, std::size_t budget) const {
    std::size_t m = n;
    while (m < n + budget && has_step(m)) ++m;
    return m;
  }

 private:
  Diagram d_;
  GroupKind kind_;
  std::optional<IdealDiagram> ideal_;
};

inline GroupElement add(const GroupElement& a, const GroupElement& b) {
  if (a.level != b.level || a.group != b.group) throw std::invalid_argument("add: elements at different levels");
  return {a.level, a.vector + b.vector, a.group};
}

inline GroupElement scale(const Int& c, GroupElement a) {
  for (auto& x : a.vector) x *= c;
  return a;
}

inline json to_json(const GroupElement& x) {
  return {{"level", x.level}, {"vector", to_json(x.vector)}, {"group", to_string(x.group)}};
}

inline GroupElement group_element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("level") || !j.contains("vector"))
    throw ParseError("group element: expected {\"level\", \"vector\"}");
  if (!j["level"].is_number_integer() || j["level"].get<long long>() < 1)
    throw ParseError("group element: level must be a positive integer");
  GroupElement x;
  x.level = j["level"].get<std::size_t>();
  if (!j["vector"].is_array()) throw ParseError("group element: vector must be an array");
  for (const auto& v : j["vector"]) {
    if (v.is_number_integer()) x.vector.push_back(Int(v.get<long long>()));
    else if (v.is_string()) x.vector.push_back(Int(v.get<std::string>()));
    else throw ParseError("group element: vector entries must be integers");
  }
  std::string g = j.value("group", std::string("full"));
  if (g == "full") x.group = GroupKind::Full;
  else if (g == "ideal") x.group = GroupKind::Ideal;
  else throw ParseError("group element: group must be \"full\" or \"ideal\"");
  return x;
}

// ---------------------------------------------------------------------------
// Equality and positivity

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::size_t level = 0;  // where the decision was reached
  std::string reason;
};

namespace detail {

// Tail matrix split into independent pieces: each either primitive or a
// zero 1x1 block. Empty when the tail has cross-block edges or an
// imprimitive piece.
struct TailBlocks {
  Matrix a;
  std::vector<std::vector<std::size_t>> blocks;
  bool decomposed = false;
};

inline TailBlocks tail_blocks(const Matrix& a) {
  TailBlocks t;
  t.a = a;
  std::size_t n = a.rows();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  for (auto& g : groups) {
    if (g.empty()) continue;
    Matrix b = a.submatrix(g, g);
    bool zero1 = g.size() == 1 && b(0, 0) == 0;
    if (!zero1 && !is_primitive(b)) return t;
    t.blocks.push_back(g);
  }
  t.decomposed = true;
  return t;
}

inline Vec restrict(const Vec& x, const std::vector<std::size_t>& idx) {
  Vec out;
  for (auto i : idx) out.push_back(x[i]);
  return out;
}

// Sign of the eventual pushforwards of x under primitive b: +1 eventually
// strictly positive, -1 eventually strictly negative, 0 eventually zero,
// 2 never nonnegative (no Perron component, not eventually zero).
inline int eventual_sign(const Matrix& b, Vec x) {
  if (is_zero(x)) return 0;
  if (b.rows() == 1 && b(0, 0) == 0) return 0;
  if (!has_perron_component(b, x)) {
    // x lives in the non-Perron invariant part; its pushforwards are never
    // nonzero and nonnegative (those carry a positive Perron component).
    for (std::size_t i = 0; i <= b.rows(); ++i) x = b * x;
    return is_zero(x) ? 0 : 2;
  }
  for (int guard = 0; guard < 100000; ++guard) {
    bool pos = true, neg = true;
    for (const auto& v : x) {
      pos = pos && v > 0;
      neg = neg && v < 0;
    }
    if (pos) return 1;
    if (neg) return -1;
    x = b * x;
  }
  throw std::runtime_error("Perron sign did not settle");
}

using RatMatrix = std::vector<std::vector<Rat>>;

// Solves m x = b for several right-hand sides (columns of b); nullopt when m is singular.
inline std::optional<RatMatrix> solve(RatMatrix m, RatMatrix b) {
  std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
      for (std::size_t j = 0; j < b[r].size(); ++j) b[r][j] -= f * b[c][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (auto& x : b[i]) x /= m[i][i];
  return b;
}

// Nonzero integer roots of the characteristic polynomial with multiplicities,
// or nullopt unless every root is rational.
inline std::optional<std::vector<std::pair<Int, std::size_t>>> integer_spectrum(const Matrix& a) {
  Poly chi = char_poly(a);
  std::size_t zeros = 0;
  while (zeros + 1 < chi.size() && chi[zeros] == 0) ++zeros;
  Poly q(chi.begin() + zeros, chi.end());
  Int R = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Int row = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j);
    R = std::max(R, row);
  }
  std::vector<std::pair<Int, std::size_t>> out;
  std::size_t found = zeros;
  for (Int l = -R; l <= R; ++l) {
    if (l == 0) continue;
    std::size_t mult = 0;
    while (q.size() > 1 && eval(q, Rat(l)) == 0) {
      // synthetic division by (t - l)
      Poly d(q.size() - 1);
      Rat carry = 0;
      for (std::size_t i = q.size() - 1; i >= 1; --i) {
        carry = q[i] + carry * Rat(l);
        d[i - 1] = carry;
      }
      q = d;
      ++mult;
    }
    if (mult) out.emplace_back(l, mult), found += mult;
  }
  if (found != a.rows()) return std::nullopt;
  return out;
}

// Eventual sign of A^t y when the spectrum of A is rational: each coordinate
// is sum_l p_l(t) l^t past the nilpotent part. Splitting t by parity leaves
// positive bases l^2, and the leading nonzero coefficient decides. Returns
// true (eventually nonnegative), false (negative infinitely often) or nullopt.
inline std::optional<bool> rational_spectrum_sign(const Matrix& a, const Vec& y) {
  auto spec = integer_spectrum(a);
  if (!spec) return std::nullopt;
  const std::size_t n = a.rows();
  std::vector<std::pair<Int, std::size_t>> basis;  // (l, j): s^j l^s
  for (const auto& [l, m] : *spec)
    for (std::size_t j = 0; j < m; ++j) basis.emplace_back(l, j);
  const std::size_t K = basis.size();
  Vec x = y;
  for (std::size_t i = 0; i < n; ++i) x = a * x;  // clear the nilpotent part
  if (K == 0) return is_zero(x) ? std::optional<bool>(true) : std::nullopt;
  RatMatrix M(K, std::vector<Rat>(K)), rhs(K, std::vector<Rat>(n));
  for (std::size_t s = 0; s < K; ++s) {
    for (std::size_t c = 0; c < K; ++c) {
      Rat v = 1;
      for (std::size_t e = 0; e < basis[c].second; ++e) v *= Rat(static_cast<long long>(s));
      for (std::size_t e = 0; e < s; ++e) v *= Rat(basis[c].first);
      M[s][c] = v;
    }
    for (std::size_t w = 0; w < n; ++w) rhs[s][w] = Rat(x[w]);
    x = a * x;
  }
  auto coef = solve(M, rhs);
  if (!coef) throw std::logic_error("rational_spectrum_sign: singular interpolation");
  for (std::size_t w = 0; w < n; ++w)
    for (long long par = 0; par < 2; ++par) {
      // f(2q + par) = sum over bases mu = l^2 of polynomials in q
      std::map<Int, Poly, std::greater<Int>> by_base;
      for (std::size_t c = 0; c < K; ++c) {
        const auto& [l, j] = basis[c];
        Rat scale = (*coef)[c][w] * (par ? Rat(l) : Rat(1));
        if (scale == 0) continue;
        // (2q + par)^j expanded in q
        Poly p{Rat(1)};
        for (std::size_t e = 0; e < j; ++e) {
          Poly np(p.size() + 1);
          for (std::size_t i = 0; i < p.size(); ++i) {
            np[i] += p[i] * Rat(par);
            np[i + 1] += p[i] * Rat(2);
          }
          p = np;
        }
        Poly& acc = by_base[l * l];
        if (acc.size() < p.size()) acc.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) acc[i] += p[i] * scale;
      }
      for (auto& [mu, p] : by_base) {
        trim(p);
        if (p.empty() || (p.size() == 1 && p[0] == 0)) continue;
        if (p.back() < 0) return false;
        break;
      }
    }
  return true;
}

}  // namespace detail

inline Decision eq(const DirectLimitGroup& g, const GroupElement& x, const GroupElement& y, std::size_t budget = 10) {
  g.check(x);
  g.check(y);
  std::size_t m = std::max(x.level, y.level);
  Vec diff = g.pushforward(x, m).vector - g.pushforward(y, m).vector;
  std::size_t stop = g.reach(m, budget);
  std::size_t exact_at = 0;
  if (g.stationary()) {
    // kernels of A^r stabilise by r = dim, so this push is decisive
    std::size_t t = std::max(m, g.tail_start());
    exact_at = t + g.rank(t);
    stop = std::max(stop, exact_at);
  }
  for (std::size_t n = m;; ++n) {
    if (is_zero(diff)) return {Verdict::Holds, n, "pushforwards agree"};
    if (n == stop || !g.has_step(n)) break;
    diff = g.step(n) * diff;
  }
  if (exact_at) return {Verdict::Fails, stop, "difference survives the stable kernel of the tail"};
  return {Verdict::Unknown, stop, "pushforwards differ up to the available levels"};
}

inline Decision is_positive(const DirectLimitGroup& g, const GroupElement& x, std::size_t budget = 10) {
  g.check(x);
  GroupElement y = x;
  std::size_t stop = g.reach(x.level, budget);
  while (true) {
    if (is_nonneg(y.vector)) return {Verdict::Holds, y.level, is_zero(y.vector) ? "zero class" : "nonnegative"};
    if (y.level == stop) break;
    y = g.pushforward(y, y.level + 1);
  }
  if (!g.stationary()) return {Verdict::Unknown, stop, "no nonnegative pushforward within the budget"};
  std::size_t t = std::max(y.level, g.tail_start());
  y = g.pushforward(y, t);
  if (is_nonneg(y.vector)) return {Verdict::Holds, t, "nonnegative"};
  auto tb = detail::tail_blocks(g.step(t));
  if (!tb.decomposed) {
    auto sign = detail::rational_spectrum_sign(g.step(t), y.vector);
    if (!sign) return {Verdict::Unknown, t, "tail is neither a sum of primitive blocks nor rationally split"};
    if (!*sign) return {Verdict::Fails, t, "some coordinate is negative infinitely often"};
  }
  for (const auto& b : tb.blocks) {
    int s = detail::eventual_sign(tb.a.submatrix(b, b), detail::restrict(y.vector, b));
    if (s == -1 || s == 2) return {Verdict::Fails, t, "a primitive tail block has a negative eventual sign"};
  }
  // every block is eventually nonnegative; a common level exists
  for (std::size_t guard = 0; guard < 100000; ++guard) {
    if (is_nonneg(y.vector)) return {Verdict::Holds, y.level, "nonnegative"};
    y = g.pushforward(y, y.level + 1);
  }
  throw std::runtime_error("is_positive: blocks did not settle");
}

inline GroupElement order_unit(const DirectLimitGroup& g, std::size_t n) {
  if (g.kind() != GroupKind::Full) throw std::invalid_argument("order_unit: the ideal group has no canonical unit");
  return {n, g.diagram().path_counts(n), GroupKind::Full};
}

// ---------------------------------------------------------------------------
// Index elements

struct IndexSet {
  std::size_t level = 0;
  std::vector<std::size_t> vertices;  // V_o^n, the ideal coordinates
  std::vector<GroupElement> d;        // d[i-1] = d_i
};

inline IndexSet index_elements(const Diagram& d, std::size_t n) {
  TransitionGraph tg = transition_graph(d, n);
  IndexSet s;
  s.level = n;
  s.vertices = d.vertices(n, 0);
  for (int i = 1; i <= d.k(); ++i) s.d.push_back({n, Vec(s.vertices.size()), GroupKind::Ideal});
  for (std::size_t c = 0; c < s.vertices.size(); ++c) {
    const TGEdge* e = tg.edge_for(s.vertices[c]);
    if (e->loop()) continue;
    s.d[e->source - 1].vector[c] += 1;
    s.d[e->target - 1].vector[c] -= 1;
  }
  return s;
}

inline json to_json(const Diagram& d, const IndexSet& s) {
  json out = {{"level", s.level}, {"vertices", json::array()}, {"d", json::array()}};
  for (auto v : s.vertices) out["vertices"].push_back(d.name(s.level, v));
  for (const auto& x : s.d) out["d"].push_back(to_json(x.vector));
  return out;
}

// Levels where index sets exist and, for stationary diagrams, repeat.
inline std::vector<std::size_t> index_levels(const Diagram& d) {
  std::vector<std::size_t> out;
  auto L = marker_level(d);
  if (!L) return out;
  std::size_t top = d.stationary() ? marker_horizon(d) : d.depth();
  for (std::size_t n = *L; n <= top; ++n) out.push_back(n);
  return out;
}

inline Report check_index_relations(const Diagram& d, std::size_t budget = 10) {
  Report rep;
  auto levels = index_levels(d);
  if (levels.empty()) {
    rep.add("markers", Verdict::Unknown, {{"reason", "markers never resolve on the available levels"}});
    return rep;
  }
  const int k = d.k();
  if (k > 16) throw std::invalid_argument("check_index_relations: subset enumeration limited to k <= 16");
  DirectLimitGroup g(d, GroupKind::Ideal);
  Verdict entries = Verdict::Holds, sum = Verdict::Holds, subsets = Verdict::Holds, limit = Verdict::Holds,
          coherent = Verdict::Holds, rank = Verdict::Holds;
  json we = json::object(), ws = json::object(), wsub = {{"levels", levels.size()}}, wlim = json::object(),
       wc = json::object(), wr = json::object();
  std::optional<IndexSet> prev;
  for (auto n : levels) {
    IndexSet s = index_elements(d, n);
    TransitionGraph tg = transition_graph(d, n);
    for (std::size_t c = 0; c < s.vertices.size() && entries == Verdict::Holds; ++c) {
      int plus = 0, minus = 0;
      for (int i = 0; i < k; ++i) {
        const Int& x = s.d[i].vector[c];
        if (x == 1) ++plus;
        else if (x == -1) ++minus;
        else if (x != 0) plus = minus = 99;
      }
      if (!((plus == 0 && minus == 0) || (plus == 1 && minus == 1))) {
        entries = Verdict::Fails;
        we = {{"level", n}, {"vertex", d.name(n, s.vertices[c])}};
      }
    }
    GroupElement total = g.zero(n);
    for (const auto& x : s.d) total = add(total, x);
    if (!is_zero(total.vector) && sum == Verdict::Holds) {
      sum = Verdict::Fails;
      ws = {{"level", n}, {"sum", to_json(total.vector)}};
    }
    if (k >= 2) {
      for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
        GroupElement ds = g.zero(n);
        for (int i = 0; i < k; ++i)
          if (mask >> i & 1) ds = add(ds, s.d[i]);
        json members = json::array();
        for (int i = 0; i < k; ++i)
          if (mask >> i & 1) members.push_back(i + 1);
        if (is_zero(ds.vector)) {
          if (subsets != Verdict::Fails) {
            subsets = Verdict::Fails;
            wsub = {{"level", n}, {"subset", members}, {"reason", "no edge of L_n crosses the cut"}};
          }
          continue;
        }
        if (n == levels.back()) {
          Decision z = eq(g, ds, g.zero(n), budget);
          Verdict v = z.verdict == Verdict::Fails ? Verdict::Holds
                      : z.verdict == Verdict::Holds ? Verdict::Fails
                                                    : Verdict::Unknown;
          if (v != Verdict::Holds && limit != Verdict::Fails) {
            limit = v;
            wlim = {{"level", n}, {"subset", members}, {"reason", z.reason}};
          }
        }
      }
    }
    if (prev) {
      for (int i = 0; i < k && coherent == Verdict::Holds; ++i) {
        Decision c = eq(g, prev->d[i], s.d[i], budget);
        if (c.verdict != Verdict::Holds) {
          coherent = c.verdict;
          wc = {{"levels", json::array({prev->level, n})}, {"index", i + 1}, {"reason", c.reason}};
        }
      }
    }
    std::vector<Vec> vs;
    for (const auto& x : s.d) vs.push_back(x.vector);
    std::size_t r = rank_of(vs);
    if (r != static_cast<std::size_t>(k - 1) && rank == Verdict::Holds) {
      rank = Verdict::Fails;
      wr = {{"level", n}, {"rank", r}, {"expected", k - 1}};
    }
    if (rank == Verdict::Holds) wr = {{"rank", r}};
    prev = s;
  }
  rep.add("entries", entries, we);
  rep.add("sum_zero", sum, ws);
  rep.add("proper_subsets_nonzero", subsets, wsub);
  rep.add("proper_subsets_nonzero_in_limit", limit, wlim, false);
  rep.add("coherent", coherent, wc);
  rep.add("rational_rank", rank, wr);
  return rep;
}

// ---------------------------------------------------------------------------
// Bounded-norm subgroup D(K_{I_B})

inline Decision bounded_norm_membership(const DirectLimitGroup& g, const GroupElement& x, const Int& m,
                                        std::size_t budget = 10) {
  g.check(x);
  if (g.stationary()) {
    std::size_t t = std::max(x.level, g.tail_start());
    GroupElement y = g.pushforward(x, t);
    auto tb = detail::tail_blocks(g.step(t));
    if (tb.decomposed) {
      for (const auto& b : tb.blocks) {
        Matrix a = tb.a.submatrix(b, b);
        bool grows = !(a.rows() == 1 && a(0, 0) <= 1);
        // Every representative carries the same Perron component, which grows like lambda^n.
        if (grows && has_perron_component(a, detail::restrict(y.vector, b)))
          return {Verdict::Fails, t, "nonzero Perron component in a growing tail block"};
      }
    }
  }
  GroupElement y = x;
  std::size_t stop = g.reach(x.level, budget);
  while (true) {
    if (sup_norm(y.vector) > m)
      return {Verdict::Unknown, y.level, "pushforward leaves the box; no smaller representative found"};
    if (y.level == stop) break;
    y = g.pushforward(y, y.level + 1);
  }
  return {Verdict::Holds, stop, "pushforwards stay in the box up to the budget"};
}

// A family of per-level representatives of one class certifies the bound directly.
inline Decision bounded_norm_family(const DirectLimitGroup& g, const std::vector<GroupElement>& family, const Int& m,
                                    std::size_t budget = 10) {
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (sup_norm(family[j].vector) > m) return {Verdict::Unknown, family[j].level, "representative exceeds the bound"};
    if (j > 0) {
      Decision e = eq(g, family[j - 1], family[j], budget);
      if (e.verdict != Verdict::Holds) return {e.verdict, family[j].level, "representatives are not one class"};
    }
  }
  return {Verdict::Holds, family.empty() ? 0 : family.back().level, "a bounded representative at every level"};
}

struct RankBound {
  std::size_t level = 0;
  std::size_t ideal_rank = 0;  // |V_o^n|
  std::size_t index_rank = 0;
  std::optional<GroupElement> witness;  // positive class outside span{d_i}
  Report report;
};

inline RankBound rational_rank_lower_bound(const Diagram& d, std::size_t n) {
  RankBound rb;
  rb.level = n;
  IndexSet s = index_elements(d, n);
  rb.ideal_rank = s.vertices.size();
  std::vector<Vec> vs;
  for (const auto& x : s.d) vs.push_back(x.vector);
  rb.index_rank = rank_of(vs);
  DirectLimitGroup g(d, GroupKind::Ideal);
  for (auto v : s.vertices) {
    auto with = vs;
    GroupElement e = g.basis(n, v);
    with.push_back(e.vector);
    if (rank_of(with) == rb.index_rank + 1) {
      rb.witness = e;
      break;
    }
  }
  std::size_t k = static_cast<std::size_t>(d.k());
  rb.report.add("vertex_count", rb.ideal_rank >= k ? Verdict::Holds : Verdict::Fails,
                {{"level", n}, {"vertices", rb.ideal_rank}, {"k", k}});
  rb.report.add("index_rank", rb.index_rank + 1 == k ? Verdict::Holds : Verdict::Fails, {{"rank", rb.index_rank}});
  json w = rb.witness ? json{{"vertex", d.name(n, s.vertices[0])}} : json::object();
  if (rb.witness)
    for (std::size_t c = 0; c < s.vertices.size(); ++c)
      if (rb.witness->vector[c] == 1) w = {{"vertex", d.name(n, s.vertices[c])}};
  rb.report.add("positive_outside_span", rb.witness ? Verdict::Holds : Verdict::Fails, w);
  return rb;
}

}  // namespace bdk
