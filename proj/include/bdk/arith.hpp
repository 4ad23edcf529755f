#pragma once

// Exact integer/rational matrices and the small amount of polynomial
// machinery needed to decide Perron components without floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Vec = std::vector<Int>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t l = 0; l < cols_; ++l) {
        const Int& x = (*this)(i, l);
        if (x == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += x * o(l, j);
      }
    return p;
  }

  Vec operator*(const Vec& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix m(rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
  }

  std::vector<std::vector<long long>> to_ll() const {
    std::vector<std::vector<long long>> out(rows_, std::vector<long long>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = static_cast<long long>((*this)(i, j));
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}
inline bool is_nonneg(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x >= 0; });
}
inline bool is_nonpos(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x <= 0; });
}
inline Int sup_norm(const Vec& v) {
  Int m = 0;
  for (const auto& x : v) m = std::max(m, Int(abs(x)));
  return m;
}
inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector difference: size mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}
inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sum: size mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Entries clamped to {0,1,...,cap}; products of such matrices stay
// meaningful for "is it zero / one / at least cap" questions.
using SatMatrix = std::vector<std::vector<unsigned char>>;

inline SatMatrix saturate(const Matrix& m, unsigned cap) {
  SatMatrix s(m.rows(), std::vector<unsigned char>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      s[i][j] = static_cast<unsigned char>(m(i, j) >= cap ? cap : static_cast<unsigned>(m(i, j)));
  return s;
}

inline SatMatrix sat_mul(const SatMatrix& a, const SatMatrix& b, unsigned cap) {
  std::size_t n = a.size(), inner = b.size(), m = b.empty() ? 0 : b[0].size();
  SatMatrix p(n, std::vector<unsigned char>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      unsigned acc = 0;
      for (std::size_t l = 0; l < inner && acc < cap; ++l) acc += unsigned(a[i][l]) * unsigned(b[l][j]);
      p[i][j] = static_cast<unsigned char>(std::min(acc, cap));
    }
  return p;
}

inline bool is_primitive(const Matrix& a) {
  std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) return false;
  SatMatrix b = saturate(a, 1), p = b;
  std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t t = 1; t < bound; ++t) p = sat_mul(p, b, 1);
  for (const auto& row : p)
    for (auto x : row)
      if (!x) return false;
  return true;
}

inline std::size_t rational_rank(std::vector<std::vector<Rat>> rows) {
  std::size_t rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rat f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t rank_of(const std::vector<Vec>& vs) {
  std::vector<std::vector<Rat>> rows;
  for (const auto& v : vs) rows.emplace_back(v.begin(), v.end());
  return rational_rank(std::move(rows));
}

// Polynomials over Q, coefficient i multiplies t^i.
using Poly = std::vector<Rat>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rat eval(const Poly& p, const Rat& t) {
  Rat acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long long>(i)));
  trim(d);
  return d;
}

inline Poly poly_rem(Poly a, const Poly& b) {
  trim(a);
  if (b.empty()) throw std::invalid_argument("polynomial division by zero");
  while (a.size() >= b.size()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

// Faddeev-LeVerrier; monic, degree n.
inline Poly char_poly(const Matrix& a) {
  std::size_t n = a.rows();
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n)), M(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = Rat(a(i, j));
  Poly c(n + 1);
  c[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Rat>> AM(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (A[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) AM[i][j] += A[i][l] * M[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
    M = AM;
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
    c[n - k] = -tr / Rat(static_cast<long long>(k));
  }
  return c;
}

// Monic q of least degree with q(A) x = 0.
inline Poly krylov_min_poly(const Matrix& a, const Vec& x) {
  std::size_t n = a.rows();
  std::vector<std::vector<Rat>> basis;  // reduced rows with pivot columns
  std::vector<std::size_t> pivots;
  std::vector<Poly> combos;  // basis[i] = sum combos[i][j] A^j x
  Vec cur = x;
  for (std::size_t d = 0; d <= n; ++d) {
    std::vector<Rat> r(cur.begin(), cur.end());
    Poly combo(d + 1);
    combo[d] = 1;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (r[pivots[b]] == 0) continue;
      Rat f = r[pivots[b]] / basis[b][pivots[b]];
      for (std::size_t j = 0; j < n; ++j) r[j] -= f * basis[b][j];
      for (std::size_t j = 0; j < combos[b].size(); ++j) combo[j] -= f * combos[b][j];
    }
    std::size_t p = 0;
    while (p < n && r[p] == 0) ++p;
    if (p == n) {
      trim(combo);
      return combo;
    }
    basis.push_back(r);
    pivots.push_back(p);
    combos.push_back(combo);
    cur = a * cur;
  }
  throw std::logic_error("krylov sequence did not close");
}

class Sturm {
 public:
  explicit Sturm(Poly p) {
    trim(p);
    seq_.push_back(p);
    Poly d = derivative(p);
    if (d.empty()) return;
    seq_.push_back(d);
    while (true) {
      Poly r = poly_rem(seq_[seq_.size() - 2], seq_.back());
      if (r.empty()) break;
      for (auto& c : r) c = -c;
      seq_.push_back(r);
    }
  }

  // Number of distinct real roots in (lo, hi]; lo must not be a root.
  std::size_t count(const Rat& lo, const Rat& hi) const {
    return changes(lo) - changes(hi);
  }

  std::size_t changes(const Rat& t) const {
    std::size_t ch = 0;
    int prev = 0;
    for (const auto& p : seq_) {
      Rat v = eval(p, t);
      int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++ch;
      prev = s;
    }
    return ch;
  }

 private:
  std::vector<Poly> seq_;
};

inline Rat root_bound(const Poly& p) {
  Rat m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Rat r = p[i] / p.back();
    if (r < 0) r = -r;
    m = std::max(m, r);
  }
  return m + 1;
}

// For a primitive matrix A, decides whether the Perron eigenvalue is a root
// of the A-annihilator of x, i.e. whether x has a nonzero Perron component.
inline bool has_perron_component(const Matrix& a, const Vec& x) {
  if (is_zero(x)) return false;
  Poly chi = char_poly(a);
  Poly q = krylov_min_poly(a, x);
  Sturm schi(chi), sq(q);
  Rat hi = root_bound(chi);
  Rat lo = -hi;
  // Shrink (lo, hi] until it isolates only the largest real root of chi.
  for (int guard = 0; guard < 4096; ++guard) {
    Rat mid = (lo + hi) / 2;
    while (eval(chi, mid) == 0) mid += (hi - mid) / 3;
    std::size_t c = schi.count(mid, hi);
    if (c == 1) {
      return sq.count(mid, hi) == 1;
    } else if (c == 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw std::runtime_error("Perron root isolation did not converge");
}

inline std::string to_string(const Int& x) { return x.str(); }

}  // namespace bdk
