#pragma once

// Small dense exact linear algebra over Int / Rat: the matrix type, integer
// kernels and saturation (unimodular column reduction), fraction-free
// determinants, rational elimination, and signatures by congruence
// diagonalization. Everything here is exact; no floating point.

#include "conekit/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace conekit {

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("Mat: ragged initializer");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<T> row(std::size_t i) const {
    std::vector<T> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

// ---------------------------------------------------------------------------
// vector helpers

inline IntVec neg(IntVec v) {
  for (auto& x : v) x = -x;
  return v;
}

inline RatVec neg(RatVec v) {
  for (auto& x : v) x = -x;
  return v;
}

inline bool is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline IntVec primitive_part(const IntVec& v) {
  Int g = content(v);
  if (g == 0) throw std::invalid_argument("primitive_part: zero vector");
  IntVec w = v;
  if (g > 1)
    for (auto& x : w) x /= g;
  return w;
}

inline RatVec to_rat(const IntVec& v) {
  RatVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i]);
  return w;
}

/// Clear denominators and divide by the content; the primitive integer vector
/// spanning the same ray (keeps orientation).
inline IntVec rat_to_primitive(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) l = l / gcd(l, den(x)) * den(x);
  IntVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = num(v[i]) * (l / den(v[i]));
  return primitive_part(w);
}

// ---------------------------------------------------------------------------
// products

template <typename T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

template <typename T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mul: dimension mismatch");
  Mat<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> mul(const Mat<T>& a, const std::vector<T>& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("mul: dimension mismatch");
  std::vector<T> r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

inline RatVec mul(const IntMat& a, const RatVec& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("mul: dimension mismatch");
  RatVec r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += Rat(a(i, j)) * v[j];
  return r;
}

inline RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

/// B^T G B: the Gram matrix induced on the column span of B.
inline IntMat induced_gram(const IntMat& gram, const IntMat& basis) {
  return mul(transpose(basis), mul(gram, basis));
}

// ---------------------------------------------------------------------------
// determinants and inverses

/// Fraction-free Bareiss determinant.
inline Int det(const IntMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline std::optional<RatMat> inverse(const RatMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  std::size_t n = m.rows();
  RatMat a = m, inv = RatMat::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(k, j), a(p, j));
      std::swap(inv(k, j), inv(p, j));
    }
    Rat piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rat f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// Any particular solution of A y = b over the rationals (free variables set
/// to zero), or nullopt if inconsistent.
inline std::optional<RatVec> solve(const RatMat& A, const RatVec& b) {
  if (A.rows() != b.size()) throw std::invalid_argument("solve: dimension mismatch");
  std::size_t m = A.rows(), n = A.cols();
  RatMat w(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i, j) = A(i, j);
    w(i, n) = b[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && w(p, c) == 0) ++p;
    if (p == m) continue;
    for (std::size_t j = 0; j <= n; ++j) std::swap(w(r, j), w(p, j));
    Rat piv = w(r, c);
    for (std::size_t j = 0; j <= n; ++j) w(r, j) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || w(i, c) == 0) continue;
      Rat f = w(i, c);
      for (std::size_t j = 0; j <= n; ++j) w(i, j) -= f * w(r, j);
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (w(i, n) != 0) return std::nullopt;
  RatVec y(n);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) y[pivot_col[i]] = w(i, n);
  return y;
}

inline std::size_t rank(const RatMat& A) {
  RatMat w = A;
  std::size_t m = w.rows(), n = w.cols(), r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && w(p, c) == 0) ++p;
    if (p == m) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(w(r, j), w(p, j));
    for (std::size_t i = r + 1; i < m; ++i) {
      if (w(i, c) == 0) continue;
      Rat f = w(i, c) / w(r, c);
      for (std::size_t j = 0; j < n; ++j) w(i, j) -= f * w(r, j);
    }
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// integer kernels and saturation

struct ExtGcd {
  Int g, x, y;  // g = x*a + y*b
};

inline ExtGcd ext_gcd(Int a, Int b) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  return {a, x0, y0};
}

/// Basis of the integer kernel {x in Z^cols : M x = 0}, returned as the
/// columns of an integer matrix. The kernel of a map to a torsion-free group
/// is saturated, and the basis comes from a unimodular column reduction, so
/// the columns generate the full kernel lattice.
inline IntMat int_kernel(const IntMat& M) {
  std::size_t m = M.rows(), n = M.cols();
  IntMat w = M, u = IntMat::identity(n);
  std::size_t lead = 0;
  for (std::size_t r = 0; r < m && lead < n; ++r) {
    std::size_t j = lead;
    while (j < n && w(r, j) == 0) ++j;
    if (j == n) continue;
    w.swap_cols(lead, j);
    u.swap_cols(lead, j);
    for (j = lead + 1; j < n; ++j) {
      if (w(r, j) == 0) continue;
      ExtGcd e = ext_gcd(w(r, lead), w(r, j));
      Int a = w(r, lead) / e.g, b = w(r, j) / e.g;
      // unimodular: [x -b; y a] has determinant x*a + y*b = 1
      for (std::size_t i = 0; i < m; ++i) {
        Int cl = w(i, lead), cj = w(i, j);
        w(i, lead) = e.x * cl + e.y * cj;
        w(i, j) = -b * cl + a * cj;
      }
      for (std::size_t i = 0; i < n; ++i) {
        Int cl = u(i, lead), cj = u(i, j);
        u(i, lead) = e.x * cl + e.y * cj;
        u(i, j) = -b * cl + a * cj;
      }
    }
    ++lead;
  }
  IntMat ker(n, n - lead);
  for (std::size_t j = lead; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) ker(i, j - lead) = u(i, j);
  return ker;
}

/// Saturation of the column span of A inside Z^rows: basis of
/// (span_Q A) ∩ Z^rows as matrix columns. Double integer kernel through the
/// standard inner product.
inline IntMat saturate_columns(const IntMat& A) {
  IntMat left_null = int_kernel(transpose(A));  // rows x k
  return int_kernel(transpose(left_null));
}

/// Solve B x = v over Z (B integer columns, full column rank); nullopt if v
/// is not in the integer column span.
inline std::optional<IntVec> solve_integral(const IntMat& B, const IntVec& v) {
  auto sol = solve(to_rat(B), to_rat(v));
  if (!sol) return std::nullopt;
  IntVec x(sol->size());
  for (std::size_t i = 0; i < sol->size(); ++i) {
    if (den((*sol)[i]) != 1) return std::nullopt;
    x[i] = num((*sol)[i]);
  }
  // guard against rank-deficient B: verify
  IntVec chk = mul(B, x);
  if (chk != v) return std::nullopt;
  return x;
}

// ---------------------------------------------------------------------------
// signatures

struct Signature {
  int n_pos = 0, n_neg = 0, n_zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Inertia of a symmetric rational matrix by Lagrange congruence
/// diagonalization; exact, no eigenvalues.
inline Signature signature_of(const RatMat& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("signature_of: not square");
  std::size_t n = G.rows();
  RatMat s = G;
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (s(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && s(j, j) == 0) ++j;
      if (j < n) {
        // congruence swap of basis vectors k, j
        for (std::size_t t = 0; t < n; ++t) std::swap(s(k, t), s(j, t));
        for (std::size_t t = 0; t < n; ++t) std::swap(s(t, k), s(t, j));
      } else {
        j = k + 1;
        while (j < n && s(k, j) == 0) ++j;
        if (j == n) {
          ++sig.n_zero;  // basis vector lies in the radical of the remaining block
          continue;
        }
        // e_k += e_j creates a nonzero diagonal entry (2 s_kj)
        for (std::size_t t = 0; t < n; ++t) s(k, t) += s(j, t);
        for (std::size_t t = 0; t < n; ++t) s(t, k) += s(t, j);
      }
    }
    Rat piv = s(k, k);
    if (piv > 0)
      ++sig.n_pos;
    else
      ++sig.n_neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (s(i, k) == 0) continue;
      Rat f = s(i, k) / piv;
      for (std::size_t t = 0; t < n; ++t) s(i, t) -= f * s(k, t);
      for (std::size_t t = 0; t < n; ++t) s(t, i) -= f * s(t, k);
    }
  }
  return sig;
}

inline Signature signature_of(const IntMat& G) { return signature_of(to_rat(G)); }

struct CongruenceDiagonal {
  RatMat p;     // basis change: p^T G p = diag(d)
  RatVec d;
};

/// Rational congruence diagonalization with the transform tracked.
inline CongruenceDiagonal congruence_diagonalize(const RatMat& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("congruence_diagonalize: not square");
  std::size_t n = G.rows();
  RatMat s = G, p = RatMat::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (s(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && s(j, j) == 0) ++j;
      if (j < n) {
        for (std::size_t t = 0; t < n; ++t) std::swap(s(k, t), s(j, t));
        for (std::size_t t = 0; t < n; ++t) std::swap(s(t, k), s(t, j));
        p.swap_cols(k, j);
      } else {
        j = k + 1;
        while (j < n && s(k, j) == 0) ++j;
        if (j == n) continue;  // radical direction, stays zero
        for (std::size_t t = 0; t < n; ++t) s(k, t) += s(j, t);
        for (std::size_t t = 0; t < n; ++t) s(t, k) += s(t, j);
        for (std::size_t t = 0; t < n; ++t) p(t, k) += p(t, j);
      }
    }
    if (s(k, k) == 0) continue;
    Rat piv = s(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (s(i, k) == 0) continue;
      Rat f = s(i, k) / piv;
      for (std::size_t t = 0; t < n; ++t) s(i, t) -= f * s(k, t);
      for (std::size_t t = 0; t < n; ++t) s(t, i) -= f * s(t, k);
      for (std::size_t t = 0; t < n; ++t) p(t, i) -= f * p(t, k);
    }
  }
  CongruenceDiagonal out{p, RatVec(n)};
  for (std::size_t i = 0; i < n; ++i) out.d[i] = s(i, i);
  return out;
}

}  // namespace conekit
