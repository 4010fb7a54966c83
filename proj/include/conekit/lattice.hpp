#pragma once

// Integral quadratic lattices and their exact arithmetic: form evaluation,
// signatures, primitivity, divisibility, reflections, isometries, orthogonal
// complements and positive-cone component tests. All decisions here are made
// in exact integer/rational arithmetic.

#include "conekit/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace conekit {

/// Domain-rule violation (wrong signature, isotropic input, on-wall point...).
/// CLI maps these to exit code 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A lattice with an integral symmetric bilinear form. Immutable after
/// construction; the signature is computed once, exactly, and cached.
/// Degenerate forms are accepted here (the period module needs them) and
/// rejected by the operations that require nondegeneracy.
class QuadLattice {
 public:
  QuadLattice(IntMat gram, std::string label = "")
      : gram_(std::move(gram)), label_(std::move(label)) {
    if (gram_.rows() != gram_.cols()) throw std::invalid_argument("QuadLattice: gram not square");
    if (gram_.rows() == 0) throw std::invalid_argument("QuadLattice: empty gram");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = i + 1; j < gram_.cols(); ++j)
        if (gram_(i, j) != gram_(j, i)) throw std::invalid_argument("QuadLattice: gram not symmetric");
    sig_ = signature_of(gram_);
  }

  std::size_t rank() const { return gram_.rows(); }
  const IntMat& gram() const { return gram_; }
  const std::string& label() const { return label_; }
  const Signature& signature() const { return sig_; }

  bool nondegenerate() const { return sig_.n_zero == 0; }
  /// signature (1, rank-1): the chamber/hyperbolic regime.
  bool is_hyperbolic() const { return sig_.n_pos == 1 && sig_.n_zero == 0; }

  Int form(const IntVec& x, const IntVec& y) const {
    check_dim(x);
    check_dim(y);
    Int s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * gram_(i, j) * y[j];
    }
    return s;
  }

  Rat form(const RatVec& x, const RatVec& y) const {
    check_dim(x);
    check_dim(y);
    Rat s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * Rat(gram_(i, j)) * y[j];
    }
    return s;
  }

  Int square(const IntVec& x) const { return form(x, x); }
  Rat square(const RatVec& x) const { return form(x, x); }

  /// G z: the vector of pairings of z with the standard basis.
  IntVec pairings(const IntVec& z) const {
    check_dim(z);
    return mul(gram_, z);
  }

  void check_dim(const IntVec& v) const {
    if (v.size() != rank()) throw std::invalid_argument("vector length does not match lattice rank");
  }
  void check_dim(const RatVec& v) const {
    if (v.size() != rank()) throw std::invalid_argument("vector length does not match lattice rank");
  }

  void require_nondegenerate() const {
    if (!nondegenerate()) throw DomainError("lattice form is degenerate");
  }
  void require_hyperbolic() const {
    if (!is_hyperbolic()) throw DomainError("lattice signature is not (1, rank-1)");
  }

 private:
  IntMat gram_;
  std::string label_;
  Signature sig_;
};

inline Int eval_form(const QuadLattice& L, const IntVec& x, const IntVec& y) { return L.form(x, y); }
inline Rat eval_form(const QuadLattice& L, const RatVec& x, const RatVec& y) { return L.form(x, y); }

inline bool is_primitive(const IntVec& x) {
  Int g = content(x);
  if (g == 0) throw std::invalid_argument("is_primitive: zero vector");
  return g == 1;
}

/// gcd of the pairings of z with the lattice; an isometry-invariant of the
/// orbit of z.
inline Int divisibility(const QuadLattice& L, const IntVec& z) {
  if (is_zero(z)) throw std::invalid_argument("divisibility: zero vector");
  Int g = 0;
  for (const Int& p : L.pairings(z)) g = gcd(g, p);
  return g;
}

/// An integer matrix preserving the form exactly. Constructed through
/// `make_isometry` / `Isometry::checked`, which verify M^T G M = G.
class Isometry {
 public:
  static Isometry checked(const QuadLattice& L, IntMat m) {
    if (m.rows() != L.rank() || m.cols() != L.rank())
      throw std::invalid_argument("Isometry: wrong matrix size");
    if (mul(transpose(m), mul(L.gram(), m)) != L.gram())
      throw DomainError("Isometry: matrix does not preserve the form");
    return Isometry(std::move(m));
  }

  const IntMat& matrix() const { return m_; }
  IntVec apply(const IntVec& v) const { return mul(m_, v); }
  RatVec apply(const RatVec& v) const { return mul(m_, v); }

  /// Exact inverse; integral because det = ±1 for isometries of a
  /// nondegenerate form.
  Isometry inverse() const {
    std::size_t n = m_.rows();
    auto inv = conekit::inverse(to_rat(m_));
    if (!inv) throw std::logic_error("Isometry: singular matrix");
    IntMat r(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (den((*inv)(i, j)) != 1) throw std::logic_error("Isometry: non-integral inverse");
        r(i, j) = num((*inv)(i, j));
      }
    return Isometry(std::move(r));
  }

  friend bool operator==(const Isometry& a, const Isometry& b) { return a.m_ == b.m_; }

 private:
  explicit Isometry(IntMat m) : m_(std::move(m)) {}
  IntMat m_;
};

inline bool is_isometry(const QuadLattice& L, const IntMat& m) {
  if (m.rows() != L.rank() || m.cols() != L.rank()) return false;
  return mul(transpose(m), mul(L.gram(), m)) == L.gram();
}

/// The reflection sigma_z(x) = x - 2 q(x,z)/q(z,z) z, as an integer matrix.
/// Throws on isotropic z and when the reflection is not integral.
inline Isometry reflection(const QuadLattice& L, const IntVec& z) {
  L.require_nondegenerate();
  Int zz = L.square(z);
  if (zz == 0) throw DomainError("reflection: isotropic vector");
  IntVec gz = L.pairings(z);
  std::size_t n = L.rank();
  IntMat m = IntMat::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    Int t = 2 * gz[j];
    if (t % zz != 0) throw DomainError("reflection: not integral for this vector");
    Int c = t / zz;
    for (std::size_t i = 0; i < n; ++i) m(i, j) -= c * z[i];
  }
  return Isometry::checked(L, std::move(m));
}

inline bool reflection_is_integral(const QuadLattice& L, const IntVec& z) {
  Int zz = L.square(z);
  if (zz == 0) return false;
  for (const Int& p : L.pairings(z))
    if ((2 * p) % zz != 0) return false;
  return true;
}

/// Basis (as matrix columns) and induced Gram of the saturated sublattice
/// {x : q(x, z) = 0}.
struct SublatticeBasis {
  IntMat basis;
  IntMat gram;
};

inline SublatticeBasis orthogonal_complement(const QuadLattice& L, const IntVec& z) {
  if (is_zero(z)) throw std::invalid_argument("orthogonal_complement: zero vector");
  IntVec gz = L.pairings(z);
  IntMat row(1, L.rank());
  for (std::size_t j = 0; j < L.rank(); ++j) row(0, j) = gz[j];
  IntMat basis = int_kernel(row);
  return {basis, induced_gram(L.gram(), basis)};
}

/// Two positive vectors lie in the same component of {q > 0} iff their
/// pairing is positive (signature (1, n) only).
inline bool same_positive_component(const QuadLattice& L, const RatVec& x, const RatVec& y) {
  L.require_hyperbolic();
  if (L.square(x) <= 0) throw DomainError("same_positive_component: first vector not positive");
  if (L.square(y) <= 0) throw DomainError("same_positive_component: second vector not positive");
  return L.form(x, y) > 0;
}

inline bool same_positive_component(const QuadLattice& L, const IntVec& x, const IntVec& y) {
  return same_positive_component(L, to_rat(x), to_rat(y));
}

/// Canonical representative of the unordered pair {z, -z}: positive pairing
/// with the anchor h wins; on a tie the lexicographically larger of the two.
inline IntVec wall_canonical(const QuadLattice& L, const IntVec& h, IntVec z) {
  Int p = L.form(h, z);
  if (p < 0) return neg(std::move(z));
  if (p > 0) return z;
  IntVec m = neg(z);
  return z < m ? m : z;
}

}  // namespace conekit
