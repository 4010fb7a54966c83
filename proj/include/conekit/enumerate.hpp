#pragma once

// Bounded exact enumeration of primitive lattice vectors: negative vectors of
// prescribed square (wall candidates) and isotropic vectors (cusps).
//
// The engine iterates over pairing slices q(h, z) = c for c up to the height
// bound. Within a slice the linear constraint is solved over Z, leaving a
// definite quadratic equation on the solution sublattice which is enumerated
// by exact Fincke-Pohst recursion (LDL^T with rational interval pruning).
// Everything is integer/rational; completeness needs no tolerances.

#include "conekit/lattice.hpp"
#include "conekit/parallel.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace conekit {

/// A finite search window: anchor h with q(h,h) > 0, a bound on the pairing
/// q(h,z), and the target square (-d for wall vectors, 0 for cusps).
struct EnumWindow {
  IntVec anchor;
  Int height_bound;
  Int square = 0;  // enumeration targets q(z,z) = -square; 0 means isotropic
};

namespace detail {

struct Ldlt {
  RatMat l;  // unit lower triangular
  RatVec d;  // positive pivots
};

inline Ldlt ldlt_posdef(const RatMat& a) {
  std::size_t n = a.rows();
  Ldlt f{RatMat::identity(n), RatVec(n)};
  for (std::size_t j = 0; j < n; ++j) {
    Rat dj = a(j, j);
    for (std::size_t k = 0; k < j; ++k) dj -= f.l(j, k) * f.l(j, k) * f.d[k];
    if (dj <= 0) throw std::logic_error("ldlt_posdef: matrix not positive definite");
    f.d[j] = dj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rat v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= f.l(i, k) * f.l(j, k) * f.d[k];
      f.l(i, j) = v / dj;
    }
  }
  return f;
}

/// All y in Z^n with (y - center)^T A (y - center) <= bound, A positive
/// definite. Exact recursion; output order is deterministic.
inline std::vector<IntVec> ellipsoid_points(const RatMat& a, const RatVec& center,
                                            const Rat& bound) {
  std::size_t n = a.rows();
  std::vector<IntVec> out;
  if (bound < 0) return out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  Ldlt f = ldlt_posdef(a);
  // q(x) = sum_i d_i (x_i + sum_{j>i} l(j,i) x_j)^2 with x = y - center
  IntVec y(n);
  RatVec x(n);
  auto rec = [&](auto&& self, std::size_t level, const Rat& rem) -> void {
    std::size_t i = level - 1;
    Rat off = -center[i];
    for (std::size_t j = i + 1; j < n; ++j) off += f.l(j, i) * x[j];
    // d_i (y_i + off)^2 <= rem
    Rat s2 = rem / f.d[i];
    Int lo = ceil_minus_sqrt(-off, s2), hi = floor_plus_sqrt(-off, s2);
    for (Int v = lo; v <= hi; ++v) {
      Rat t = Rat(v) + off;
      Rat used = f.d[i] * t * t;
      if (used > rem) continue;
      y[i] = v;
      x[i] = Rat(v) - center[i];
      if (i == 0)
        out.push_back(y);
      else
        self(self, i, rem - used);
    }
  };
  rec(rec, n, bound);
  return out;
}

}  // namespace detail

/// Solutions z in Z^rank of q(h,z) = c, q(z,z) = target within one slice.
/// Returns raw (non-canonicalized) vectors.
inline std::vector<IntVec> enum_slice(const QuadLattice& L, const IntVec& h, const Int& c,
                                      const Int& target) {
  IntVec gh = L.pairings(h);
  Int g = content(gh);
  if (g == 0) throw DomainError("enum_slice: anchor pairs to zero with the lattice");
  std::vector<IntVec> out;
  if (c % g != 0) return out;

  // particular solution u of <gh, u> = g by folding extended gcds
  std::size_t n = L.rank();
  IntVec u(n);
  {
    Int acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ExtGcd e = ext_gcd(acc, gh[i]);
      for (std::size_t j = 0; j < i; ++j) u[j] *= e.x;
      u[i] = e.y;
      acc = e.g;
    }
  }
  IntVec z0(n);
  Int scale = c / g;
  for (std::size_t i = 0; i < n; ++i) z0[i] = scale * u[i];

  IntMat row(1, n);
  for (std::size_t j = 0; j < n; ++j) row(0, j) = gh[j];
  IntMat k = int_kernel(row);  // n x (n-1); negative definite Gram on h-perp
  std::size_t m = k.cols();

  // q(z0 + K y, z0 + K y) = target  <=>  (y - mu)^T A (y - mu) = rho
  IntMat a_int = induced_gram(L.gram(), k);
  RatMat a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = Rat(-a_int(i, j));
  IntVec kt_g_z0 = mul(transpose(k), mul(L.gram(), z0));
  RatVec ct = to_rat(kt_g_z0);

  Rat rho = Rat(L.square(z0) - target);
  RatVec mu(m);
  if (m > 0) {
    auto ainv = inverse(a);
    if (!ainv) throw std::logic_error("enum_slice: complement Gram singular");
    mu = mul(*ainv, ct);
    for (std::size_t i = 0; i < m; ++i) rho += ct[i] * mu[i];
  }
  if (rho < 0) return out;

  for (const IntVec& y : detail::ellipsoid_points(a, mu, rho)) {
    IntVec z = z0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) z[i] += k(i, j) * y[j];
    if (L.square(z) == target && L.form(h, z) == c) out.push_back(std::move(z));
  }
  return out;
}

namespace detail {

inline void check_window(const QuadLattice& L, const EnumWindow& w) {
  L.require_hyperbolic();
  L.check_dim(w.anchor);
  if (L.square(w.anchor) <= 0) throw DomainError("enum window: anchor is not positive");
  if (w.height_bound < 0) throw std::invalid_argument("enum window: negative height bound");
}

inline std::vector<IntVec> enum_window(const QuadLattice& L, const EnumWindow& w,
                                       const Int& target, bool include_zero_slice) {
  check_window(L, w);
  long slices = w.height_bound.convert_to<long>() + 1;
  std::vector<std::vector<IntVec>> per_slice(slices);
  parallel_for(static_cast<std::size_t>(slices), [&](std::size_t ci) {
    Int c(ci);
    if (c == 0 && !include_zero_slice) return;
    per_slice[ci] = enum_slice(L, w.anchor, c, target);
  });
  std::vector<IntVec> all;
  for (auto& sl : per_slice)
    for (auto& z : sl) {
      if (is_zero(z) || !is_primitive(z)) continue;
      all.push_back(wall_canonical(L, w.anchor, std::move(z)));
    }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace detail

/// All primitive z with q(z,z) = -d (d = w.square > 0) and
/// 0 <= q(h,z) <= height bound, sign-canonicalized, sorted, duplicate-free.
inline std::vector<IntVec> enum_negative_primitive(const QuadLattice& L, const EnumWindow& w) {
  if (w.square <= 0) throw std::invalid_argument("enum_negative_primitive: square must be positive");
  return detail::enum_window(L, w, -w.square, /*include_zero_slice=*/true);
}

/// All primitive z != 0 with q(z,z) = 0 and 0 < q(h,z) <= height bound.
/// Cusps are rays; the sign is fixed by pairing positively with the anchor.
inline std::vector<IntVec> enum_isotropic_primitive(const QuadLattice& L, const EnumWindow& w) {
  return detail::enum_window(L, w, 0, /*include_zero_slice=*/false);
}

}  // namespace conekit
