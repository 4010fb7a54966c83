#pragma once

// Fundamental solution of x^2 - D y^2 = 1 by the continued-fraction expansion
// of sqrt(D), and the fundamental orientation-preserving automorph of an
// anisotropic binary form of signature (1,1) built from it.

#include "conekit/lattice.hpp"

#include <stdexcept>
#include <utility>

namespace conekit {

struct PellSolution {
  Int x, y;  // minimal positive solution of x^2 - D y^2 = 1
};

/// Continued-fraction Pell solver. D > 0 and not a perfect square. The
/// convergent at the end of the period solves x^2 - D y^2 = ±1; the negative
/// case squares up via (x,y) -> (x^2 + D y^2, 2xy).
inline PellSolution pell_fundamental(const Int& D) {
  if (D <= 0 || is_square(D)) throw std::invalid_argument("pell_fundamental: D must be positive and non-square");
  Int a0 = isqrt(D);
  Int m = 0, d = 1, a = a0;
  Int p_prev = 1, p = a0;  // convergent numerators
  Int q_prev = 0, q = 1;   // denominators
  for (;;) {
    Int v = p * p - D * q * q;
    if (v == 1) return {p, q};
    if (v == -1) return {p * p + D * q * q, 2 * p * q};
    m = d * a - m;
    d = (D - m * m) / d;
    a = (a0 + m) / d;
    Int pn = a * p + p_prev;
    Int qn = a * q + q_prev;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
}

/// Discriminant-like invariant b^2 - ac of the binary form with Gram
/// [[a,b],[b,c]]; positive iff signature (1,1), a perfect square iff the form
/// is isotropic over Q (equivalently over Z).
inline Int binary_disc(const IntMat& n) {
  if (n.rows() != 2 || n.cols() != 2) throw std::invalid_argument("binary_disc: not 2x2");
  return n(0, 1) * n(0, 1) - n(0, 0) * n(1, 1);
}

/// Generator of the infinite cyclic group of orientation-preserving integral
/// automorphs of an anisotropic Gram [[a,b],[b,c]] of signature (1,1):
///   g = [[t - b u, -c u], [a u, t + b u]]
/// for the fundamental solution of t^2 - D0 u^2 = 1 on the content-reduced
/// form (D0 = D / content^2). Its eigenvalues are t ± u sqrt(D0).
inline IntMat fundamental_automorph(const IntMat& n) {
  Int a = n(0, 0), b = n(0, 1), c = n(1, 1);
  if (n(1, 0) != b) throw std::invalid_argument("fundamental_automorph: Gram not symmetric");
  Int k = gcd(gcd(a, b), c);
  if (k == 0) throw std::invalid_argument("fundamental_automorph: zero form");
  a /= k;
  b /= k;
  c /= k;
  Int d0 = b * b - a * c;
  if (d0 <= 0) throw DomainError("fundamental_automorph: form is not of signature (1,1)");
  if (is_square(d0)) throw DomainError("fundamental_automorph: form is isotropic");
  PellSolution s = pell_fundamental(d0);
  IntMat g(2, 2);
  g(0, 0) = s.x - b * s.y;
  g(0, 1) = -c * s.y;
  g(1, 0) = a * s.y;
  g(1, 1) = s.x + b * s.y;
  return g;
}

}  // namespace conekit
