#pragma once

// Exact scalar types (arbitrary-precision integers and rationals) and the
// handful of square-root helpers the enumeration kernels need.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>

namespace conekit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const Int& z) { return z.convert_to<double>(); }

/// floor toward -infinity (cpp_rational keeps den > 0).
inline Int rat_floor(const Rat& r) {
  Int p = num(r), q = den(r);
  Int d = p / q;
  if (p < 0 && d * q != p) --d;
  return d;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

/// Largest s >= 0 with s*s <= n.
inline Int isqrt(const Int& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n) {
  if (n < 0) return false;
  Int s = isqrt(n);
  return s * s == n;
}

/// Exact floor(a + sqrt(s2)) for rational a and s2 >= 0.
///
/// sqrt(p/q) is bracketed by isqrt(p*q)/q with width < 1/q, so the floor is
/// one of two consecutive integers; the candidate is fixed up with an exact
/// comparison.
inline Int floor_plus_sqrt(const Rat& a, const Rat& s2) {
  if (s2 < 0) throw std::invalid_argument("floor_plus_sqrt: negative radicand");
  Int q = den(s2);
  Rat s_lo(isqrt(num(s2) * q), q);
  Int m = rat_floor(a + s_lo);
  Rat d = Rat(m + 1) - a;  // m+1 <= a + sqrt(s2) iff d <= sqrt(s2)
  if (d <= 0 || d * d <= s2) ++m;
  return m;
}

/// Exact ceil(a - sqrt(s2)).
inline Int ceil_minus_sqrt(const Rat& a, const Rat& s2) {
  return -floor_plus_sqrt(-a, s2);
}

}  // namespace conekit
