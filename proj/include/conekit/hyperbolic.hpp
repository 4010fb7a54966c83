#pragma once

// Hyperboloid-model geometry on the projectivized positive cone: distances,
// point-to-wall distances, seeded ball sampling, the wall-density probe,
// closed-geodesic lengths from fundamental automorphs, and cusp/compact-core
// measurements.
//
// Exact/float boundary: incidence decisions (on-wall, isotropy, positivity of
// rational inputs) are exact; metric quantities are doubles with the stated
// tolerances. Sampling is reproducible from the seed for any worker count.

#include "conekit/chambers.hpp"
#include "conekit/enumerate.hpp"
#include "conekit/lattice.hpp"
#include "conekit/parallel.hpp"
#include "conekit/pell.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace conekit {

/// Normalized positive vector, q(x,x) = 1. Points constructed from rational
/// data keep their exact representative so incidence tests stay exact.
struct HPoint {
  std::vector<double> x;
  std::optional<RatVec> exact;
};

namespace detail {

/// q(x,y) in doubles, summed so the expression is symmetric in (x,y) and the
/// result is bit-identical under argument swap.
inline double form_d(const QuadLattice& L, const std::vector<double>& x,
                     const std::vector<double>& y) {
  std::size_t n = L.rank();
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double gii = to_double(Int(L.gram()(i, i)));
    s += gii * x[i] * y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      double gij = to_double(Int(L.gram()(i, j)));
      if (gij != 0) s += gij * (x[i] * y[j] + x[j] * y[i]);
    }
  }
  return s;
}

}  // namespace detail

inline HPoint normalize_point(const QuadLattice& L, const RatVec& v) {
  L.check_dim(v);
  Rat s = L.square(v);
  if (s <= 0) throw DomainError("normalize_point: vector is not positive");
  double inv = 1.0 / std::sqrt(to_double(s));
  HPoint p;
  p.x.resize(L.rank());
  for (std::size_t i = 0; i < L.rank(); ++i) p.x[i] = to_double(v[i]) * inv;
  p.exact = v;
  return p;
}

inline HPoint normalize_point(const QuadLattice& L, std::vector<double> v) {
  double s = detail::form_d(L, v, v);
  if (!(s > 0)) throw DomainError("normalize_point: vector is not positive");
  double inv = 1.0 / std::sqrt(s);
  for (auto& c : v) c *= inv;
  return HPoint{std::move(v), std::nullopt};
}

/// arccosh(q(x,y)); both points normalized and in the same component.
inline double h_distance(const QuadLattice& L, const HPoint& a, const HPoint& b) {
  double q = detail::form_d(L, a.x, b.x);
  if (q < 0) throw DomainError("h_distance: points lie in opposite components");
  return std::acosh(q < 1.0 ? 1.0 : q);
}

/// arcsinh(|q(x,z)| / sqrt(-q(z,z))): distance from the point to the wall
/// hyperplane. Zero is decided exactly when the point carries rational data.
inline double wall_distance(const QuadLattice& L, const HPoint& p, const IntVec& z) {
  Int zz = L.square(z);
  if (zz >= 0) throw DomainError("wall_distance: wall vector must be negative");
  if (p.exact && L.form(*p.exact, to_rat(z)) == 0) return 0.0;
  double num = 0;
  IntVec gz = L.pairings(z);
  for (std::size_t i = 0; i < L.rank(); ++i) num += p.x[i] * to_double(gz[i]);
  return std::asinh(std::fabs(num) / std::sqrt(to_double(-zz)));
}

inline double wall_distance(const QuadLattice& L, const HPoint& p, const Wall& w) {
  return wall_distance(L, p, w.vector);
}

namespace detail {

/// Uniform doubles in [0,1) and Box-Muller gaussians from mt19937_64.
/// Spelled out (rather than <random> distributions) so the stream is the
/// documented scheme, independent of standard-library internals.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double gauss() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = unit(), u2 = unit();
    while (u1 <= 0.0) u1 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0;
  bool have_ = false;
};

/// q-orthonormal basis of the tangent space at c (vectors t with q(t,c) = 0,
/// q(t,t) = -1), by projection and Gram-Schmidt in doubles.
inline std::vector<std::vector<double>> tangent_basis(const QuadLattice& L,
                                                      const std::vector<double>& c) {
  std::size_t n = L.rank();
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < n && basis.size() + 1 < n; ++i) {
    std::vector<double> t(n, 0.0);
    t[i] = 1.0;
    double pc = form_d(L, t, c);
    for (std::size_t j = 0; j < n; ++j) t[j] -= pc * c[j];
    for (const auto& b : basis) {
      double pb = -form_d(L, t, b);  // inner product for the (-q) metric
      for (std::size_t j = 0; j < n; ++j) t[j] -= pb * b[j];
    }
    double nrm = -form_d(L, t, t);
    if (nrm < 1e-18) continue;  // dependent direction
    double inv = 1.0 / std::sqrt(nrm);
    for (auto& v : t) v *= inv;
    basis.push_back(std::move(t));
  }
  if (basis.size() + 1 != n) throw std::logic_error("tangent_basis: degenerate projection");
  return basis;
}

}  // namespace detail

/// N points of the closed ball of radius R around the center: direction
/// uniform on the tangent sphere (normalized gaussians), radius by rejection
/// against the hyperbolic density sinh^(dim-1). Deterministic in the seed.
inline std::vector<HPoint> sample_ball(const QuadLattice& L, const HPoint& center, double radius,
                                       int n_samples, std::uint64_t seed) {
  L.require_hyperbolic();
  if (radius <= 0) throw std::invalid_argument("sample_ball: radius must be positive");
  if (n_samples < 1) throw std::invalid_argument("sample_ball: need at least one sample");
  auto tangent = detail::tangent_basis(L, center.x);
  std::size_t dim = tangent.size();  // hyperbolic dimension rank-1
  detail::SeededStream stream(seed);
  double sinh_r_max = std::sinh(radius);

  std::vector<HPoint> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> dir(dim);
    double norm2 = 0;
    do {
      norm2 = 0;
      for (auto& d : dir) {
        d = stream.gauss();
        norm2 += d * d;
      }
    } while (norm2 < 1e-12);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& d : dir) d *= inv;

    double r = 0;
    for (;;) {
      r = radius * stream.unit();
      double accept = std::pow(std::sinh(r) / sinh_r_max, static_cast<double>(dim - 1));
      if (stream.unit() <= accept) break;
    }

    std::vector<double> pt(L.rank());
    double ch = std::cosh(r), sh = std::sinh(r);
    for (std::size_t i = 0; i < L.rank(); ++i) {
      double u = 0;
      for (std::size_t k = 0; k < dim; ++k) u += dir[k] * tangent[k][i];
      pt[i] = ch * center.x[i] + sh * u;
    }
    out.push_back(HPoint{std::move(pt), std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// density probe

struct DensitySchedule {
  std::vector<Int> d_values;  // ascending list of square bounds D
  Int height_base = 2;        // enumeration window H(D) = base + slope * D
  Int height_slope = 2;
};

struct DensityRow {
  Int d_max;
  double f = std::numeric_limits<double>::infinity();
  long wall_count = 0;
  bool no_walls = true;
};

struct DensityReport {
  HPoint center;
  double radius = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  DensitySchedule schedule;
  bool theorem_regime = false;  // hyperbolic dimension >= 3
  std::vector<DensityRow> curve;
};

/// f(D) = max over samples of the min distance to any wall of square >= -D
/// within the expansion window H(D). Nested windows make the curve
/// nonincreasing; its decay toward zero is the desk-scale signature of the
/// dense branch of the orbit/density dichotomy.
inline DensityReport density_probe(const QuadLattice& L, const DensitySchedule& schedule,
                                   const IntVec& anchor, double radius, int n_samples,
                                   std::uint64_t seed) {
  L.require_hyperbolic();
  DensityReport rep;
  rep.center = normalize_point(L, to_rat(anchor));
  rep.radius = radius;
  rep.samples = n_samples;
  rep.seed = seed;
  rep.schedule = schedule;
  rep.theorem_regime = L.rank() >= 4;

  std::vector<HPoint> pts = sample_ball(L, rep.center, radius, n_samples, seed);

  for (const Int& d_max : schedule.d_values) {
    DensityRow row;
    row.d_max = d_max;
    EnumWindow w;
    w.anchor = anchor;
    w.height_bound = schedule.height_base + schedule.height_slope * d_max;
    std::set<IntVec> walls;
    for (Int d = 1; d <= d_max; ++d) {
      w.square = d;
      for (auto& z : enum_negative_primitive(L, w)) walls.insert(std::move(z));
    }
    row.wall_count = static_cast<long>(walls.size());
    row.no_walls = walls.empty();
    if (!row.no_walls) {
      // precompute pairing rows once per wall
      std::vector<std::vector<double>> gz;
      std::vector<double> root;
      for (const IntVec& z : walls) {
        std::vector<double> g(L.rank());
        IntVec p = L.pairings(z);
        for (std::size_t i = 0; i < L.rank(); ++i) g[i] = to_double(p[i]);
        gz.push_back(std::move(g));
        root.push_back(std::sqrt(to_double(-L.square(z))));
      }
      std::vector<double> min_dist(pts.size());
      parallel_for(pts.size(), [&](std::size_t si) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t wi = 0; wi < gz.size(); ++wi) {
          double num = 0;
          for (std::size_t i = 0; i < L.rank(); ++i) num += pts[si].x[i] * gz[wi][i];
          double d = std::asinh(std::fabs(num) / root[wi]);
          if (d < best) best = d;
        }
        min_dist[si] = best;
      });
      double f = 0;
      for (double d : min_dist)
        if (d > f) f = d;
      row.f = f;
    }
    rep.curve.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// closed geodesics and cusps

struct GeodesicReport {
  IntVec wall;             // z with q(z,z) < 0 in the rank-3 lattice
  IntMat basis;            // 3x2 basis of the complement z-perp
  IntMat gram;             // induced 2x2 Gram, signature (1,1), anisotropic
  IntMat automorph;        // fundamental orientation-preserving automorph
  double length = 0;       // log of the largest eigenvalue
  double check_residual = 0;  // |cosh(length) - q(xhat, g xhat)|
};

/// Closed geodesic supported on z-perp of a rank-3 lattice of signature
/// (1,2): the fundamental automorph of the (anisotropic) complement form and
/// its translation length, cross-checked against a normalized point on the
/// geodesic. Isotropic complements are cusp-bounded lines and rejected.
inline GeodesicReport closed_geodesic_length(const QuadLattice& P, const IntVec& z) {
  if (P.rank() != 3) throw std::invalid_argument("closed_geodesic_length: lattice rank must be 3");
  P.require_hyperbolic();
  if (P.square(z) >= 0) throw DomainError("closed_geodesic_length: wall vector must be negative");

  GeodesicReport rep;
  rep.wall = z;
  SublatticeBasis comp = orthogonal_complement(P, z);
  rep.basis = comp.basis;
  rep.gram = comp.gram;
  Signature sig = signature_of(comp.gram);
  if (!(sig.n_pos == 1 && sig.n_neg == 1))
    throw DomainError("closed_geodesic_length: complement is not of signature (1,1)");
  if (is_square(binary_disc(comp.gram)))
    throw DomainError("closed_geodesic_length: complement is isotropic (cusp-bounded line)");

  rep.automorph = fundamental_automorph(comp.gram);
  if (mul(transpose(rep.automorph), mul(comp.gram, rep.automorph)) != comp.gram)
    throw std::logic_error("closed_geodesic_length: automorph check failed");

  // trace = 2t for the Pell solution; largest eigenvalue t + sqrt(t^2 - 1)
  double t = to_double(rep.automorph(0, 0) + rep.automorph(1, 1)) / 2.0;
  rep.length = std::acosh(t);

  // a normalized point on the geodesic: every point of the (1,1)-plane lies
  // on the automorph's axis
  CongruenceDiagonal cd = congruence_diagonalize(to_rat(comp.gram));
  std::size_t pos = cd.d[0] > 0 ? 0 : 1;
  double alpha = to_double(cd.d[pos]);
  std::vector<double> v(2);
  for (std::size_t i = 0; i < 2; ++i) v[i] = to_double(cd.p(i, pos)) / std::sqrt(alpha);
  std::vector<double> gv(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) gv[i] += to_double(rep.automorph(i, j)) * v[j];
  // q_N(v, g v) in complement coordinates
  double q = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) q += v[i] * to_double(comp.gram(i, j)) * gv[j];
  rep.check_residual = std::fabs(q - std::cosh(rep.length));
  return rep;
}

struct GeodesicCuspStats {
  double depth = 0;        // max over one period and all cusps of the height 1/q(x,c)
  double best_point = 0;   // min over the period of the per-point max height
  double margin = 0;       // t_star - best_point
};

struct CuspClearanceReport {
  std::vector<IntVec> cusps;
  bool compact = false;  // no rational cusps: the core is everything
  double t_star = 0;     // compact-core threshold: max of the depths
  std::vector<GeodesicCuspStats> per_geodesic;
  bool all_meet_core = false;
  int samples_per_period = 0;
};

/// Cusp heights along computed closed geodesics. Each geodesic is sampled
/// over one period; the core threshold t* is the largest height any geodesic
/// attains, so every geodesic meets the region {height <= t*} by
/// construction, and the per-geodesic margins quantify by how much.
inline CuspClearanceReport cusp_clearance(const QuadLattice& P,
                                          const std::vector<GeodesicReport>& geodesics,
                                          const EnumWindow& cusp_window,
                                          int samples_per_period = 256) {
  if (P.rank() != 3) throw std::invalid_argument("cusp_clearance: lattice rank must be 3");
  P.require_hyperbolic();
  CuspClearanceReport rep;
  rep.samples_per_period = samples_per_period;
  rep.cusps = enum_isotropic_primitive(P, cusp_window);
  if (rep.cusps.empty()) {
    rep.compact = true;
    rep.all_meet_core = true;
    return rep;
  }

  std::vector<std::vector<double>> cusp_pairings;
  for (const IntVec& c : rep.cusps) {
    std::vector<double> g(3);
    IntVec pr = P.pairings(c);
    for (std::size_t i = 0; i < 3; ++i) g[i] = to_double(pr[i]);
    cusp_pairings.push_back(std::move(g));
  }

  for (const GeodesicReport& geo : geodesics) {
    CongruenceDiagonal cd = congruence_diagonalize(to_rat(geo.gram));
    std::size_t pos = cd.d[0] > 0 ? 0 : 1, neg = 1 - pos;
    double alpha = to_double(cd.d[pos]), beta = -to_double(cd.d[neg]);
    // ambient q-orthonormal frame of the plane
    std::vector<double> e0(3, 0.0), e1(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        e0[i] += to_double(geo.basis(i, j)) * to_double(cd.p(j, pos)) / std::sqrt(alpha);
        e1[i] += to_double(geo.basis(i, j)) * to_double(cd.p(j, neg)) / std::sqrt(beta);
      }
    // stay in the component of the window anchor
    std::vector<double> hd(3);
    for (std::size_t i = 0; i < 3; ++i) hd[i] = to_double(cusp_window.anchor[i]);
    if (detail::form_d(P, e0, hd) < 0)
      for (auto& v : e0) v = -v;

    GeodesicCuspStats st;
    st.depth = 0;
    st.best_point = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples_per_period; ++k) {
      double s = geo.length * static_cast<double>(k) / samples_per_period;
      double ch = std::cosh(s), sh = std::sinh(s);
      double point_max = 0;
      for (const auto& gp : cusp_pairings) {
        double q = 0;
        for (std::size_t i = 0; i < 3; ++i) q += (ch * e0[i] + sh * e1[i]) * gp[i];
        double beta_c = 1.0 / q;  // cusp height; larger = deeper
        if (beta_c > point_max) point_max = beta_c;
      }
      if (point_max > st.depth) st.depth = point_max;
      if (point_max < st.best_point) st.best_point = point_max;
    }
    rep.per_geodesic.push_back(st);
  }

  for (const auto& st : rep.per_geodesic)
    if (st.depth > rep.t_star) rep.t_star = st.depth;
  rep.all_meet_core = true;
  for (auto& st : rep.per_geodesic) {
    st.margin = rep.t_star - st.best_point;
    if (!(st.best_point <= rep.t_star)) rep.all_meet_core = false;
  }
  return rep;
}

}  // namespace conekit
