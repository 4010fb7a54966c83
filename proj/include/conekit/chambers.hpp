#pragma once

// Wall-and-chamber engine for the positive cone. Chambers are encoded by a
// rational interior point plus its sign vector over a finite wall list; all
// incidence decisions (on-wall, face-ness) are exact.
//
// Face test: a wall w supports a face of chamber C iff some y with q(y,y) > 0
// lies on w-perp with the chamber's strict signs at every other wall. The
// strict linear part is decided by slack-maximizing exact LP; when the LP
// vertex lands outside the positive cone, the maximum of q(y,y) over the
// polytope (a strictly concave program on the chart q(y,p) = 1) decides
// positivity, and a convex mix with the LP witness restores strictness.

#include "conekit/lattice.hpp"
#include "conekit/enumerate.hpp"
#include "conekit/orbits.hpp"
#include "conekit/parallel.hpp"
#include "conekit/simplex.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace conekit {

class OnWallError : public DomainError {
 public:
  OnWallError(IntVec wall, const std::string& msg) : DomainError(msg), wall_(std::move(wall)) {}
  const IntVec& wall() const { return wall_; }

 private:
  IntVec wall_;
};

struct Wall {
  IntVec vector;  // sign-canonical primitive negative vector
  Int square;
  Int divisibility;

  friend bool operator<(const Wall& a, const Wall& b) { return a.vector < b.vector; }
};

struct Arrangement {
  QuadLattice lattice;
  RatVec anchor;            // interior rational point, off every wall
  std::vector<Wall> walls;  // sorted by vector
  // window provenance
  std::vector<Int> d_list;
  IntVec window_anchor;
  Int height;
  bool group_expanded = false;
  bool anchor_perturbed = false;

  std::optional<std::size_t> wall_index(const IntVec& z) const {
    Wall probe{z, 0, 0};
    auto it = std::lower_bound(walls.begin(), walls.end(), probe);
    if (it == walls.end() || it->vector != z) return std::nullopt;
    return static_cast<std::size_t>(it - walls.begin());
  }
};

struct Chamber {
  RatVec point;
  std::vector<int> signs;  // +1 / -1 per wall, aligned with Arrangement::walls
};

namespace detail {

/// Deterministic generic positive perturbation: anchor + eps * (1, t, t^2,...)
/// for shrinking eps and varying t until the point is positive, stays in the
/// anchor component and clears every wall.
inline RatVec perturb_off_walls(const QuadLattice& L, const RatVec& base,
                                const std::vector<Wall>& walls) {
  static const int primes[] = {2, 3, 5, 7, 11, 13};
  for (int t : primes) {
    RatVec dir(L.rank());
    Rat p(1);
    for (std::size_t i = 0; i < L.rank(); ++i) {
      dir[i] = p;
      p /= t;
    }
    Rat eps(1, 2);
    for (int halving = 0; halving < 80; ++halving, eps /= 2) {
      RatVec cand(L.rank());
      for (std::size_t i = 0; i < L.rank(); ++i) cand[i] = base[i] + eps * dir[i];
      if (L.square(cand) <= 0) continue;
      if (L.form(cand, base) <= 0) continue;
      bool clear = true;
      for (const Wall& w : walls)
        if (L.form(cand, to_rat(w.vector)) == 0) {
          clear = false;
          break;
        }
      if (clear) return cand;
    }
  }
  throw std::logic_error("perturb_off_walls: no clearing perturbation found");
}

}  // namespace detail

/// Wall list from enumeration over each d in d_list, optionally closed under
/// the group's generators within the group's height cap.
inline Arrangement build_arrangement(const QuadLattice& L, const std::vector<Int>& d_list,
                                     const EnumWindow& window, const GroupSpec* group = nullptr) {
  L.require_hyperbolic();
  std::set<IntVec> vecs;
  for (const Int& d : d_list) {
    if (d <= 0) throw std::invalid_argument("build_arrangement: squares must be positive");
    EnumWindow w = window;
    w.square = d;
    for (auto& z : enum_negative_primitive(L, w)) vecs.insert(std::move(z));
  }
  if (group && !group->empty()) {
    std::vector<IntVec> frontier(vecs.begin(), vecs.end());
    long budget = group->policy().max_nodes;
    while (!frontier.empty() && budget > 0) {
      std::vector<IntVec> next;
      for (const IntVec& v : frontier) {
        for (const Isometry& g : group->generators()) {
          IntVec img = wall_canonical(L, window.anchor, g.apply(v));
          if (L.form(window.anchor, img) > group->policy().height_cap) continue;
          if (vecs.insert(img).second) next.push_back(std::move(img));
          if (--budget <= 0) break;
        }
        if (budget <= 0) break;
      }
      frontier = std::move(next);
    }
  }

  Arrangement A{L, to_rat(window.anchor), {}, d_list, window.anchor, window.height_bound,
                group != nullptr, false};
  for (const IntVec& z : vecs)
    A.walls.push_back(Wall{z, L.square(z), divisibility(L, z)});
  std::sort(A.walls.begin(), A.walls.end());

  for (const Wall& w : A.walls)
    if (L.form(A.anchor, to_rat(w.vector)) == 0) {
      A.anchor = detail::perturb_off_walls(L, A.anchor, A.walls);
      A.anchor_perturbed = true;
      break;
    }
  return A;
}

inline std::string vec_to_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

/// Sign vector of a rational positive point over the arrangement's walls.
inline Chamber locate_chamber(const Arrangement& A, const RatVec& x) {
  const QuadLattice& L = A.lattice;
  L.check_dim(x);
  if (L.square(x) <= 0) throw DomainError("locate_chamber: point is not positive");
  if (L.form(x, A.anchor) <= 0)
    throw DomainError("locate_chamber: point lies in the opposite positive component");
  Chamber c{x, {}};
  c.signs.reserve(A.walls.size());
  for (const Wall& w : A.walls) {
    Rat s = L.form(x, to_rat(w.vector));
    if (s == 0)
      throw OnWallError(w.vector, "point lies on wall " + vec_to_string(w.vector));
    c.signs.push_back(s > 0 ? 1 : -1);
  }
  return c;
}

struct FaceCheck {
  bool is_face = false;
  IntVec witness;  // primitive integer point: on the wall, positive, strict signs elsewhere
};

namespace detail {

/// maximize y^T G y over {eq_rows y = eq_rhs, ineq_rows y >= 0} where G is
/// negative definite on the null space of the equality block. Exact recursive
/// active-set search: the subspace maximum either satisfies the remaining
/// inequalities or the true maximum lies on a constraint it violates.
class ConcaveQuadMax {
 public:
  ConcaveQuadMax(RatMat g, RatMat eq_rows, RatVec eq_rhs, RatMat ineq_rows)
      : g_(std::move(g)), eq_(std::move(eq_rows)), rhs_(std::move(eq_rhs)),
        ineq_(std::move(ineq_rows)) {}

  struct Result {
    bool feasible = false;
    Rat value;
    RatVec y;
  };

  Result solve() {
    rec({});
    return best_;
  }

 private:
  void rec(std::vector<int> active) {
    std::sort(active.begin(), active.end());
    if (!seen_.insert(active).second) return;
    auto sm = subspace_max(active);
    if (!sm) return;
    const RatVec& y = sm->second;
    std::vector<int> violated;
    for (std::size_t r = 0; r < ineq_.rows(); ++r) {
      if (std::find(active.begin(), active.end(), static_cast<int>(r)) != active.end()) continue;
      Rat v = 0;
      for (std::size_t j = 0; j < ineq_.cols(); ++j) v += ineq_(r, j) * y[j];
      if (v < 0) violated.push_back(static_cast<int>(r));
    }
    if (violated.empty()) {
      if (!best_.feasible || sm->first > best_.value) best_ = {true, sm->first, y};
      return;
    }
    for (int r : violated) {
      std::vector<int> next = active;
      next.push_back(r);
      rec(std::move(next));
    }
  }

  // maximize y^T G y on the affine subspace cut out by eq_ plus the active
  // inequality rows (as equalities). nullopt when the subspace is empty.
  std::optional<std::pair<Rat, RatVec>> subspace_max(const std::vector<int>& active) {
    std::size_t n = g_.rows();
    std::vector<std::pair<RatVec, Rat>> rows;
    for (std::size_t i = 0; i < eq_.rows(); ++i) rows.emplace_back(eq_.row(i), rhs_[i]);
    for (int r : active) rows.emplace_back(ineq_.row(static_cast<std::size_t>(r)), Rat(0));

    // reduce to an independent consistent system
    std::vector<std::pair<RatVec, Rat>> indep;
    for (auto row : rows) {
      for (const auto& p : indep) {
        std::size_t lead = 0;
        while (lead < n && p.first[lead] == 0) ++lead;
        if (lead == n || row.first[lead] == 0) continue;
        Rat f = row.first[lead] / p.first[lead];
        for (std::size_t j = 0; j < n; ++j) row.first[j] -= f * p.first[j];
        row.second -= f * p.second;
      }
      if (is_zero(row.first)) {
        if (row.second != 0) return std::nullopt;  // inconsistent
        continue;
      }
      // normalize leading entry for the elimination above
      std::size_t lead = 0;
      while (row.first[lead] == 0) ++lead;
      Rat f = row.first[lead];
      for (std::size_t j = 0; j < n; ++j) row.first[j] /= f;
      row.second /= f;
      indep.push_back(std::move(row));
    }

    std::size_t k = indep.size();
    // KKT: 2 G y - E^T lambda = 0, E y = d
    RatMat kkt(n + k, n + k);
    RatVec rhs(n + k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) kkt(i, j) = 2 * g_(i, j);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t j = 0; j < n; ++j) {
        kkt(j, n + r) = -indep[r].first[j];
        kkt(n + r, j) = indep[r].first[j];
      }
    for (std::size_t r = 0; r < k; ++r) rhs[n + r] = indep[r].second;
    auto sol = conekit::solve(kkt, rhs);
    if (!sol) return std::nullopt;
    RatVec y(sol->begin(), sol->begin() + static_cast<long>(n));
    Rat val = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) val += y[i] * g_(i, j) * y[j];
    return std::make_pair(val, y);
  }

  RatMat g_, eq_;
  RatVec rhs_;
  RatMat ineq_;
  Result best_;
  std::set<std::vector<int>> seen_;
};

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Exact decision whether wall index wi supports a face of C, with a rational
/// witness (returned as a primitive integer vector on the same ray).
inline FaceCheck is_face(const Arrangement& A, const Chamber& C, std::size_t wi) {
  const QuadLattice& L = A.lattice;
  if (wi >= A.walls.size()) throw std::invalid_argument("is_face: wall index out of range");
  const std::size_t r = L.rank();
  const IntVec& w = A.walls[wi].vector;
  const IntVec p = rat_to_primitive(C.point);

  // Strict feasibility LP over the unit box: variables u in [0,2]^r (y = u-1)
  // and slack t in [0,1]; maximize t subject to
  //   q(y,w) = 0,  s_z q(y,z) >= t (z != w),  q(y,p) >= t.
  std::vector<RatVec> rows;
  RatVec rhs;
  auto add_row = [&](const RatVec& coeff, const Rat& bound) {
    rows.push_back(coeff);
    rhs.push_back(bound);
  };
  auto pair_row = [&](const IntVec& v) {
    IntVec gv = L.pairings(v);
    RatVec c(r + 1);
    Rat k = 0;
    for (std::size_t j = 0; j < r; ++j) {
      c[j] = Rat(gv[j]);
      k += Rat(gv[j]);
    }
    return std::make_pair(c, k);
  };

  {
    auto [cw, kw] = pair_row(w);
    add_row(cw, kw);
    RatVec negw = cw;
    for (auto& v : negw) v = -v;
    add_row(negw, -kw);
  }
  for (std::size_t zi = 0; zi < A.walls.size(); ++zi) {
    if (zi == wi) continue;
    auto [cz, kz] = pair_row(A.walls[zi].vector);
    Rat s(C.signs[zi]);
    RatVec row(r + 1);
    for (std::size_t j = 0; j < r; ++j) row[j] = -s * cz[j];
    row[r] = 1;  // + t
    add_row(row, -s * kz);
  }
  {
    auto [cp, kp] = pair_row(p);
    RatVec row(r + 1);
    for (std::size_t j = 0; j < r; ++j) row[j] = -cp[j];
    row[r] = 1;
    add_row(row, -kp);
  }
  for (std::size_t j = 0; j < r; ++j) {
    RatVec row(r + 1);
    row[j] = 1;
    add_row(row, Rat(2));
  }
  {
    RatVec row(r + 1);
    row[r] = 1;
    add_row(row, Rat(1));
  }

  RatMat lp_a(rows.size(), r + 1);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j <= r; ++j) lp_a(i, j) = rows[i][j];
  RatVec obj(r + 1);
  obj[r] = 1;
  LpResult lp = simplex_max(lp_a, rhs, obj);
  if (lp.status != LpResult::Status::optimal || lp.value <= 0) return {};

  RatVec y1(r);
  for (std::size_t j = 0; j < r; ++j) y1[j] = lp.x[j] - 1;

  auto strict_ok = [&](const RatVec& y) {
    if (L.square(y) <= 0) return false;
    if (L.form(y, to_rat(p)) <= 0) return false;
    for (std::size_t zi = 0; zi < A.walls.size(); ++zi) {
      if (zi == wi) continue;
      Rat v = L.form(y, to_rat(A.walls[zi].vector));
      if (C.signs[zi] > 0 ? v <= 0 : v >= 0) return false;
    }
    return true;
  };

  if (strict_ok(y1)) return {true, rat_to_primitive(y1)};

  // The LP vertex escaped the positive cone; maximize q(y,y) over the closed
  // polytope on the chart {q(y,p)=1, q(y,w)=0} where q is strictly concave.
  RatMat g = to_rat(L.gram());
  RatMat eq(2, r);
  RatVec eq_rhs(2);
  {
    IntVec gw = L.pairings(w), gp = L.pairings(p);
    for (std::size_t j = 0; j < r; ++j) {
      eq(0, j) = Rat(gw[j]);
      eq(1, j) = Rat(gp[j]);
    }
    eq_rhs[1] = 1;
  }
  std::vector<std::size_t> others;
  for (std::size_t zi = 0; zi < A.walls.size(); ++zi)
    if (zi != wi) others.push_back(zi);
  RatMat ineq(others.size(), r);
  for (std::size_t i = 0; i < others.size(); ++i) {
    IntVec gz = L.pairings(A.walls[others[i]].vector);
    for (std::size_t j = 0; j < r; ++j) ineq(i, j) = Rat(C.signs[others[i]]) * Rat(gz[j]);
  }
  auto qm = detail::ConcaveQuadMax(g, eq, eq_rhs, ineq).solve();
  if (!qm.feasible || qm.value <= 0) return {};

  // mix toward the strictly feasible LP witness until both positivity and
  // strictness hold (tau > 0 keeps strict signs; small tau keeps positivity)
  Rat scale = L.form(y1, to_rat(p));
  RatVec yhat(r);
  for (std::size_t j = 0; j < r; ++j) yhat[j] = y1[j] / scale;
  Rat tau(1, 2);
  for (int k = 0; k < 512; ++k, tau /= 2) {
    RatVec y(r);
    for (std::size_t j = 0; j < r; ++j) y[j] = qm.y[j] + tau * (yhat[j] - qm.y[j]);
    if (strict_ok(y)) return {true, rat_to_primitive(y)};
  }
  throw std::logic_error("is_face: witness mixing failed to terminate");
}

/// Exact re-check of a face witness against every wall of the arrangement.
inline bool revalidate_face_witness(const Arrangement& A, const Chamber& C, std::size_t wi,
                                    const IntVec& y) {
  const QuadLattice& L = A.lattice;
  if (L.square(y) <= 0) return false;
  if (L.form(to_rat(y), A.anchor) <= 0) return false;
  if (L.form(y, A.walls[wi].vector) != 0) return false;
  for (std::size_t zi = 0; zi < A.walls.size(); ++zi) {
    if (zi == wi) continue;
    Int v = L.form(y, A.walls[zi].vector);
    if (C.signs[zi] > 0 ? v <= 0 : v >= 0) return false;
  }
  return true;
}

/// The chamber on the other side of a face: flips exactly that sign. The
/// returned chamber's point is a rational witness obtained by perturbing the
/// face witness across the wall.
inline Chamber cross_wall(const Arrangement& A, const Chamber& C, std::size_t wi) {
  const QuadLattice& L = A.lattice;
  FaceCheck fc = is_face(A, C, wi);
  if (!fc.is_face)
    throw DomainError("cross_wall: wall " + vec_to_string(A.walls[wi].vector) +
                      " is not a face of the chamber");
  RatVec y = to_rat(fc.witness);
  const IntVec& w = A.walls[wi].vector;
  int s_w = C.signs[wi];
  Rat delta(1, 2);
  for (int k = 0; k < 512; ++k, delta /= 2) {
    RatVec x(L.rank());
    for (std::size_t j = 0; j < L.rank(); ++j) x[j] = y[j] + Rat(s_w) * delta * Rat(w[j]);
    if (L.square(x) <= 0) continue;
    bool ok = true;
    for (std::size_t zi = 0; zi < A.walls.size() && ok; ++zi) {
      Rat v = L.form(x, to_rat(A.walls[zi].vector));
      int want = (zi == wi) ? -s_w : C.signs[zi];
      ok = (want > 0 ? v > 0 : v < 0);
    }
    if (!ok) continue;
    Chamber out{x, C.signs};
    out.signs[wi] = -s_w;
    return out;
  }
  throw std::logic_error("cross_wall: perturbation failed to terminate");
}

/// Group words (length <= cap) stabilizing the chamber: the image of the
/// chamber point, taken projectively (x ~ -x), reproduces the sign vector.
inline std::vector<Isometry> chamber_stabilizer(const Arrangement& A, const Chamber& C,
                                                const GroupSpec& G) {
  const QuadLattice& L = A.lattice;
  std::vector<Isometry> out;
  for (const Isometry& g : group_ball(L, G, G.policy().word_cap)) {
    RatVec y = g.apply(C.point);
    if (L.form(y, C.point) < 0) y = neg(std::move(y));
    bool match = true;
    for (std::size_t zi = 0; zi < A.walls.size() && match; ++zi) {
      Rat v = L.form(y, to_rat(A.walls[zi].vector));
      match = (C.signs[zi] > 0 ? v > 0 : v < 0);
    }
    if (match) out.push_back(g);
  }
  return out;
}

struct FaceOrbitReport {
  std::vector<std::size_t> faces;            // wall indices supporting faces
  std::vector<IntVec> witnesses;             // aligned with faces
  std::vector<std::vector<std::size_t>> orbits;  // partition of `faces`
  std::size_t stabilizer_size = 0;
  ClosurePolicy caps;
  bool image_left_window = false;  // some stabilizer image of a face wall was
                                   // outside the wall list (window truncation)
};

/// Faces of C partitioned under the chamber stabilizer inside G. The orbit
/// count is exact within the caps and an upper bound in general.
inline FaceOrbitReport face_orbit_count(const Arrangement& A, const Chamber& C,
                                        const GroupSpec& G) {
  const QuadLattice& L = A.lattice;
  FaceOrbitReport rep;
  rep.caps = G.policy();

  std::vector<FaceCheck> checks(A.walls.size());
  parallel_for(A.walls.size(), [&](std::size_t wi) { checks[wi] = is_face(A, C, wi); });
  for (std::size_t wi = 0; wi < A.walls.size(); ++wi)
    if (checks[wi].is_face) {
      rep.faces.push_back(wi);
      rep.witnesses.push_back(checks[wi].witness);
    }

  std::vector<Isometry> stab = chamber_stabilizer(A, C, G);
  rep.stabilizer_size = stab.size();

  std::map<std::size_t, std::size_t> face_pos;
  for (std::size_t i = 0; i < rep.faces.size(); ++i) face_pos[rep.faces[i]] = i;
  detail::UnionFind uf;
  for (std::size_t i = 0; i < rep.faces.size(); ++i) uf.make();
  for (const Isometry& g : stab) {
    for (std::size_t i = 0; i < rep.faces.size(); ++i) {
      IntVec img = wall_canonical(L, A.window_anchor, g.apply(A.walls[rep.faces[i]].vector));
      auto j = A.wall_index(img);
      if (!j) {
        rep.image_left_window = true;
        continue;
      }
      auto it = face_pos.find(*j);
      if (it != face_pos.end()) uf.unite(static_cast<int>(i), static_cast<int>(it->second));
    }
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rep.faces.size(); ++i)
    groups[uf.find(static_cast<int>(i))].push_back(rep.faces[i]);
  for (auto& [root, members] : groups) rep.orbits.push_back(members);
  return rep;
}

/// A group word (within the cap) carrying C1's sign data to C2's, if the
/// capped search finds one.
inline std::optional<Isometry> chamber_equivalent(const Arrangement& A, const Chamber& C1,
                                                  const Chamber& C2, const GroupSpec& G) {
  const QuadLattice& L = A.lattice;
  for (const Isometry& g : group_ball(L, G, G.policy().word_cap)) {
    RatVec y = g.apply(C1.point);
    if (L.form(y, A.anchor) < 0) y = neg(std::move(y));
    bool match = L.form(y, A.anchor) > 0;
    for (std::size_t zi = 0; zi < A.walls.size() && match; ++zi) {
      Rat v = L.form(y, to_rat(A.walls[zi].vector));
      match = (C2.signs[zi] > 0 ? v > 0 : v < 0);
    }
    if (match) return g;
  }
  return std::nullopt;
}

}  // namespace conekit
