#pragma once

// Lattice-level period-domain operations. Period points are represented by
// their Picard sublattices: saturation of spans, the projectivity criterion
// (the induced form represents a positive value iff it has a positive
// inertia index), and the projective-deformation construction that extends a
// Picard lattice to a corank-2 primitive sublattice of signature (1, k).

#include "conekit/lattice.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace conekit {

/// A primitive sublattice N of the ambient lattice, with its induced Gram.
/// The induced form may be degenerate (non-projective period points).
struct PicardSpec {
  QuadLattice ambient;
  IntMat basis;       // columns span N; saturated
  IntMat gram;        // basis^T G basis
  Signature sig;

  std::size_t rank() const { return basis.cols(); }
};

inline PicardSpec make_picard(const QuadLattice& L, IntMat basis) {
  IntMat g = induced_gram(L.gram(), basis);
  Signature s = signature_of(g);
  return PicardSpec{L, std::move(basis), std::move(g), s};
}

/// Saturation of the span of the given classes: the minimal primitive
/// sublattice containing them (the generic Picard lattice of the locus where
/// every z_i is of type (1,1)).
inline PicardSpec picard_closure(const QuadLattice& L, const std::vector<IntVec>& z_list) {
  if (z_list.empty()) throw std::invalid_argument("picard_closure: empty class list");
  std::vector<const IntVec*> nonzero;
  for (const IntVec& z : z_list) {
    L.check_dim(z);
    if (!is_zero(z)) nonzero.push_back(&z);
  }
  if (nonzero.empty()) throw std::invalid_argument("picard_closure: all classes are zero");
  IntMat span(L.rank(), nonzero.size());
  for (std::size_t j = 0; j < nonzero.size(); ++j)
    for (std::size_t i = 0; i < L.rank(); ++i) span(i, j) = (*nonzero[j])[i];
  return make_picard(L, saturate_columns(span));
}

inline bool contains(const PicardSpec& n, const IntVec& v) {
  return solve_integral(n.basis, v).has_value();
}

inline bool contains_sublattice(const PicardSpec& outer, const PicardSpec& inner) {
  for (std::size_t j = 0; j < inner.basis.cols(); ++j)
    if (!contains(outer, inner.basis.col(j))) return false;
  return true;
}

/// Projectivity criterion: the induced form represents a strictly positive
/// value iff its inertia has a positive part. Negative definite and
/// degenerate negative semidefinite Picard lattices are the non-projective
/// cases.
inline bool is_projective_type(const PicardSpec& n) { return n.sig.n_pos >= 1; }

/// Extend N to a primitive sublattice of rank (ambient rank - 2) and
/// signature (1, rank-1): the Picard lattice of a projective deformation
/// keeping all classes of N of type (1,1). Greedy extension by ambient basis
/// vectors in index order, saturating each step, backtracking when the
/// signature cannot be completed.
inline PicardSpec deformation_target(const QuadLattice& L, const PicardSpec& n) {
  if (&n.ambient.gram() != &L.gram() && !(n.ambient.gram() == L.gram()))
    throw std::invalid_argument("deformation_target: ambient mismatch");
  std::size_t target = L.rank() - 2;
  if (n.rank() > target) throw DomainError("deformation_target: corank must be at least 2");

  auto complete = [&](const PicardSpec& s) {
    return s.rank() == target && s.sig.n_pos == 1 && s.sig.n_zero == 0;
  };
  if (complete(n)) return n;

  struct Search {
    const QuadLattice& L;
    std::size_t target;

    std::optional<PicardSpec> extend(const PicardSpec& cur, std::size_t next_basis) {
      if (cur.rank() == target) {
        if (cur.sig.n_pos == 1 && cur.sig.n_zero == 0) return cur;
        return std::nullopt;
      }
      for (std::size_t i = next_basis; i < L.rank(); ++i) {
        IntVec e(L.rank());
        e[i] = 1;
        if (contains(cur, e)) continue;
        IntMat wider(L.rank(), cur.basis.cols() + 1);
        for (std::size_t c = 0; c < cur.basis.cols(); ++c)
          for (std::size_t r = 0; r < L.rank(); ++r) wider(r, c) = cur.basis(r, c);
        for (std::size_t r = 0; r < L.rank(); ++r) wider(r, cur.basis.cols()) = e[r];
        PicardSpec cand = make_picard(L, saturate_columns(wider));
        if (cand.rank() != cur.rank() + 1) continue;
        if (cand.sig.n_pos > 1) continue;  // cannot reach signature (1, k)
        if (auto done = extend(cand, i + 1)) return done;
      }
      return std::nullopt;
    }
  };

  Search search{L, target};
  auto result = search.extend(n, 0);
  if (!result)
    throw DomainError("deformation_target: no primitive extension of the required signature "
                      "among ambient basis directions");
  return *result;
}

}  // namespace conekit
