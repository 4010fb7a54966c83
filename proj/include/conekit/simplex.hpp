#pragma once

// Dense two-phase simplex over exact rationals, Bland's rule throughout, so
// termination and the optimum are certified. Sized for the face-feasibility
// programs: tens of variables, a few hundred constraints.

#include "conekit/linalg.hpp"

#include <cstddef>
#include <vector>

namespace conekit {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  Rat value;
  RatVec x;  // original variables only
};

/// maximize c.x subject to A x <= b, x >= 0.
inline LpResult simplex_max(const RatMat& A, const RatVec& b, const RatVec& c) {
  const std::size_t m = A.rows(), n = A.cols();
  if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex_max: dimension mismatch");

  std::size_t n_art = 0;
  std::vector<int> row_sign(m, 1);
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      row_sign[i] = -1;
      ++n_art;
    }
  std::size_t total = n + m + n_art;  // vars, slacks, artificials
  RatMat t(m, total + 1);
  std::vector<std::size_t> basis(m);
  std::size_t next_art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = Rat(row_sign[i]) * A(i, j);
    t(i, n + i) = Rat(row_sign[i]);
    t(i, total) = Rat(row_sign[i]) * b[i];
    if (row_sign[i] < 0) {
      t(i, next_art) = 1;
      basis[i] = next_art++;
    } else {
      basis[i] = n + i;
    }
  }

  auto pivot = [&](std::size_t r, std::size_t col, RatVec& obj) {
    Rat piv = t(r, col);
    for (std::size_t j = 0; j <= total; ++j) t(r, j) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t(i, col) == 0) continue;
      Rat f = t(i, col);
      for (std::size_t j = 0; j <= total; ++j) t(i, j) -= f * t(r, j);
    }
    if (obj[col] != 0) {
      Rat f = obj[col];
      for (std::size_t j = 0; j <= total; ++j) obj[j] -= f * t(r, j);
    }
    basis[r] = col;
  };

  // Bland: smallest improving column enters; smallest-ratio row with the
  // smallest basic index leaves.
  auto run = [&](RatVec& obj, std::size_t allowed_cols) -> bool {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (obj[j] > 0) {
          enter = j;
          break;
        }
      if (enter == allowed_cols) return true;  // optimal
      bool found = false;
      std::size_t leave = 0;
      Rat best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t(i, enter) <= 0) continue;
        Rat ratio = t(i, total) / t(i, enter);
        if (!found || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          found = true;
          best = ratio;
          leave = i;
        }
      }
      if (!found) return false;  // unbounded
      pivot(leave, enter, obj);
    }
  };

  LpResult res;
  if (n_art > 0) {
    RatVec obj(total + 1);
    for (std::size_t a = n + m; a < total; ++a) obj[a] = -1;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] >= n + m)
        for (std::size_t j = 0; j <= total; ++j) obj[j] += t(i, j);
    run(obj, total);  // bounded above by 0
    if (-obj[total] != 0) {
      res.status = LpResult::Status::infeasible;
      return res;
    }
    // drive artificials out of the basis; all their values are 0 here
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n + m) continue;
      std::size_t col = n + m;
      for (std::size_t j = 0; j < n + m; ++j)
        if (t(i, j) != 0) {
          col = j;
          break;
        }
      if (col < n + m) pivot(i, col, obj);
      // else: redundant row; the artificial stays basic at value 0 and its
      // column is excluded from phase 2 entering candidates.
    }
  }

  RatVec obj(total + 1);
  for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (obj[basis[i]] == 0) continue;
    Rat f = obj[basis[i]];
    for (std::size_t j = 0; j <= total; ++j) obj[j] -= f * t(i, j);
  }
  bool bounded = run(obj, n + m);
  if (!bounded) {
    res.status = LpResult::Status::unbounded;
    return res;
  }
  res.status = LpResult::Status::optimal;
  res.value = -obj[total];
  res.x.assign(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t(i, total);
  return res;
}

}  // namespace conekit
