#include <catch2/catch_amalgamated.hpp>

#include "conekit/linalg.hpp"
#include "conekit/simplex.hpp"

#include <random>

using namespace conekit;

TEST_CASE("rational floor/ceil and sqrt brackets") {
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_floor(Rat(6)) == 6);

  // floor(a + sqrt(s2)) against brute force over a grid
  for (int ap = -12; ap <= 12; ++ap)
    for (int aq = 1; aq <= 4; ++aq)
      for (int sp = 0; sp <= 30; ++sp)
        for (int sq = 1; sq <= 3; ++sq) {
          Rat a(ap, aq), s2(sp, sq);
          double ref = std::floor(to_double(a) + std::sqrt(to_double(s2)) + 1e-15);
          Int got = floor_plus_sqrt(a, s2);
          CHECK(got == Int(static_cast<long>(ref)));
        }
}

TEST_CASE("bareiss determinant") {
  CHECK(det(IntMat{{2, 0}, {0, -2}}) == -4);
  CHECK(det(IntMat{{0, 1}, {1, 0}}) == -1);
  CHECK(det(IntMat{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
  CHECK(det(IntMat{{3, 1, 0}, {1, 3, 1}, {0, 1, 3}}) == 21);
}

TEST_CASE("integer kernel is a saturated basis") {
  // kernel of (2 4 6): contains (2,-1,0) and (3,0,-1) after saturation
  IntMat m{{2, 4, 6}};
  IntMat k = int_kernel(m);
  REQUIRE(k.cols() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    Int dot = 0;
    for (std::size_t i = 0; i < 3; ++i) dot += m(0, i) * k(i, j);
    CHECK(dot == 0);
  }
  // saturation: the 2x2 minors of the kernel basis must have gcd 1
  Int g = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      g = gcd(g, k(i, 0) * k(j, 1) - k(j, 0) * k(i, 1));
  CHECK(g == 1);
}

TEST_CASE("saturation of column spans") {
  // span{(0,2,0)} saturates to span{(0,1,0)}
  IntMat a(3, 1);
  a(1, 0) = 2;
  IntMat s = saturate_columns(a);
  REQUIRE(s.cols() == 1);
  CHECK(abs(s(1, 0)) == 1);
  CHECK(s(0, 0) == 0);
  CHECK(s(2, 0) == 0);

  // full-rank span saturates to all of Z^2
  IntMat b{{2, 0}, {0, 3}};
  IntMat sb = saturate_columns(b);
  REQUIRE(sb.cols() == 2);
  CHECK(abs(det(sb)) == 1);
}

TEST_CASE("signatures by congruence diagonalization") {
  CHECK(signature_of(IntMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}) == Signature{1, 2, 0});
  CHECK(signature_of(IntMat{{0, 1}, {1, 0}}) == Signature{1, 1, 0});
  CHECK(signature_of(IntMat{{0, 0}, {0, -2}}) == Signature{0, 1, 1});
  CHECK(signature_of(IntMat{{2, 1}, {1, 2}}) == Signature{2, 0, 0});
  CHECK(signature_of(IntMat{{0, 2, 0}, {2, 0, 0}, {0, 0, -2}}) == Signature{1, 2, 0});
}

TEST_CASE("congruence diagonalize tracks the transform") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng() % 3;
    IntMat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Int v = Int(static_cast<int>(rng() % 9)) - 4;
        g(i, j) = v;
        g(j, i) = v;
      }
    CongruenceDiagonal cd = congruence_diagonalize(to_rat(g));
    RatMat check = mul(transpose(cd.p), mul(to_rat(g), cd.p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(check(i, j) == (i == j ? cd.d[i] : Rat(0)));
  }
}

TEST_CASE("exact simplex on known programs") {
  // max x+y st x<=2, y<=3, x+y<=4
  RatMat a{{1, 0}, {0, 1}, {1, 1}};
  RatVec b{Rat(2), Rat(3), Rat(4)};
  RatVec c{Rat(1), Rat(1)};
  LpResult r = simplex_max(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == 4);

  // infeasible: x <= -1 with x >= 0
  LpResult inf = simplex_max(RatMat{{1}}, RatVec{Rat(-1)}, RatVec{Rat(1)});
  CHECK(inf.status == LpResult::Status::infeasible);

  // unbounded: max x with -x <= 1
  LpResult unb = simplex_max(RatMat{{-1}}, RatVec{Rat(1)}, RatVec{Rat(1)});
  CHECK(unb.status == LpResult::Status::unbounded);

  // equality pair + negative rhs exercises phase 1
  RatMat a2{{1, 1}, {-1, -1}, {-1, 0}};
  RatVec b2{Rat(2), Rat(-2), Rat(-1, 2)};  // x+y = 2, x >= 1/2
  LpResult r2 = simplex_max(a2, b2, RatVec{Rat(0), Rat(1)});
  REQUIRE(r2.status == LpResult::Status::optimal);
  CHECK(r2.value == Rat(3, 2));
}

TEST_CASE("solve handles inconsistent and underdetermined systems") {
  auto none = solve(RatMat{{1, 1}, {1, 1}}, RatVec{Rat(1), Rat(2)});
  CHECK(!none);
  auto some = solve(RatMat{{1, 1}}, RatVec{Rat(3)});
  REQUIRE(some);
  CHECK((*some)[0] + (*some)[1] == 3);
}
