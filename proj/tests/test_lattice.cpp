#include <catch2/catch_amalgamated.hpp>

#include "conekit/lattice.hpp"

#include <random>

using namespace conekit;

namespace {

const QuadLattice kMink3(IntMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, "diag:1,-1,-1");
const QuadLattice kU(IntMat{{0, 1}, {1, 0}}, "u");
const QuadLattice kUNeg2(IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}, "u-plus-neg2");

/// Random nondegenerate lattice of the given rank with small entries.
QuadLattice random_lattice(std::mt19937& rng, std::size_t rank) {
  for (;;) {
    IntMat g(rank, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = i; j < rank; ++j) {
        Int v = Int(static_cast<int>(rng() % 9)) - 4;
        g(i, j) = v;
        g(j, i) = v;
      }
    if (det(g) != 0) return QuadLattice(std::move(g));
  }
}

IntVec random_vec(std::mt19937& rng, std::size_t rank, int bound) {
  IntVec v(rank);
  for (auto& c : v) c = Int(static_cast<int>(rng() % (2 * bound + 1))) - bound;
  return v;
}

}  // namespace

TEST_CASE("form evaluation on the spec examples") {
  CHECK(eval_form(kMink3, IntVec{1, 0, 0}, IntVec{0, 1, 0}) == 0);
  CHECK(eval_form(kU, IntVec{1, 0}, IntVec{0, 1}) == 1);
  QuadLattice L(IntMat{{2, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -2, 0}, {0, 0, 0, -2}});
  CHECK(eval_form(L, IntVec{1, 1, 0, 0}, IntVec{1, 1, 0, 0}) == 0);
  CHECK_THROWS_AS(eval_form(kU, IntVec{1, 0, 0}, IntVec{0, 1}), std::invalid_argument);
}

TEST_CASE("signatures") {
  CHECK(kMink3.signature() == Signature{1, 2, 0});
  CHECK(kU.signature() == Signature{1, 1, 0});
  CHECK(QuadLattice(IntMat{{0, 0}, {0, -2}}).signature() == Signature{0, 1, 1});
  CHECK(kMink3.is_hyperbolic());
  CHECK_FALSE(QuadLattice(IntMat{{2, 0}, {0, 2}}).is_hyperbolic());
}

TEST_CASE("primitivity") {
  CHECK_FALSE(is_primitive(IntVec{2, 4}));
  CHECK(is_primitive(IntVec{1, 0, 0}));
  CHECK_THROWS_AS(is_primitive(IntVec{0, 0}), std::invalid_argument);
}

TEST_CASE("divisibility examples and invariance") {
  CHECK(divisibility(kUNeg2, IntVec{0, 0, 1}) == 2);
  CHECK(divisibility(kUNeg2, IntVec{1, -1, 0}) == 1);
  CHECK(divisibility(QuadLattice(IntMat{{1, 0}, {0, -1}}), IntVec{1, 0}) == 1);
  CHECK_THROWS_AS(divisibility(kU, IntVec{0, 0}), std::invalid_argument);
}

TEST_CASE("reflections: spec cases") {
  QuadLattice L(IntMat{{2, 0}, {0, -2}});
  CHECK(reflection(L, IntVec{0, 1}).matrix() == IntMat{{1, 0}, {0, -1}});
  QuadLattice L4(IntMat{{2, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -2, 0}, {0, 0, 0, -2}});
  IntMat expect = IntMat::identity(4);
  expect(1, 1) = -1;
  CHECK(reflection(L4, IntVec{0, 1, 0, 0}).matrix() == expect);
  CHECK_THROWS_AS(reflection(L, IntVec{1, 1}), DomainError);  // isotropic
}

TEST_CASE("reflection properties over random lattices, exact") {
  std::mt19937 rng(42);
  int done = 0;
  while (done < 500) {
    std::size_t rank = 2 + rng() % 4;
    QuadLattice L = random_lattice(rng, rank);
    IntVec z = random_vec(rng, rank, 3);
    if (is_zero(z)) continue;
    if (!reflection_is_integral(L, z)) continue;
    Isometry s = reflection(L, z);
    CHECK(is_isometry(L, s.matrix()));
    CHECK(mul(s.matrix(), s.matrix()) == IntMat::identity(rank));
    CHECK(s.apply(z) == neg(z));
    // fixes the orthogonal hyperplane pointwise
    IntVec x = random_vec(rng, rank, 3);
    if (L.form(x, z) == 0) CHECK(s.apply(x) == x);
    // preserves square and divisibility of arbitrary vectors
    if (!is_zero(x)) {
      CHECK(L.square(s.apply(x)) == L.square(x));
      CHECK(divisibility(L, s.apply(x)) == divisibility(L, x));
    }
    ++done;
  }
}

TEST_CASE("is_isometry") {
  CHECK(is_isometry(kU, IntMat::identity(2)));
  CHECK_FALSE(is_isometry(QuadLattice(IntMat{{1, 0}, {0, -1}}), IntMat{{2, 0}, {0, 1}}));
  // swapping the two U coordinates is an isometry of U + <-2>
  CHECK(is_isometry(kUNeg2, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
}

TEST_CASE("orthogonal complements") {
  SublatticeBasis oc = orthogonal_complement(kMink3, IntVec{0, 0, 1});
  REQUIRE(oc.basis.cols() == 2);
  CHECK(signature_of(oc.gram) == Signature{1, 1, 0});
  CHECK(abs(det(oc.gram)) == 1);

  SublatticeBasis oc2 = orthogonal_complement(kMink3, IntVec{0, 1, 1});
  REQUIRE(oc2.basis.cols() == 2);
  CHECK(det(oc2.gram) == -2);  // congruent to diag(1,-2)
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(kMink3.form(oc2.basis.col(j), IntVec{0, 1, 1}) == 0);

  SublatticeBasis oc3 = orthogonal_complement(QuadLattice(IntMat{{2, 0}, {0, -2}}), IntVec{0, 1});
  REQUIRE(oc3.basis.cols() == 1);
  CHECK(oc3.gram(0, 0) == 2);
}

TEST_CASE("orthogonal complement extends to finite index") {
  // complement basis plus z spans a finite-index sublattice: nonzero det
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t rank = 2 + rng() % 3;
    QuadLattice L = random_lattice(rng, rank);
    IntVec z = random_vec(rng, rank, 3);
    if (is_zero(z) || L.square(z) == 0) continue;
    SublatticeBasis oc = orthogonal_complement(L, z);
    REQUIRE(oc.basis.cols() == rank - 1);
    IntMat full(rank, rank);
    for (std::size_t j = 0; j + 1 < rank; ++j)
      for (std::size_t i = 0; i < rank; ++i) full(i, j) = oc.basis(i, j);
    for (std::size_t i = 0; i < rank; ++i) full(i, rank - 1) = z[i];
    CHECK(det(full) != 0);
  }
}

TEST_CASE("positive cone components") {
  CHECK(same_positive_component(kMink3, IntVec{1, 0, 0}, IntVec{2, 1, 0}));
  CHECK_FALSE(same_positive_component(kMink3, IntVec{1, 0, 0}, IntVec{-1, 0, 0}));
  CHECK_THROWS_AS(same_positive_component(kMink3, IntVec{1, 1, 0}, IntVec{1, 0, 0}), DomainError);

  // equivalence on random positive triples, plus convexity along segments
  std::mt19937 rng(3);
  int done = 0;
  while (done < 300) {
    RatVec x = to_rat(random_vec(rng, 3, 5));
    RatVec y = to_rat(random_vec(rng, 3, 5));
    RatVec z = to_rat(random_vec(rng, 3, 5));
    if (kMink3.square(x) <= 0 || kMink3.square(y) <= 0 || kMink3.square(z) <= 0) continue;
    bool xy = same_positive_component(kMink3, x, y);
    bool yz = same_positive_component(kMink3, y, z);
    bool xz = same_positive_component(kMink3, x, z);
    CHECK(same_positive_component(kMink3, x, x));
    CHECK(xy == same_positive_component(kMink3, y, x));
    if (xy && yz) CHECK(xz);
    if (xy) {
      for (int num = 1; num < 4; ++num) {
        Rat t(num, 4);
        RatVec mid(3);
        for (int i = 0; i < 3; ++i) mid[i] = t * x[i] + (1 - t) * y[i];
        REQUIRE(kMink3.square(mid) > 0);
        CHECK(same_positive_component(kMink3, mid, x));
      }
    }
    ++done;
  }
}

TEST_CASE("wall canonicalization is a total choice on +/- pairs") {
  IntVec h{1, 0, 0};
  CHECK(wall_canonical(kMink3, h, IntVec{-1, 1, 1}) == IntVec{1, -1, -1});
  CHECK(wall_canonical(kMink3, h, IntVec{0, 1, 0}) == IntVec{0, 1, 0});
  CHECK(wall_canonical(kMink3, h, IntVec{0, -1, 0}) == IntVec{0, 1, 0});
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    IntVec z = random_vec(rng, 3, 4);
    if (is_zero(z)) continue;
    CHECK(wall_canonical(kMink3, h, z) == wall_canonical(kMink3, h, neg(z)));
  }
}

TEST_CASE("degenerate gram rejected by operations that need it") {
  QuadLattice D(IntMat{{0, 0}, {0, -2}});
  CHECK_THROWS_AS(reflection(D, IntVec{0, 1}), DomainError);
  CHECK_THROWS_AS(same_positive_component(D, IntVec{1, 0}, IntVec{1, 0}), DomainError);
  CHECK(D.signature() == Signature{0, 1, 1});  // signature itself is fine
}
