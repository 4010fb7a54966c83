#include <catch2/catch_amalgamated.hpp>

#include "conekit/enumerate.hpp"
#include "conekit/parallel.hpp"

#include <algorithm>

using namespace conekit;

namespace {

/// Independent oracle: exhaustive box search with an a-priori coordinate
/// bound. F(z) = 2 q(h,z)^2 / q(h,h) - q(z,z) is positive definite, and every
/// window solution satisfies F(z) <= 2H^2/Q + d, so |z_i| is bounded by
/// sqrt(Fmax * (F^-1)_ii).
std::vector<IntVec> brute_force_window(const QuadLattice& L, const EnumWindow& w,
                                       const Int& target) {
  std::size_t n = L.rank();
  Rat Q(L.square(w.anchor));
  IntVec gh = L.pairings(w.anchor);
  RatMat f(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      f(i, j) = Rat(2) * Rat(gh[i]) * Rat(gh[j]) / Q - Rat(L.gram()(i, j));
  Rat fmax = Rat(2) * Rat(w.height_bound) * Rat(w.height_bound) / Q - Rat(target);
  auto finv = inverse(f);
  REQUIRE(finv);
  std::vector<long> bound(n);
  for (std::size_t i = 0; i < n; ++i)
    bound[i] = floor_plus_sqrt(Rat(0), fmax * (*finv)(i, i)).convert_to<long>();

  std::vector<IntVec> out;
  IntVec z(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (is_zero(z)) return;
      if (L.square(z) != target) return;
      Int h = L.form(w.anchor, z);
      if (target == 0) {
        if (h <= 0 || h > w.height_bound) return;
      } else {
        if (abs(h) > w.height_bound) return;
      }
      if (!is_primitive(z)) return;
      out.push_back(wall_canonical(L, w.anchor, z));
      return;
    }
    for (long v = -bound[i]; v <= bound[i]; ++v) {
      z[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const QuadLattice kPresets[] = {
    QuadLattice(IntMat{{2, 0}, {0, -2}}, "diag:2,-2"),
    QuadLattice(IntMat{{0, 1}, {1, 0}}, "u"),
    QuadLattice(IntMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, "diag:1,-1,-1"),
    QuadLattice(IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}, "u-plus-neg2"),
    QuadLattice(IntMat{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}, "diag:1,-1,-1,-1"),
};

IntVec anchor_for(const QuadLattice& L) {
  if (L.label() == "u") return {1, 1};
  if (L.label() == "u-plus-neg2") return {1, 1, 0};
  IntVec a(L.rank());
  a[0] = 1;
  return a;
}

}  // namespace

TEST_CASE("spec examples for negative enumeration") {
  QuadLattice L(IntMat{{2, 0}, {0, -2}});
  CHECK(enum_negative_primitive(L, {{1, 0}, 2, 2}) == std::vector<IntVec>{{0, 1}});

  QuadLattice M(IntMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
  CHECK(enum_negative_primitive(M, {{1, 0, 0}, 0, 1}) ==
        std::vector<IntVec>{{0, 0, 1}, {0, 1, 0}});
  auto h1 = enum_negative_primitive(M, {{1, 0, 0}, 1, 1});
  CHECK(h1 == std::vector<IntVec>{{0, 0, 1}, {0, 1, 0}, {1, -1, -1}, {1, -1, 1}, {1, 1, -1}, {1, 1, 1}});
}

TEST_CASE("spec examples for isotropic enumeration") {
  QuadLattice M(IntMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
  auto cusps = enum_isotropic_primitive(M, {{1, 0, 0}, 1, 0});
  CHECK(cusps == std::vector<IntVec>{{1, -1, 0}, {1, 0, -1}, {1, 0, 1}, {1, 1, 0}});

  QuadLattice A(IntMat{{1, 0}, {0, -3}});
  CHECK(enum_isotropic_primitive(A, {{1, 0}, 10, 0}).empty());

  QuadLattice U(IntMat{{1, 0}, {0, -1}});
  CHECK(enum_isotropic_primitive(U, {{1, 0}, 1, 0}) == std::vector<IntVec>{{1, -1}, {1, 1}});
}

TEST_CASE("window and precondition errors") {
  QuadLattice L(IntMat{{2, 0}, {0, -2}});
  CHECK_THROWS_AS(enum_negative_primitive(L, {{1, 0}, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(enum_negative_primitive(L, {{0, 1}, 2, 2}), DomainError);  // negative anchor
  QuadLattice P(IntMat{{2, 0}, {0, 2}});
  CHECK_THROWS_AS(enum_negative_primitive(P, {{1, 0}, 2, 2}), DomainError);  // wrong signature
}

TEST_CASE("oracle equivalence across presets and windows") {
  for (const QuadLattice& L : kPresets) {
    IntVec h = anchor_for(L);
    for (int d = 1; d <= 4; ++d)
      for (int H = 0; H <= 3; ++H) {
        EnumWindow w{h, H, d};
        auto fast = enum_negative_primitive(L, w);
        auto slow = brute_force_window(L, w, Int(-d));
        INFO(L.label() << " d=" << d << " H=" << H);
        CHECK(fast == slow);
      }
    EnumWindow iso{h, 3, 0};
    CHECK(enum_isotropic_primitive(L, iso) == brute_force_window(L, iso, Int(0)));
  }
}

TEST_CASE("windows are monotone and outputs satisfy the exact constraints") {
  QuadLattice L(IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}, "u-plus-neg2");
  IntVec h{1, 1, 0};
  std::vector<IntVec> prev;
  for (int H = 0; H <= 6; ++H) {
    auto cur = enum_negative_primitive(L, {h, H, 2});
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    for (const auto& z : cur) {
      CHECK(is_primitive(z));
      CHECK(L.square(z) == -2);
      Int ht = L.form(h, z);
      CHECK(ht >= 0);
      CHECK(ht <= H);
    }
    prev = cur;
  }
}

TEST_CASE("worker count does not change enumeration output") {
  QuadLattice L(IntMat{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
  EnumWindow w{{1, 0, 0, 0}, 6, 3};
  set_worker_count(1);
  auto a = enum_negative_primitive(L, w);
  set_worker_count(8);
  auto b = enum_negative_primitive(L, w);
  set_worker_count(1);
  CHECK(a == b);
}
