#pragma once

// Generator-specified arithmetic groups and orbit decomposition of wall
// vectors. The group is given by explicit isometry generators (reflections
// and/or user matrices); orbit identification is a breadth-first closure over
// sign-canonicalized vectors inside a height window. Merges are certain;
// distinctness of classes is certified only when invariants (square,
// divisibility) separate them.

#include "conekit/enumerate.hpp"
#include "conekit/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace conekit {

struct ClosurePolicy {
  int word_cap = 4;          // word length bound for stabilizer/equivalence searches
  Int height_cap = 0;        // q(h, v) bound for orbit BFS exploration
  long max_nodes = 200000;   // safety valve; overflow flags the report as capped
};

class GroupSpec {
 public:
  GroupSpec(const QuadLattice& L, const std::vector<IntMat>& generators, std::string name,
            ClosurePolicy policy)
      : name_(std::move(name)), policy_(policy) {
    for (const IntMat& m : generators) {
      Isometry g = Isometry::checked(L, m);
      push_unique(g);
      push_unique(g.inverse());
    }
  }

  const std::vector<Isometry>& generators() const { return gens_; }
  const std::string& name() const { return name_; }
  const ClosurePolicy& policy() const { return policy_; }
  bool empty() const { return gens_.empty(); }

 private:
  void push_unique(const Isometry& g) {
    for (const auto& h : gens_)
      if (h == g) return;
    gens_.push_back(g);
  }

  std::vector<Isometry> gens_;
  std::string name_;
  ClosurePolicy policy_;
};

/// Group generated by all integral reflections in the enumerated negative
/// vectors of the given squares. Vectors whose reflection is not integral are
/// skipped. An empty generator list is allowed.
inline GroupSpec reflection_group(const QuadLattice& L, const std::vector<Int>& d_list,
                                  const EnumWindow& window, ClosurePolicy policy) {
  std::vector<IntMat> gens;
  for (const Int& d : d_list) {
    EnumWindow w = window;
    w.square = d;
    for (const IntVec& z : enum_negative_primitive(L, w)) {
      if (!reflection_is_integral(L, z)) continue;
      gens.push_back(reflection(L, z).matrix());
    }
  }
  std::string name = "reflections(" + L.label() + ")";
  return GroupSpec(L, gens, name, policy);
}

enum class OrbitStatus { complete_within_window, capped };

struct OrbitClass {
  IntVec representative;            // lexicographically minimal member found
  long members_found = 0;           // distinct canonical vectors reached
  long input_members = 0;           // how many of the input vectors lie here
  Int square;
  Int divisibility;
};

struct OrbitReport {
  std::vector<OrbitClass> classes;
  OrbitStatus status = OrbitStatus::complete_within_window;
  ClosurePolicy caps;
  /// true when every pair of classes differs in (square, divisibility), so
  /// the class count is exact rather than an upper bound.
  bool separated_by_invariants = false;
};

namespace detail {

class UnionFind {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[b < a ? a : b] = b < a ? b : a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Partition the input vectors (all primitive, nonzero) into orbit classes
/// under the group, exploring canonical images whose pairing with the anchor
/// stays within the policy height cap.
inline OrbitReport orbit_decompose(const QuadLattice& L, const std::vector<IntVec>& vectors,
                                   const GroupSpec& G, const IntVec& anchor) {
  L.check_dim(anchor);
  OrbitReport report;
  report.caps = G.policy();
  if (vectors.empty()) return report;

  std::map<IntVec, int> index;
  std::vector<IntVec> found;
  detail::UnionFind uf;
  std::deque<int> queue;
  std::vector<int> input_ids;

  auto intern = [&](IntVec v) -> int {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    int id = uf.make();
    index.emplace(v, id);
    found.push_back(std::move(v));
    queue.push_back(id);
    return id;
  };

  for (const IntVec& v : vectors) {
    if (is_zero(v)) throw std::invalid_argument("orbit_decompose: zero vector");
    if (!is_primitive(v)) throw std::invalid_argument("orbit_decompose: imprimitive vector");
    input_ids.push_back(intern(wall_canonical(L, anchor, v)));
  }

  long processed = 0;
  while (!queue.empty()) {
    if (processed >= G.policy().max_nodes) {
      report.status = OrbitStatus::capped;
      break;
    }
    int id = queue.front();
    queue.pop_front();
    ++processed;
    IntVec v = found[id];
    for (const Isometry& g : G.generators()) {
      IntVec w = wall_canonical(L, anchor, g.apply(v));
      if (L.form(anchor, w) > G.policy().height_cap) continue;  // outside the window
      uf.unite(id, intern(std::move(w)));
    }
  }

  // assemble classes over the union of inputs and reached vectors
  std::map<int, OrbitClass> by_root;
  for (std::size_t i = 0; i < found.size(); ++i) {
    int root = uf.find(static_cast<int>(i));
    auto [it, fresh] = by_root.try_emplace(root);
    OrbitClass& c = it->second;
    if (fresh || found[i] < c.representative) c.representative = found[i];
    ++c.members_found;
  }
  for (int id : input_ids) ++by_root[uf.find(id)].input_members;

  for (auto& [root, c] : by_root) {
    if (c.input_members == 0) continue;  // cannot happen: BFS is seeded from inputs
    c.square = L.square(c.representative);
    c.divisibility = conekit::divisibility(L, c.representative);
    report.classes.push_back(std::move(c));
  }
  std::sort(report.classes.begin(), report.classes.end(),
            [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });

  report.separated_by_invariants = true;
  for (std::size_t i = 0; i < report.classes.size() && report.separated_by_invariants; ++i)
    for (std::size_t j = i + 1; j < report.classes.size(); ++j)
      if (report.classes[i].square == report.classes[j].square &&
          report.classes[i].divisibility == report.classes[j].divisibility) {
        report.separated_by_invariants = false;
        break;
      }
  return report;
}

/// All distinct group elements expressible as words of length <= cap in the
/// generators. Always contains the identity; closed under inverses because
/// the generator list is.
inline std::vector<Isometry> group_ball(const QuadLattice& L, const GroupSpec& G, int word_cap,
                                        long max_elements = 200000) {
  std::vector<Isometry> elems;
  std::map<std::vector<IntVec>, int> seen;  // matrix as column list, cheap total order
  auto key = [&](const IntMat& m) {
    std::vector<IntVec> k;
    for (std::size_t j = 0; j < m.cols(); ++j) k.push_back(m.col(j));
    return k;
  };
  Isometry id = Isometry::checked(L, IntMat::identity(L.rank()));
  elems.push_back(id);
  seen.emplace(key(id.matrix()), 0);
  std::size_t layer_begin = 0;
  for (int len = 1; len <= word_cap; ++len) {
    std::size_t layer_end = elems.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const Isometry& g : G.generators()) {
        IntMat m = mul(g.matrix(), elems[i].matrix());
        if (seen.count(key(m))) continue;
        if (static_cast<long>(elems.size()) >= max_elements) return elems;
        Isometry e = Isometry::checked(L, m);
        seen.emplace(key(e.matrix()), static_cast<int>(elems.size()));
        elems.push_back(std::move(e));
      }
    }
    layer_begin = layer_end;
    if (layer_begin == elems.size()) break;  // group exhausted (finite)
  }
  return elems;
}

enum class FixSemantics { vector, wall };

/// Group words of length <= policy.word_cap fixing the target: exactly
/// (vector semantics) or as an unordered pair {z, -z} (wall semantics).
inline std::vector<Isometry> stabilizer_search(const QuadLattice& L, const IntVec& target,
                                               const GroupSpec& G, FixSemantics semantics) {
  L.check_dim(target);
  std::vector<Isometry> out;
  for (const Isometry& g : group_ball(L, G, G.policy().word_cap)) {
    IntVec img = g.apply(target);
    bool fixes = img == target || (semantics == FixSemantics::wall && img == neg(target));
    if (fixes) out.push_back(g);
  }
  return out;
}

}  // namespace conekit
