#include <doctest.h>

#include <cstdint>
#include <set>

#include "multiest/trees.hpp"

using namespace multiest;

namespace {

// Independent count oracle: a(1)=1, a(n) = sum over compositions of n into
// >= 2 parts of the product of a(part). Memoized.
std::uint64_t count_oracle(int n) {
  static std::vector<std::uint64_t> memo{0, 1};
  while (static_cast<int>(memo.size()) <= n) {
    const int m = static_cast<int>(memo.size());
    std::uint64_t total = 0;
    // Recursive composition walk with running product.
    auto rec = [&](auto&& self, int rest, int parts, std::uint64_t prod) -> void {
      if (rest == 0) {
        if (parts >= 2) total += prod;
        return;
      }
      for (int p = 1; p <= rest; ++p) self(self, rest - p, parts + 1, prod * memo[p]);
    };
    rec(rec, m, 0, 1);
    memo.push_back(total);
  }
  return memo[n];
}

RootedTree leaf() { return RootedTree::leaf_tree(); }

// Figure-3-style left tree: root sons {1,2,3},{4},{5,6}; the first block has
// sons {1},{2,3}. Region: (|I3| ~ |I4| >> |I1|,|I2|,|I5|) and (|I1| >> |I2|).
RootedTree figure3_left() {
  auto t123 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});
  auto t56 = RootedTree::join({leaf(), leaf()});
  return RootedTree::join({t123, leaf(), t56});
}

}  // namespace

TEST_CASE("enumeration counts: little Schroeder numbers, n=1..6") {
  const std::vector<std::uint64_t> expect{1, 1, 3, 11, 45, 197};
  for (int n = 1; n <= 6; ++n) {
    auto trees = enumerate_trees(n);
    CHECK(trees.size() == expect[static_cast<std::size_t>(n - 1)]);
    CHECK(trees.size() == count_oracle(n));
    // Duplicate-free.
    std::set<std::string> parens;
    for (const auto& t : trees) parens.insert(t.to_paren());
    CHECK(parens.size() == trees.size());
  }
  CHECK_THROWS_AS(enumerate_trees(9), guard_error);
}

TEST_CASE("structural invariants: contiguous runs, >=2 sons, levels") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& G : enumerate_trees(n)) {
      CHECK(index_interval(G, G.root()) == std::make_pair(1, n));
      for (int u : G.internal_vertices()) {
        const auto& nu = G.node(u);
        CHECK(nu.children.size() >= 2);
        // I_u is the disjoint concatenation of the sons' runs.
        int expect_l = nu.l;
        for (int c : nu.children) {
          CHECK(G.node(c).l == expect_l);
          CHECK(G.node(c).level == nu.level + 1);
          expect_l = G.node(c).r + 1;
        }
        CHECK(expect_l == nu.r + 1);
      }
    }
  }
}

TEST_CASE("index_interval on the Figure-3-style tree") {
  auto G = figure3_left();
  CHECK(G.n_leaves() == 6);
  CHECK(G.height() == 3);
  std::set<std::pair<int, int>> runs;
  for (int u : G.internal_vertices()) runs.insert(index_interval(G, u));
  CHECK(runs.count({1, 6}));
  CHECK(runs.count({1, 3}));
  CHECK(runs.count({2, 3}));
  CHECK(runs.count({5, 6}));
  // Leaves report singleton runs.
  for (std::size_t v = 0; v < G.vertex_count(); ++v) {
    if (G.is_leaf(static_cast<int>(v))) {
      auto [l, r] = index_interval(G, static_cast<int>(v));
      CHECK(l == r);
    }
  }
  CHECK_THROWS_AS(index_interval(G, 99), config_error);
}

TEST_CASE("region_membership: n=2 is the whole simplex") {
  auto G = enumerate_trees(2)[0];
  RegionParams rp;
  for (double x2 : {0.001, 0.5, 100.0}) {
    RegionQuery q{{0.0, x2}};
    CHECK(region_membership(G, q, rp));
  }
}

TEST_CASE("region_membership: Figure-3 region with explicit gaps") {
  auto G = figure3_left();
  RegionParams rp;
  rp.c_sep = 4;
  rp.c_comp = 2;
  CHECK(region_membership_gaps(G, {8, 1, 64, 64, 1}, rp));
  CHECK_FALSE(region_membership_gaps(G, {1, 8, 64, 64, 1}, rp));
  // |I3| ~ |I4| violated.
  CHECK_FALSE(region_membership_gaps(G, {8, 1, 64, 256, 1}, rp));
  CHECK_THROWS_AS(region_membership_gaps(G, {1, 2, 3}, rp), config_error);
}

TEST_CASE("region_membership: scale invariance") {
  RegionParams rp;
  auto trees = enumerate_trees(4);
  const std::vector<double> xi{0.0, 0.3, 0.31, 5.0};
  for (const auto& G : trees) {
    for (double c : {0.01, 1.0, 64.0}) {
      for (double t : {-3.0, 0.0, 11.0}) {
        std::vector<double> moved;
        for (double x : xi) moved.push_back(c * x + t);
        CHECK(region_membership(G, {xi}, rp) == region_membership(G, {moved}, rp));
      }
    }
  }
}

TEST_CASE("shares_cut") {
  auto star3 = RootedTree::join({leaf(), leaf(), leaf()});
  auto left3 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});   // {1}|{2,3}
  auto right3 = RootedTree::join({RootedTree::join({leaf(), leaf()}), leaf()});  // {1,2}|{3}
  CHECK(shares_cut(left3, left3) == 1);
  CHECK(shares_cut(right3, right3) == 2);
  CHECK_FALSE(shares_cut(left3, right3).has_value());
  CHECK(shares_cut(star3, left3) == 1);
  CHECK(shares_cut(star3, right3) == 2);
  // Star paired with any G shares G's smallest root cut.
  for (int n = 3; n <= 5; ++n) {
    std::vector<RootedTree> leaves(static_cast<std::size_t>(n), leaf());
    auto star = RootedTree::join(leaves);
    for (const auto& G : enumerate_trees(n)) {
      const auto& root = G.node(G.root());
      int smallest = G.node(root.children.front()).r;
      CHECK(shares_cut(G, star) == smallest);
    }
  }
}

TEST_CASE("retract_pair: n=3 textbook case collapses to the star tree") {
  auto left3 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});
  auto right3 = RootedTree::join({RootedTree::join({leaf(), leaf()}), leaf()});
  auto [r1, r2] = retract_pair(left3, right3);
  auto star3 = RootedTree::join({leaf(), leaf(), leaf()});
  CHECK(r1.to_paren() == star3.to_paren());
  CHECK(r2.to_paren() == star3.to_paren());
  CHECK(shares_cut(r1, r2).has_value());
  CHECK_THROWS_AS(retract_pair(left3, left3), config_error);
}

TEST_CASE("retract_pair: postconditions hold exhaustively for n <= 5") {
  for (int n = 3; n <= 5; ++n) {
    auto trees = enumerate_trees(n);
    for (const auto& G1 : trees) {
      for (const auto& G2 : trees) {
        if (shares_cut(G1, G2)) continue;
        auto s_of = [&](const RootedTree& G) {
          std::set<int> s;
          const auto& root = G.node(G.root());
          for (std::size_t i = 0; i + 1 < root.children.size(); ++i) {
            s.insert(G.node(root.children[i]).r);
          }
          return s;
        };
        const auto S1 = s_of(G1);
        const auto S2 = s_of(G2);
        auto [r1, r2] = retract_pair(G1, G2);
        CHECK(shares_cut(r1, r2).has_value());
        for (const RootedTree* R : {&r1, &r2}) {
          // Selected root blocks partition {1..n}.
          const auto& root = R->node(R->root());
          int expect = 1;
          for (int c : root.children) {
            CHECK(R->node(c).l == expect);
            expect = R->node(c).r + 1;
          }
          CHECK(expect == n + 1);
          // S1 and S2 are among the retract's root cuts (excluding n).
          const auto cuts = s_of(*R);
          for (int v : S1) CHECK(cuts.count(v));
          for (int v : S2) CHECK(cuts.count(v));
        }
      }
    }
  }
}

TEST_CASE("coverage_report: n=2 always covered; n=3 trichotomy") {
  RegionParams rp;
  rp.c_sep = 4;
  rp.c_comp = 4;
  auto rep2 = coverage_report(2, rp, 2000, 1);
  CHECK(rep2.uncovered == 0);

  auto rep3 = coverage_report(3, rp, 100000, 2);
  CHECK(rep3.uncovered == 0);
  CHECK(rep3.per_tree_hits.size() == 3);

  RegionParams gapy = rp;
  gapy.c_comp = 2;  // t in (2,4) covered by nothing
  auto rep3b = coverage_report(3, gapy, 100000, 3);
  CHECK(rep3b.uncovered > 0);

  // Determinism per seed.
  auto again = coverage_report(3, rp, 5000, 7);
  auto again2 = coverage_report(3, rp, 5000, 7);
  CHECK(again.per_tree_hits == again2.per_tree_hits);
  CHECK(again.uncovered == again2.uncovered);
}

TEST_CASE("serialization: paren strings") {
  auto left3 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});
  CHECK(left3.to_paren() == "(1 (2 3))");
  auto right3 = RootedTree::join({RootedTree::join({leaf(), leaf()}), leaf()});
  CHECK(right3.to_paren() == "((1 2) 3)");
}
