#include <doctest.h>

#include <cmath>
#include <random>

#include "multiest/symbols.hpp"

using namespace multiest;

namespace {

RootedTree leaf() { return RootedTree::leaf_tree(); }

std::vector<double> xi_from_gaps(const std::vector<double>& gaps) {
  std::vector<double> xi{0.0};
  for (double g : gaps) xi.push_back(xi.back() + g);
  return xi;
}

}  // namespace

TEST_CASE("smoothstep: endpoint values, monotonicity, C^s flatness") {
  for (int s : {1, 2, 4, 6}) {
    CHECK(smoothstep(s, -0.5) == 0.0);
    CHECK(smoothstep(s, 0.0) == 0.0);
    CHECK(smoothstep(s, 1.0) == 1.0);
    CHECK(smoothstep(s, 2.0) == 1.0);
    CHECK(smoothstep(s, 0.5) == doctest::Approx(0.5));  // odd symmetry about midpoint
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double v = smoothstep(s, i / 100.0);
      CHECK(v + 1e-15 >= prev);
      prev = v;
    }
  }
  // Endpoint derivatives vanish through order s (finite differences).
  const double h = 1e-4;
  for (int s : {2, 4}) {
    const double d1 = (smoothstep(s, h) - smoothstep(s, 0.0)) / h;
    CHECK(std::abs(d1) < 1e-5);
    const double d2 = (smoothstep(s, 2 * h) - 2 * smoothstep(s, h) + smoothstep(s, 0.0)) / (h * h);
    CHECK(std::abs(d2) < 1e-2);
  }
  CHECK_THROWS_AS(smoothstep(-1, 0.5), config_error);
}

TEST_CASE("Bump1D: support, plateau, range, derivative scaling") {
  Bump1D b(0.0, 1.0, 0.8, 0.4, 6);
  CHECK(b(0.5) == 1.0);
  CHECK(b(0.5 + 0.19) == 1.0);   // inside plateau (half-width 0.2)
  CHECK(b(0.5 + 0.41) == 0.0);   // outside support (half-width 0.4)
  CHECK(b(-1.0) == 0.0);
  for (int i = 0; i <= 200; ++i) {
    const double v = b(i / 200.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // |phi'| <= C / |I|: doubling the interval halves the max slope.
  auto max_slope = [](const Bump1D& f, double lo, double hi) {
    double m = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const double x = lo + (hi - lo) * i / 4000.0;
      const double h = (hi - lo) / 8000.0;
      m = std::max(m, std::abs(f(x + h) - f(x)) / h);
    }
    return m;
  };
  Bump1D wide(0.0, 2.0, 0.8, 0.4, 6);
  const double s1 = max_slope(b, 0.0, 1.0);
  const double s2 = max_slope(wide, 0.0, 2.0);
  CHECK(s2 == doctest::Approx(s1 / 2).epsilon(0.05));

  CHECK_THROWS_AS(Bump1D(0.0, 1.0, 0.5, 0.6, 6), config_error);  // plateau >= support
  CHECK_THROWS_AS(Bump1D(1.0, 0.0, 0.8, {}, 6), config_error);
}

TEST_CASE("halfplane_symbol: values and errors") {
  RegionParams rp;
  auto sigma = halfplane_symbol(1.0, 1.0, rp, 8);
  CHECK(sigma.eval({0.0, 10.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigma.eval({10.0, 0.0}) == 0.0);
  CHECK(sigma.eval({3.0, 3.0}) == 0.0);  // on Gamma
  // Weighted line a = (2, 1): 2*x1 < x2.
  auto w = halfplane_symbol(2.0, 1.0, rp, 8);
  CHECK(w.eval({1.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.eval({1.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(halfplane_symbol(1.0, 1.0, rp, -1), config_error);
  CHECK_THROWS_AS(halfplane_symbol(0.0, 1.0, rp, 8), config_error);
}

TEST_CASE("make_m_avec: region values and support confinement") {
  RegionParams rp;
  auto m2 = make_m_avec({1.0, 1.0}, rp, 8);
  CHECK(m2.eval({0.0, 7.3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2.eval({7.3, 0.0}) == 0.0);

  auto m3 = make_m_avec({1.0, 1.0, 1.0}, rp, 8);
  CHECK(m3.eval({0.0, 1.0, 2.0}) == doctest::Approx(1.0).epsilon(1e-6));
  // Wildly incomparable gaps die under the comparability windows.
  CHECK(m3.eval({0.0, 1.0, 1.0 + 1e6}) == 0.0);

  // m = 1 on R_a for d <= 4: random comparable gap vectors.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-8.0, 8.0);
  for (int d : {2, 3, 4}) {
    auto m = make_m_avec(std::vector<double>(static_cast<std::size_t>(d), 1.0), rp, 8);
    std::uniform_real_distribution<double> ratio(0.0, std::log2(rp.c_comp));
    for (int t = 0; t < 2500; ++t) {
      const double base = std::exp2(lg(rng));
      std::vector<double> gaps{base};
      for (int i = 0; i + 2 < d; ++i) gaps.push_back(base * std::exp2(ratio(rng)));
      CHECK(m.eval(xi_from_gaps(gaps)) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(make_m_avec({1.0}, rp, 8), config_error);
}

TEST_CASE("make_m_G: base case, trichotomy values, guard") {
  RegionParams rp;
  auto G2 = enumerate_trees(2)[0];
  auto m = make_m_G(G2, rp, 8);
  for (double x2 : {1e-6, 0.3, 1e7}) CHECK(m.eval({0.0, x2}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.eval({1.0, 0.0}) == 0.0);

  // Root cut dominating tree ((1 2) 3): big last gap.
  auto right3 = RootedTree::join({RootedTree::join({leaf(), leaf()}), leaf()});
  auto mr = make_m_G(right3, rp, 8);
  CHECK(mr.eval({0.0, 0.01, 1.01}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mr.eval({0.0, 1.0, 1.01}) == 0.0);

  // Mirror tree (1 (2 3)): big first gap.
  auto left3 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});
  auto ml = make_m_G(left3, rp, 8);
  CHECK(ml.eval({0.0, 1.0, 1.01}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ml.eval({0.0, 0.01, 1.01}) == 0.0);

  // Star: comparable gaps.
  auto star3 = RootedTree::join({leaf(), leaf(), leaf()});
  auto ms = make_m_G(star3, rp, 8);
  CHECK(ms.eval({0.0, 1.0, 2.5}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ms.eval({0.0, 1.0, 1e7}) == 0.0);

  // m_G = 1 on R_G(rp) across all trees for n in {3, 4}.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lg(-9.0, 9.0);
  for (int n : {3, 4}) {
    auto trees = enumerate_trees(n);
    std::vector<SymbolExpr> syms;
    for (const auto& G : trees) syms.push_back(make_m_G(G, rp, 8));
    int checked = 0;
    for (int t = 0; t < 20000 && checked < 2000; ++t) {
      std::vector<double> gaps;
      for (int i = 0; i + 1 < n; ++i) gaps.push_back(std::exp2(lg(rng)));
      auto xi = xi_from_gaps(gaps);
      for (std::size_t g = 0; g < trees.size(); ++g) {
        if (region_membership(trees[g], {xi}, rp)) {
          CHECK(syms[g].eval(xi) == doctest::Approx(1.0).epsilon(1e-6));
          ++checked;
        }
      }
    }
    CHECK(checked >= 500);
  }

  std::vector<RootedTree> seven(7, leaf());
  CHECK_THROWS_AS(make_m_G(RootedTree::join(seven), rp, 8), guard_error);
}

TEST_CASE("telescope: n=2 exact, n=3 partition of unity, refusal") {
  RegionParams rp;
  rp.c_sep = 4.0;
  rp.c_comp = 4.0;
  auto t2 = telescope(2, rp, 8);
  CHECK(t2.summands.size() == 1);
  CHECK(t2.sum_summands({0.0, 5.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t2.residual({0.0, 5.0}) == doctest::Approx(0.0));

  auto t3 = telescope(3, rp, 8);
  CHECK(t3.summands.size() == 3);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lg(-9.0, 9.0);
  int accepted = 0;
  for (int t = 0; t < 30000 && accepted < 10000; ++t) {
    std::vector<double> gaps{std::exp2(lg(rng)), std::exp2(lg(rng))};
    auto xi = xi_from_gaps(gaps);
    // Algebraic identity everywhere.
    CHECK(std::abs(t3.sum_summands(xi) + t3.residual(xi) - t3.chi.eval(xi)) < 1e-12);
    // Stored vs recursive m^i.
    for (std::size_t i = 0; i <= 3; ++i) {
      CHECK(std::abs(t3.m_level_stored(i, xi) - t3.m_level_recursive(i, xi)) < 1e-12);
    }
    ++accepted;
    CHECK(std::abs(t3.sum_summands(xi) - 1.0) < 1e-6);
  }
  CHECK(accepted == 10000);

  RegionParams gapy = rp;
  gapy.c_comp = 2.0;  // coverage hole between the ~ and >> bands
  CHECK_THROWS_AS(telescope(3, gapy, 8), config_error);
}

TEST_CASE("product_closure_check") {
  RegionParams rp;
  auto star3 = RootedTree::join({leaf(), leaf(), leaf()});
  auto same = product_closure_check(star3, star3, rp, 8, 5000, 3);
  CHECK(same.candidate_paren == star3.to_paren());
  CHECK(same.support_violations == 0);
  CHECK(same.nonzero_samples > 0);
  CHECK(same.max_scale_gap <= 3);  // surviving scales match

  auto left3 = RootedTree::join({leaf(), RootedTree::join({leaf(), leaf()})});
  auto right3 = RootedTree::join({RootedTree::join({leaf(), leaf()}), leaf()});
  // Disjoint region types: the product vanishes identically.
  auto cross = product_closure_check(left3, right3, rp, 8, 5000, 4);
  CHECK(cross.nonzero_samples == 0);
  CHECK(cross.support_violations == 0);
  CHECK(cross.candidate_paren == star3.to_paren());  // retract pair
}

TEST_CASE("fixing_expand: short circuit, residual, coefficient decay") {
  std::vector<Bump1D> bumps{Bump1D(0.0, 1.0, 0.8, 0.4, 6), Bump1D(0.5, 1.5, 0.8, 0.4, 6)};

  // Outer identically 1 on the reachable sum range.
  Bump1D one(-8.0, 12.0, 0.9, 0.8, 6);
  auto fx1 = fixing_expand(bumps, one, 8);
  CHECK(fx1.single_term);
  CHECK(fx1.coeffs.size() == 1);
  for (double x1 : {0.2, 0.5, 0.7}) {
    for (double x2 : {0.7, 1.0, 1.3}) {
      CHECK(fx1.residual({x1, x2}) < 1e-12);
    }
  }

  // Generic outer at trunc 8, smoothness 6.
  Bump1D outer(0.55, 2.45, 0.98, 0.02, 6);
  auto fx = fixing_expand(bumps, outer, 8);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const double x1 = 0.0 + i / 63.0;
      const double x2 = 0.5 + j / 63.0;
      worst = std::max(worst, fx.residual({x1, x2}));
    }
  }
  CHECK(worst < 1e-4);

  // Coefficient decay faster than 2^{-s} per octave.
  auto fx16 = fixing_expand(bumps, outer, 16);
  const double c4 = std::max(fx16.coeff_magnitude(4), fx16.coeff_magnitude(5));
  const double c8 = std::max(fx16.coeff_magnitude(8), fx16.coeff_magnitude(9));
  CHECK(c8 / c4 < std::exp2(-6.0));

  // Residual shrinks as trunc doubles.
  auto res_at = [&](int trunc) {
    auto f = fixing_expand(bumps, outer, trunc);
    double m = 0.0;
    for (int i = 0; i < 32; ++i) {
      for (int j = 0; j < 32; ++j) {
        m = std::max(m, f.residual({i / 31.0, 0.5 + j / 31.0}));
      }
    }
    return m;
  };
  const double r4 = res_at(4), r8 = res_at(8), r16 = res_at(16);
  CHECK(r8 <= 2.0 * r4);
  CHECK(r16 <= 2.0 * r8);
  CHECK(r16 < r4);

  std::vector<Bump1D> toofat{Bump1D(0.0, 1.0, 0.95, 0.4, 6)};
  CHECK_THROWS_AS(fixing_expand(toofat, outer, 8), config_error);
}
