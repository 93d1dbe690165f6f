#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "multiest/akns.hpp"

using namespace multiest;

namespace {

Potential gaussian(double center, cplx amp = cplx(1.0)) {
  return [center, amp](double y) { return amp * std::exp(-(y - center) * (y - center)); };
}

double max_component_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) d = std::max(d, std::abs(a[m] - b[m]));
  return d;
}

}  // namespace

TEST_CASE("zero potential decouples the system") {
  AknsSystem sys;
  sys.n = 3;
  sys.D = {1.0, 0.0, -1.0};
  sys.lambda = 2.0;
  std::vector<cplx> v0 = {cplx(1.0, 2.0), cplx(-0.5, 0.25), cplx(0.0, 1.0)};
  auto tr = solve(sys, 0.0, 4.0, 1000, v0);
  for (int k = 0; k < 3; ++k) {
    for (const cplx& z : tr.v[static_cast<std::size_t>(k)]) {
      CHECK(std::abs(z - v0[static_cast<std::size_t>(k)]) < 1e-12);
    }
  }
}

TEST_CASE("2x2 solution matches the closed-form antiderivative") {
  AknsSystem sys;
  sys.n = 2;
  sys.D = {1.0, -1.0};
  sys.lambda = 0.7;
  sys.entries[{1, 2}] = gaussian(3.0);
  const cplx C(1.0, 0.5), Ct(0.3, -0.2);
  auto tr = solve(sys, 0.0, 8.0, 1000, {Ct, C});
  for (std::size_t m : {250u, 625u, 1000u}) {
    const cplx ref = v1_closed_2x2(sys.entries[{1, 2}], 1.0, -1.0, 0.7, C, Ct, 0.0, tr.x[m]);
    CHECK(std::abs(tr.v[0][m] - ref) < 1e-6);
  }
}

TEST_CASE("3x3 first term matches the simplex double integral") {
  AknsSystem sys;
  sys.n = 3;
  sys.D = {1.5, 0.25, -1.0};
  sys.lambda = 1.3;
  sys.entries[{1, 2}] = gaussian(2.0);
  sys.entries[{2, 3}] = gaussian(4.0, cplx(0.5, 0.3));
  const cplx C(0.8, -0.6);
  auto tr = solve(sys, 0.0, 6.0, 1200, {cplx(0.0), cplx(0.0), C});
  for (std::size_t m : {400u, 800u, 1200u}) {
    const cplx ref = v1_term_3x3(sys.entries[{1, 2}], sys.entries[{2, 3}], sys.D, sys.lambda, C,
                                 0.0, tr.x[m]);
    CHECK(std::abs(tr.v[0][m] - ref) < 1e-5);
  }
}

TEST_CASE("bottom-up solve agrees with the generic coupled solve") {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    AknsSystem sys;
    sys.n = 3;
    sys.D = {0.5, -0.25, 1.75};
    sys.lambda = 0.5 + 0.1 * trial;
    for (auto [l, m] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
      const cplx c1(g(rng), g(rng)), c2(g(rng), g(rng));
      sys.entries[{l, m}] = [c1, c2](double y) {
        return c1 * std::cos(y) + c2 * std::sin(2.0 * y);
      };
    }
    std::vector<cplx> v0 = {cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    auto a = solve(sys, 0.0, 5.0, 1000, v0);
    auto b = solve_generic(sys, 0.0, 5.0, 1000, v0);
    for (int k = 0; k < 3; ++k) {
      CHECK(max_component_diff(a.v[static_cast<std::size_t>(k)], b.v[static_cast<std::size_t>(k)]) < 1e-6);
    }
  }
}

TEST_CASE("gauge covariance under a common diagonal shift") {
  AknsSystem sys;
  sys.n = 3;
  sys.D = {1.0, -0.5, 0.25};
  sys.lambda = 1.0;
  sys.entries[{1, 2}] = gaussian(1.5);
  sys.entries[{2, 3}] = gaussian(3.0, cplx(0.0, 1.0));
  std::vector<cplx> v0 = {cplx(0.1), cplx(1.0), cplx(0.5, 0.5)};
  auto a = solve(sys, 0.0, 5.0, 1000, v0);
  AknsSystem shifted = sys;
  for (double& d : shifted.D) d += 2.25;
  auto b = solve(shifted, 0.0, 5.0, 1000, v0);
  for (int k = 0; k < 3; ++k) {
    CHECK(max_component_diff(a.v[static_cast<std::size_t>(k)], b.v[static_cast<std::size_t>(k)]) < 1e-9);
  }
}

TEST_CASE("solve argument validation") {
  AknsSystem sys;
  sys.n = 2;
  sys.D = {1.0, -1.0};
  sys.entries[{1, 2}] = gaussian(0.0);
  CHECK_THROWS_AS(solve(sys, 0.0, 1.0, 999, {cplx(0.0), cplx(1.0)}), config_error);
  CHECK_THROWS_AS(solve(sys, 0.0, 1.0, 1000, {cplx(0.0)}), config_error);
  AknsSystem dup = sys;
  dup.D = {1.0, 1.0};
  CHECK_THROWS_AS(solve(dup, 0.0, 1.0, 1000, {cplx(0.0), cplx(1.0)}), config_error);
  AknsSystem lower = sys;
  lower.entries[{2, 1}] = gaussian(0.0);
  CHECK_THROWS_AS(solve(lower, 0.0, 1.0, 1000, {cplx(0.0), cplx(1.0)}), config_error);
}

TEST_CASE("carleson bound audit") {
  const std::size_t N = 1024;
  const double L = 16.0;
  const cplx C(0.9, 0.2), Ct(0.4, -0.1);

  GridFunction zero = from_preset(Preset::indicator(0.0, 0.0), N, L);
  auto rows0 = carleson_bound_check(zero, 1.0, -1.0, {0.5, 1.0}, C, Ct);
  for (const auto& r : rows0) CHECK(r.ratio <= 1.0 + 1e-6);

  GridFunction mode = from_preset(Preset::pure_mode(3), N, L);
  auto rows1 = carleson_bound_check(mode, 1.0, -1.0, {0.7}, C, Ct);
  CHECK(rows1[0].ratio <= 1.0 + 1e-6);
  CHECK(rows1[0].sup_v1 > 0.0);

  GridFunction f = from_preset(Preset::random_bandlimited(40, 2024), N, L);
  std::vector<double> lambdas;
  for (int t = 0; t < 32; ++t) lambdas.push_back(-4.0 + 0.25 * t + 0.01);
  double max_ratio = 0.0;
  for (const auto& r : carleson_bound_check(f, 1.0, -1.0, lambdas, C, Ct)) {
    CHECK(r.snap_error <= 0.5 * 2.0 * std::numbers::pi / (L * 2.0) + 1e-12);
    max_ratio = std::max(max_ratio, r.ratio);
  }
  CHECK(max_ratio <= 1.0 + 1e-6);
  CHECK(max_ratio > 0.5);

  CHECK_THROWS_AS(carleson_bound_check(f, 1.0, 1.0, {0.5}, C, Ct), config_error);
}

TEST_CASE("nondegeneracy of consecutive sums") {
  auto a = nondegeneracy({1.0 - (-0.5), -0.5 - 0.25});
  CHECK(a.ok);
  auto b = nondegeneracy({1.0, -1.0});
  CHECK_FALSE(b.ok);
  CHECK(b.j1 == 1);
  CHECK(b.j2 == 2);
  CHECK(nondegeneracy({1.0, 2.0, 3.0}).ok);
}

TEST_CASE("picard terms: simplex volumes, Eq-order cross-check, nilpotency") {
  auto V = [](double y) { return y < 1.0 ? 1.0 : (y == 1.0 ? 0.5 : 0.0); };
  for (int k = 1; k <= 4; ++k) {
    const double val = picard_scalar_term(V, k, 0.0, 2.0, 8192);
    double fact = 1.0;
    for (int t = 2; t <= k; ++t) fact *= t;
    CHECK(val == doctest::Approx(1.0 / fact).epsilon(1e-6));
  }
  CHECK_THROWS_AS(picard_scalar_term(V, 5, 0.0, 2.0), config_error);

  AknsSystem sys;
  sys.n = 3;
  sys.D = {1.5, 0.25, -1.0};
  sys.lambda = 1.3;
  sys.entries[{1, 2}] = gaussian(2.0);
  sys.entries[{2, 3}] = gaussian(4.0, cplx(0.5, 0.3));
  auto terms = picard_terms(sys, 4, 0.0, 6.0, 8192);
  REQUIRE(terms.size() == 4);
  const cplx C(0.8, -0.6);
  for (double x : {2.5, 6.0}) {
    const cplx direct = v1_term_3x3(sys.entries[{1, 2}], sys.entries[{2, 3}], sys.D, sys.lambda,
                                    C, 0.0, x);
    CHECK(std::abs(C * terms[1].at(x)[0][2] - direct) < 1e-5);
  }
  // Strictly upper-triangular 3x3 potentials are nilpotent of order 3.
  for (int k = 3; k <= 4; ++k) {
    auto m = terms[static_cast<std::size_t>(k - 1)].at(6.0);
    for (const auto& row : m) {
      for (const cplx& z : row) CHECK(std::abs(z) == 0.0);
    }
  }
  // Hence the order-2 partial sum already solves the ODE.
  auto tr = solve(sys, 0.0, 6.0, 1200, {cplx(0.1, 0.2), cplx(-0.3, 0.1), C});
  std::vector<cplx> v0 = {cplx(0.1, 0.2), cplx(-0.3, 0.1), C};
  for (std::size_t m : {600u, 1200u}) {
    for (int i = 0; i < 3; ++i) {
      cplx acc = v0[static_cast<std::size_t>(i)];
      for (int k = 1; k <= 2; ++k) {
        auto S = terms[static_cast<std::size_t>(k - 1)].at(tr.x[m]);
        for (int jj = 0; jj < 3; ++jj) {
          acc += S[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] * v0[static_cast<std::size_t>(jj)];
        }
      }
      CHECK(std::abs(acc - tr.v[static_cast<std::size_t>(i)][m]) < 1e-5);
    }
  }
}
