#pragma once

#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "multiest/grid.hpp"

namespace multiest {

using Potential = std::function<cplx(double)>;
using cmat = std::vector<std::vector<cplx>>;

// Upper-triangular system u' = i lambda D u + N u; after the substitution
// u_k = e^{i lambda d_k x} v_k the unknown v solves v' = W v with
// w_{lm}(x) = a_{lm}(x) e^{i lambda (d_l - d_m) x}.
struct AknsSystem {
  int n = 2;
  std::vector<double> D;                          // pairwise distinct
  std::map<std::pair<int, int>, Potential> entries;  // 1-based (l, m), l < m
  double lambda = 1.0;

  void validate() const;
  cplx w(int l, int m, double x) const;  // zero when the entry is absent
};

struct Trajectory {
  std::vector<double> x;
  std::vector<std::vector<cplx>> v;  // v[k][step], k 0-based
};

// Bottom-up back substitution: v_n is constant; each v_k is integrated from
// the already-determined lower components (adaptive RK per subsystem).
Trajectory solve(const AknsSystem& sys, double x0, double x1, std::size_t steps,
                 const std::vector<cplx>& v0);
// One adaptive pass over the full coupled system.
Trajectory solve_generic(const AknsSystem& sys, double x0, double x1, std::size_t steps,
                         const std::vector<cplx>& v0);

// v_1(x) = C int_{x0}^x f(y) e^{i lambda (d1 - d2) y} dy + Ctilde.
cplx v1_closed_2x2(const Potential& f, double d1, double d2, double lambda, cplx C, cplx Ctilde,
                   double x0, double x);
// First term of the 3x3 expansion: the double integral over x0 < z < y < x of
// C f3(z) f1(y) e^{i lambda [(d2 - d3) z + (d1 - d2) y]}.
cplx v1_term_3x3(const Potential& f1, const Potential& f3, const std::vector<double>& D,
                 double lambda, cplx C, double x0, double x);

struct CarlesonRow {
  double lambda = 0.0;
  double lambda_snapped = 0.0;
  double snap_error = 0.0;
  double sup_v1 = 0.0;
  double carleson_value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

// Discrete Eq.-(122) audit: the partial Riemann sums of C int f e^{i la y} + Ct
// against the maximal partial-sum value delivered by maximal_apply (n = 1).
std::vector<CarlesonRow> carleson_bound_check(const GridFunction& f, double d1, double d2,
                                              const std::vector<double>& lambdas, cplx C,
                                              cplx Ctilde);

struct NondegeneracyResult {
  bool ok = true;
  int j1 = 0, j2 = 0;  // 1-based violating block when !ok
};

// All consecutive sums sum_{j=j1..j2} alpha_j nonzero; exact on dyadic inputs.
NondegeneracyResult nondegeneracy(const std::vector<double>& alpha);

struct PicardTerm {
  int order = 0;
  std::function<cmat(double)> at;
};

// Iterated simplex integrals S_k(x) = int_{x0}^x W(y) S_{k-1}(y) dy, S_0 = I.
std::vector<PicardTerm> picard_terms(const AknsSystem& sys, int order, double x0, double x1,
                                     std::size_t steps = 8192);
// Scalar analogue int_{x0 < y_1 < ... < y_k < x} prod V(y_i).
double picard_scalar_term(const std::function<double(double)>& V, int order, double x0, double x,
                          std::size_t steps = 8192);

}  // namespace multiest
