#include "multiest/akns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "multiest/dyadic.hpp"
#include "multiest/operators.hpp"

namespace multiest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using state_type = std::vector<cplx>;

std::vector<double> output_times(double x0, double x1, std::size_t steps) {
  std::vector<double> ts(steps + 1);
  for (std::size_t m = 0; m <= steps; ++m) {
    ts[m] = x0 + (x1 - x0) * static_cast<double>(m) / static_cast<double>(steps);
  }
  return ts;
}

// Integrate the self-contained subsystem (v_k0, ..., v_n) and report every
// component at the requested times.
std::vector<std::vector<cplx>> integrate_block(const AknsSystem& sys, int k0,
                                               const std::vector<double>& times,
                                               const std::vector<cplx>& init) {
  namespace ode = boost::numeric::odeint;
  const int dim = sys.n - k0 + 1;
  auto rhs = [&sys, k0, dim](const state_type& v, state_type& dvdt, double x) {
    for (int i = 0; i < dim; ++i) {
      cplx acc(0.0);
      for (int m = k0 + i + 1; m <= sys.n; ++m) acc += sys.w(k0 + i, m, x) * v[m - k0];
      dvdt[static_cast<std::size_t>(i)] = acc;
    }
  };
  std::vector<std::vector<cplx>> rows(static_cast<std::size_t>(dim));
  auto observer = [&rows, dim](const state_type& v, double) {
    for (int i = 0; i < dim; ++i) rows[static_cast<std::size_t>(i)].push_back(v[static_cast<std::size_t>(i)]);
  };
  state_type v(init);
  const double dt = (times.back() - times.front()) / 256.0;
  ode::integrate_times(ode::make_controlled(1e-12, 1e-10, ode::runge_kutta_dopri5<state_type>()),
                       rhs, v, times.begin(), times.end(), dt, observer);
  for (const auto& row : rows) {
    for (const cplx& z : row) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw guard_error("akns solve: integration diverged");
      }
    }
  }
  return rows;
}

void check_solve_args(const AknsSystem& sys, double x0, double x1, std::size_t steps,
                      const std::vector<cplx>& v0) {
  sys.validate();
  if (steps < 1000) throw config_error("akns solve: need at least 1000 steps");
  if (!(x1 > x0)) throw config_error("akns solve: empty range");
  if (v0.size() != static_cast<std::size_t>(sys.n)) {
    throw config_error("akns solve: initial condition dimension mismatch");
  }
}

}  // namespace

void AknsSystem::validate() const {
  if (n < 1) throw config_error("akns: dimension must be positive");
  if (D.size() != static_cast<std::size_t>(n)) throw config_error("akns: need n diagonal entries");
  std::set<double> distinct(D.begin(), D.end());
  if (distinct.size() != D.size()) throw config_error("akns: diagonal entries must be distinct");
  for (const auto& [lm, a] : entries) {
    const auto [l, m] = lm;
    if (l < 1 || m > n || l >= m) throw config_error("akns: entries must be strictly upper triangular");
    if (!a) throw config_error("akns: null potential entry");
  }
}

cplx AknsSystem::w(int l, int m, double x) const {
  auto it = entries.find({l, m});
  if (it == entries.end()) return cplx(0.0);
  const double phase = lambda * (D[static_cast<std::size_t>(l - 1)] - D[static_cast<std::size_t>(m - 1)]) * x;
  return it->second(x) * std::polar(1.0, phase);
}

Trajectory solve(const AknsSystem& sys, double x0, double x1, std::size_t steps,
                 const std::vector<cplx>& v0) {
  check_solve_args(sys, x0, x1, steps, v0);
  Trajectory out;
  out.x = output_times(x0, x1, steps);
  out.v.assign(static_cast<std::size_t>(sys.n), {});
  for (int k = sys.n; k >= 1; --k) {
    std::vector<cplx> init(v0.begin() + (k - 1), v0.end());
    auto rows = integrate_block(sys, k, out.x, init);
    out.v[static_cast<std::size_t>(k - 1)] = std::move(rows.front());
  }
  return out;
}

Trajectory solve_generic(const AknsSystem& sys, double x0, double x1, std::size_t steps,
                         const std::vector<cplx>& v0) {
  check_solve_args(sys, x0, x1, steps, v0);
  Trajectory out;
  out.x = output_times(x0, x1, steps);
  out.v = integrate_block(sys, 1, out.x, v0);
  return out;
}

cplx v1_closed_2x2(const Potential& f, double d1, double d2, double lambda, cplx C, cplx Ctilde,
                   double x0, double x) {
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double y) { return f(y) * std::polar(1.0, lambda * (d1 - d2) * y); };
  return C * gauss_kronrod<double, 31>::integrate(integrand, x0, x, 10, 1e-12) + Ctilde;
}

cplx v1_term_3x3(const Potential& f1, const Potential& f3, const std::vector<double>& D,
                 double lambda, cplx C, double x0, double x) {
  using boost::math::quadrature::gauss_kronrod;
  if (D.size() != 3) throw config_error("v1_term_3x3: need three diagonal entries");
  auto outer = [&](double y) {
    auto inner = [&](double z) { return f3(z) * std::polar(1.0, lambda * (D[1] - D[2]) * z); };
    return f1(y) * std::polar(1.0, lambda * (D[0] - D[1]) * y) *
           gauss_kronrod<double, 31>::integrate(inner, x0, y, 10, 1e-12);
  };
  return C * gauss_kronrod<double, 31>::integrate(outer, x0, x, 10, 1e-12);
}

std::vector<CarlesonRow> carleson_bound_check(const GridFunction& f, double d1, double d2,
                                              const std::vector<double>& lambdas, cplx C,
                                              cplx Ctilde) {
  if (d1 == d2) throw config_error("carleson_bound_check: need d1 != d2");
  const std::size_t N = f.N();
  const double L = f.L();
  const long half = static_cast<long>(N / 2);
  const double delta = d1 - d2;

  // Transpose f onto the frequency side so maximal_apply's cutoff sweep
  // reproduces the partial Riemann sums of int_0^x f(y) e^{i la delta y} dy.
  Spectrum s(N, L);
  for (long k = -half; k < half; ++k) {
    s.at(k) = (L * L / static_cast<double>(N)) * f[static_cast<std::size_t>(k + half)];
  }
  GridFunction h = idft(s);
  SimplexOpSpec spec = SimplexOpSpec::simplex(1);
  spec.maximal = true;
  GridFunction M = maximal_apply(spec, {h});

  std::vector<CarlesonRow> rows;
  for (double la : lambdas) {
    CarlesonRow row;
    row.lambda = la;
    long q = std::llround(la * delta * L / kTwoPi);
    q = std::clamp(q, -half, half - 1);
    row.lambda_snapped = kTwoPi * static_cast<double>(q) / (L * delta);
    row.snap_error = std::abs(la - row.lambda_snapped);

    const std::size_t qm = static_cast<std::size_t>(((q % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N));
    row.carleson_value = M[qm].real();

    cplx partial(0.0);
    row.sup_v1 = std::abs(Ctilde);
    for (std::size_t r = 0; r < N; ++r) {
      partial += (L / static_cast<double>(N)) * f[r] *
                 std::polar(1.0, kTwoPi * static_cast<double>(q) * static_cast<double>(r) /
                                     static_cast<double>(N));
      row.sup_v1 = std::max(row.sup_v1, std::abs(C * partial + Ctilde));
    }
    row.bound = std::abs(C) * row.carleson_value + std::abs(Ctilde);
    row.ratio = row.bound > 0.0 ? row.sup_v1 / row.bound : 0.0;
    rows.push_back(row);
  }
  return rows;
}

NondegeneracyResult nondegeneracy(const std::vector<double>& alpha) {
  NondegeneracyResult res;
  for (std::size_t j1 = 0; j1 < alpha.size(); ++j1) {
    rational sum = 0;
    for (std::size_t j2 = j1; j2 < alpha.size(); ++j2) {
      sum += to_rational(alpha[j2]);
      if (sum == 0) {
        res.ok = false;
        res.j1 = static_cast<int>(j1 + 1);
        res.j2 = static_cast<int>(j2 + 1);
        return res;
      }
    }
  }
  return res;
}

std::vector<PicardTerm> picard_terms(const AknsSystem& sys, int order, double x0, double x1,
                                     std::size_t steps) {
  sys.validate();
  if (order < 1 || order > 4) throw config_error("picard_terms: order must be in 1..4");
  if (steps < 16 || !(x1 > x0)) throw config_error("picard_terms: bad grid");
  const std::size_t n = static_cast<std::size_t>(sys.n);
  const double h = (x1 - x0) / static_cast<double>(steps);

  auto matmul = [n](const cmat& A, const cmat& B) {
    cmat R(n, std::vector<cplx>(n, cplx(0.0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (A[i][k] == cplx(0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) R[i][j] += A[i][k] * B[k][j];
      }
    }
    return R;
  };

  std::vector<cmat> W(steps + 1, cmat(n, std::vector<cplx>(n, cplx(0.0))));
  for (std::size_t m = 0; m <= steps; ++m) {
    const double x = x0 + h * static_cast<double>(m);
    for (int l = 1; l <= sys.n; ++l) {
      for (int mm = l + 1; mm <= sys.n; ++mm) {
        W[m][static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(mm - 1)] = sys.w(l, mm, x);
      }
    }
  }

  cmat eye(n, std::vector<cplx>(n, cplx(0.0)));
  for (std::size_t i = 0; i < n; ++i) eye[i][i] = cplx(1.0);
  std::vector<cmat> prev(steps + 1, eye);

  std::vector<PicardTerm> terms;
  for (int k = 1; k <= order; ++k) {
    auto cur = std::make_shared<std::vector<cmat>>(steps + 1, cmat(n, std::vector<cplx>(n, cplx(0.0))));
    for (std::size_t m = 1; m <= steps; ++m) {
      cmat a = matmul(W[m - 1], prev[m - 1]);
      cmat b = matmul(W[m], prev[m]);
      (*cur)[m] = (*cur)[m - 1];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          (*cur)[m][i][j] += 0.5 * h * (a[i][j] + b[i][j]);
        }
      }
    }
    PicardTerm term;
    term.order = k;
    term.at = [cur, x0, h, steps](double x) {
      double t = (x - x0) / h;
      t = std::clamp(t, 0.0, static_cast<double>(steps));
      const std::size_t m = static_cast<std::size_t>(std::min(t, static_cast<double>(steps - 1)));
      const double frac = t - static_cast<double>(m);
      cmat R = (*cur)[m];
      for (std::size_t i = 0; i < R.size(); ++i) {
        for (std::size_t j = 0; j < R.size(); ++j) {
          R[i][j] += frac * ((*cur)[m + 1][i][j] - (*cur)[m][i][j]);
        }
      }
      return R;
    };
    terms.push_back(std::move(term));
    prev = *cur;
  }
  return terms;
}

double picard_scalar_term(const std::function<double(double)>& V, int order, double x0, double x,
                          std::size_t steps) {
  if (order < 1 || order > 4) throw config_error("picard_scalar_term: order must be in 1..4");
  if (steps < 16 || !(x > x0)) throw config_error("picard_scalar_term: bad grid");
  const double h = (x - x0) / static_cast<double>(steps);
  std::vector<double> v(steps + 1), prev(steps + 1, 1.0), cur(steps + 1);
  for (std::size_t m = 0; m <= steps; ++m) v[m] = V(x0 + h * static_cast<double>(m));
  for (int k = 1; k <= order; ++k) {
    cur[0] = 0.0;
    for (std::size_t m = 1; m <= steps; ++m) {
      cur[m] = cur[m - 1] + 0.5 * h * (v[m - 1] * prev[m - 1] + v[m] * prev[m]);
    }
    prev = cur;
  }
  return prev[steps];
}

}  // namespace multiest
