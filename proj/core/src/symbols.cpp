#include "multiest/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "multiest/errors.hpp"

namespace multiest {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// theta_k(u) = S(log2 u - k + 1) - S(log2 u - k): partition of unity over
// k in Z for u > 0, supported in log2 u in (k-1, k+1).
double theta(int s, int k, double u) {
  if (!(u > 0)) return 0.0;
  const double t = std::log2(u) - static_cast<double>(k);
  return smoothstep(s, t + 1.0) - smoothstep(s, t);
}

// Plateau window of half-width w about scale k: 1 on |log2 u - k| <= w - 1,
// supported in |log2 u - k| < w.
double window(int s, int k, int w, double u) {
  if (!(u > 0)) return 0.0;
  const double t = std::log2(u) - static_cast<double>(k);
  return smoothstep(s, t + w) - smoothstep(s, t - w + 1.0);
}

constexpr int kProfileOrder = 6;

int scale_gap_levels(const RegionParams& rp) {
  if (rp.c_sep < 4.0) throw config_error("symbol construction requires c_sep >= 4");
  return static_cast<int>(std::floor(std::log2(rp.c_sep))) - 2;
}

int comparability_window(const RegionParams& rp) {
  return static_cast<int>(std::ceil(std::log2(std::max(rp.c_comp, 1.0)))) + 2;
}

std::vector<int> active_scales(double u) {
  std::vector<int> ks;
  if (!(u > 0)) return ks;
  const int k0 = static_cast<int>(std::floor(std::log2(u)));
  for (int k = k0 - 1; k <= k0 + 2; ++k) ks.push_back(k);
  return ks;
}

struct VertexPlan {
  int first_cut = 0;              // 0-based gap index
  std::vector<int> other_cuts;    // 0-based gap indices
  std::vector<int> internal_sons; // indices into the plan array
};

std::vector<VertexPlan> build_plans(const RootedTree& G, int* root_plan) {
  std::vector<int> internal = G.internal_vertices();
  std::vector<int> plan_of(G.vertex_count(), -1);
  for (std::size_t i = 0; i < internal.size(); ++i) plan_of[static_cast<std::size_t>(internal[i])] = static_cast<int>(i);
  std::vector<VertexPlan> plans(internal.size());
  for (std::size_t i = 0; i < internal.size(); ++i) {
    const auto& node = G.node(internal[i]);
    VertexPlan& p = plans[i];
    bool first = true;
    for (std::size_t c = 0; c + 1 < node.children.size(); ++c) {
      const int cut = G.node(node.children[c]).r - 1;  // gap between leaves r, r+1
      if (first) {
        p.first_cut = cut;
        first = false;
      } else {
        p.other_cuts.push_back(cut);
      }
    }
    for (int c : node.children) {
      if (!G.is_leaf(c)) p.internal_sons.push_back(plan_of[static_cast<std::size_t>(c)]);
    }
  }
  *root_plan = plan_of[static_cast<std::size_t>(G.root())];
  return plans;
}

// Scale DP over the vertex tree: val_u(k) = theta_k(first cut) * prod windows
// * prod over internal sons of sum_{k' <= k - gap} val_v(k').
double eval_vertex(const std::vector<VertexPlan>& plans, int u, int k,
                   const std::vector<double>& gaps, int w, int gap_levels) {
  const VertexPlan& p = plans[static_cast<std::size_t>(u)];
  double v = theta(kProfileOrder, k, gaps[static_cast<std::size_t>(p.first_cut)]);
  if (v == 0.0) return 0.0;
  for (int r : p.other_cuts) {
    v *= window(kProfileOrder, k, w, gaps[static_cast<std::size_t>(r)]);
    if (v == 0.0) return 0.0;
  }
  for (int son : p.internal_sons) {
    double sum = 0.0;
    for (int ks : active_scales(gaps[static_cast<std::size_t>(plans[static_cast<std::size_t>(son)].first_cut)])) {
      if (ks <= k - gap_levels) sum += eval_vertex(plans, son, ks, gaps, w, gap_levels);
    }
    v *= sum;
    if (v == 0.0) return 0.0;
  }
  return v;
}

std::vector<double> gaps_of(const std::vector<double>& xi) {
  std::vector<double> g;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) g.push_back(xi[i + 1] - xi[i]);
  return g;
}

}  // namespace

double smoothstep(int s, double t) {
  if (s < 0) throw config_error("smoothstep order must be nonnegative");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // Generalized smoothstep: C^s at both endpoints.
  double acc = 0.0;
  for (int k = 0; k <= s; ++k) {
    acc += binom(s + k, k) * binom(2 * s + 1, s - k) * std::pow(-t, k);
  }
  return acc * std::pow(t, s + 1);
}

Bump1D::Bump1D(double lo, double hi, double support_fraction,
               std::optional<double> plateau_fraction, int s)
    : lo_(lo), hi_(hi), support_fraction_(support_fraction), plateau_fraction_(plateau_fraction), s_(s) {
  if (!(hi > lo)) throw config_error("Bump1D: empty interval");
  if (!(support_fraction > 0.0) || support_fraction > 1.0) {
    throw config_error("Bump1D: support fraction must lie in (0, 1]");
  }
  if (plateau_fraction && (!(*plateau_fraction > 0.0) || *plateau_fraction >= support_fraction)) {
    throw config_error("Bump1D: plateau fraction must lie in (0, support fraction)");
  }
  if (s < 1) throw config_error("Bump1D: smoothness order must be >= 1");
}

Bump1D Bump1D::on_interval(const ShiftedDyadicInterval& I, double support_fraction,
                           std::optional<double> plateau_fraction, int s) {
  auto [lo, hi] = I.endpoints();
  return Bump1D(static_cast<double>(lo), static_cast<double>(hi), support_fraction,
                plateau_fraction, s);
}

double Bump1D::operator()(double x) const {
  const double c = 0.5 * (lo_ + hi_);
  const double h = 0.5 * (hi_ - lo_);
  const double hs = support_fraction_ * h;
  const double hp = plateau_fraction_ ? *plateau_fraction_ * h : 0.0;
  const double d = std::abs(x - c);
  if (d >= hs) return 0.0;
  if (d <= hp) return 1.0;
  return smoothstep(s_, (hs - d) / (hs - hp));
}

std::pair<double, double> Bump1D::support() const {
  const double c = 0.5 * (lo_ + hi_);
  const double hs = support_fraction_ * 0.5 * (hi_ - lo_);
  return {c - hs, c + hs};
}

double SymbolExpr::eval(const std::vector<double>& xi) const {
  switch (kind) {
    case Kind::BumpOnLinearForm: {
      if (coeff.size() != xi.size()) throw config_error("SymbolExpr: coefficient/point size mismatch");
      double s = 0.0;
      for (std::size_t i = 0; i < xi.size(); ++i) s += coeff[i] * xi[i];
      return (*bump)(s);
    }
    case Kind::Product: {
      double v = 1.0;
      for (const auto& [w, child] : terms) {
        (void)w;
        v *= child->eval(xi);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
    case Kind::WeightedSum: {
      double v = 0.0;
      for (const auto& [w, child] : terms) v += w * child->eval(xi);
      return v;
    }
    case Kind::ScaleRestrictedSum:
      return lazy(xi);
  }
  throw config_error("SymbolExpr: unknown node kind");
}

double SymbolExpr::eval_scales(const std::vector<double>& xi, std::vector<int>* root_scales) const {
  if (kind == Kind::ScaleRestrictedSum && scales_fn) return scales_fn(xi, root_scales);
  if (root_scales) root_scales->clear();
  return eval(xi);
}

SymbolExpr halfplane_symbol(double a1, double a2, const RegionParams& rp, int trunc) {
  if (trunc < 0) throw config_error("halfplane_symbol: trunc must be >= 0");
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw config_error("halfplane_symbol: weights must be positive");
  rp.validate();
  SymbolExpr e;
  e.kind = SymbolExpr::Kind::ScaleRestrictedSum;
  e.lazy = [a1, a2](const std::vector<double>& x) {
    if (x.size() != 2) throw config_error("halfplane_symbol: expects 2 coordinates");
    const double u = a2 * x[1] - a1 * x[0];
    double v = 0.0;
    for (int k : active_scales(u)) v += theta(kProfileOrder, k, u);
    return v;
  };
  e.metadata = {{"kind", "halfplane"}, {"a", {a1, a2}}, {"trunc", trunc},
                {"c_sep", rp.c_sep}, {"c_comp", rp.c_comp}, {"profile_order", kProfileOrder}};
  return e;
}

SymbolExpr make_m_avec(const std::vector<double>& a, const RegionParams& rp, int trunc) {
  if (a.size() < 2) throw config_error("make_m_avec: dimension must be >= 2");
  for (double w : a) {
    if (!(w > 0.0)) throw config_error("make_m_avec: weights must be positive");
  }
  if (trunc < 0) throw config_error("make_m_avec: trunc must be >= 0");
  rp.validate();
  const int w = comparability_window(rp);
  SymbolExpr e;
  e.kind = SymbolExpr::Kind::ScaleRestrictedSum;
  e.scales_fn = [a, w](const std::vector<double>& x, std::vector<int>* ks_out) {
    if (x.size() != a.size()) throw config_error("make_m_avec: point dimension mismatch");
    std::vector<double> u(a.size() - 1);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) u[i] = a[i + 1] * x[i + 1] - a[i] * x[i];
    if (ks_out) ks_out->clear();
    double v = 0.0;
    for (int k : active_scales(u[0])) {
      double term = theta(kProfileOrder, k, u[0]);
      for (std::size_t i = 1; i < u.size() && term != 0.0; ++i) {
        term *= window(kProfileOrder, k, w, u[i]);
      }
      if (term != 0.0 && ks_out) ks_out->push_back(k);
      v += term;
    }
    return v;
  };
  e.lazy = [fn = e.scales_fn](const std::vector<double>& x) { return fn(x, nullptr); };
  e.metadata = {{"kind", "m_avec"}, {"a", a}, {"trunc", trunc},
                {"c_sep", rp.c_sep}, {"c_comp", rp.c_comp},
                {"window", w},
                {"support_c_comp", std::pow(2.0, w + 1)},
                {"profile_order", kProfileOrder}};
  return e;
}

SymbolExpr make_m_G(const RootedTree& G, const RegionParams& rp, int trunc) {
  if (G.n_leaves() > 6) throw guard_error("make_m_G: n > 6 not supported");
  if (trunc < 0) throw config_error("make_m_G: trunc must be >= 0");
  rp.validate();
  const int w = comparability_window(rp);
  const int g = scale_gap_levels(rp);
  const int n = G.n_leaves();
  auto plans = std::make_shared<std::vector<VertexPlan>>();
  int root_plan = 0;
  *plans = build_plans(G, &root_plan);
  SymbolExpr e;
  e.kind = SymbolExpr::Kind::ScaleRestrictedSum;
  e.scales_fn = [plans, root_plan, w, g, n](const std::vector<double>& xi, std::vector<int>* ks_out) {
    if (static_cast<int>(xi.size()) != n) throw config_error("make_m_G: point dimension mismatch");
    const auto gaps = gaps_of(xi);
    if (ks_out) ks_out->clear();
    double v = 0.0;
    const int anchor = (*plans)[static_cast<std::size_t>(root_plan)].first_cut;
    for (int k : active_scales(gaps[static_cast<std::size_t>(anchor)])) {
      const double term = eval_vertex(*plans, root_plan, k, gaps, w, g);
      if (term != 0.0 && ks_out) ks_out->push_back(k);
      v += term;
    }
    return v;
  };
  e.lazy = [fn = e.scales_fn](const std::vector<double>& xi) { return fn(xi, nullptr); };
  const int height = G.height();
  e.metadata = {{"kind", "m_G"}, {"tree", G.to_paren()}, {"trunc", trunc},
                {"c_sep", rp.c_sep}, {"c_comp", rp.c_comp},
                {"window", w}, {"scale_gap_levels", g},
                {"support_c_comp", std::pow(2.0, w + 1)},
                {"support_c_sep", std::pow(2.0, g - 2 - 2 * (w + 1) * std::max(height - 1, 1))},
                {"profile_order", kProfileOrder}};
  return e;
}

SymbolExpr chi_simplex(int n) {
  if (n < 1) throw config_error("chi_simplex: n must be >= 1");
  SymbolExpr e;
  e.kind = SymbolExpr::Kind::ScaleRestrictedSum;
  e.lazy = [n](const std::vector<double>& xi) {
    if (static_cast<int>(xi.size()) != n) throw config_error("chi_simplex: point dimension mismatch");
    for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
      if (!(xi[i] < xi[i + 1])) return 0.0;
    }
    return 1.0;
  };
  e.metadata = {{"kind", "chi_simplex"}, {"n", n}};
  return e;
}

double Telescope::m_level_stored(std::size_t i, const std::vector<double>& xi) const {
  double v = chi.eval(xi);
  for (std::size_t j = 0; j < i && v != 0.0; ++j) v *= 1.0 - m_G[j].eval(xi);
  return v;
}

double Telescope::m_level_recursive(std::size_t i, const std::vector<double>& xi) const {
  double v = chi.eval(xi);
  for (std::size_t j = 0; j < i; ++j) {
    const double m = v * m_G[j].eval(xi);
    v = v - m;
  }
  return v;
}

double Telescope::sum_summands(const std::vector<double>& xi) const {
  double v = 0.0;
  for (const auto& s : summands) v += s.eval(xi);
  return v;
}

double Telescope::residual(const std::vector<double>& xi) const {
  return m_level_stored(m_G.size(), xi);
}

Telescope telescope(int n, const std::vector<RootedTree>& order, const RegionParams& rp,
                    int trunc) {
  if (n < 2) throw config_error("telescope: n must be >= 2");
  auto cov = coverage_report(n, rp, 20000, 1234);
  if (cov.uncovered > 0) {
    std::string diag = "telescope: coverage precondition failed; uncovered gap samples:";
    for (const auto& ex : cov.uncovered_examples) {
      diag += " (";
      for (std::size_t i = 0; i < ex.size(); ++i) {
        diag += (i ? "," : "") + std::to_string(ex[i]);
      }
      diag += ")";
    }
    throw config_error(diag);
  }
  Telescope t;
  t.chi = chi_simplex(n);
  for (const auto& G : order) {
    if (G.n_leaves() != n) throw config_error("telescope: tree leaf count mismatch");
    t.m_G.push_back(make_m_G(G, rp, trunc));
  }
  for (std::size_t i = 0; i < t.m_G.size(); ++i) {
    SymbolExpr s;
    s.kind = SymbolExpr::Kind::ScaleRestrictedSum;
    // Capture by value: shared evaluation state is immutable.
    auto mlist = std::make_shared<std::vector<SymbolExpr>>(t.m_G.begin(), t.m_G.begin() + static_cast<long>(i) + 1);
    auto chi = std::make_shared<SymbolExpr>(t.chi);
    s.lazy = [mlist, chi, i](const std::vector<double>& xi) {
      double v = chi->eval(xi);
      for (std::size_t j = 0; j < i && v != 0.0; ++j) v *= 1.0 - (*mlist)[j].eval(xi);
      return v * (*mlist)[i].eval(xi);
    };
    s.metadata = {{"kind", "telescope_summand"}, {"index", i}, {"tree", order[i].to_paren()}};
    t.summands.push_back(std::move(s));
  }
  t.metadata = {{"kind", "telescope"}, {"n", n}, {"trunc", trunc},
                {"c_sep", rp.c_sep}, {"c_comp", rp.c_comp},
                {"coverage_samples", cov.samples}, {"coverage_uncovered", cov.uncovered}};
  return t;
}

Telescope telescope(int n, const RegionParams& rp, int trunc) {
  return telescope(n, enumerate_trees(n), rp, trunc);
}

ClosureReport product_closure_check(const RootedTree& G1, const RootedTree& G2,
                                    const RegionParams& rp, int trunc, int samples,
                                    std::uint64_t seed) {
  const int n = G1.n_leaves();
  if (n > 5) throw guard_error("product_closure_check: n > 5 not supported");
  if (G2.n_leaves() != n) throw config_error("product_closure_check: leaf count mismatch");
  auto m1 = make_m_G(G1, rp, trunc);
  auto m2 = make_m_G(G2, rp, trunc);

  RootedTree candidate = G1;
  if (G1.to_paren() != G2.to_paren() && !shares_cut(G1, G2)) {
    candidate = retract_pair(G1, G2).first;
  }
  // Loosened constants covering the measured support of the product.
  RegionParams loose;
  loose.c_sep = std::max(std::min(m1.metadata["support_c_sep"].get<double>(),
                                  m2.metadata["support_c_sep"].get<double>()),
                         1.0 + 1e-9);
  loose.c_comp = std::max(m1.metadata["support_c_comp"].get<double>(),
                          m2.metadata["support_c_comp"].get<double>());

  ClosureReport rep;
  rep.candidate_paren = candidate.to_paren();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lg(-10.0, 10.0);
  for (int t = 0; t < samples; ++t) {
    std::vector<double> xi{0.0};
    for (int i = 0; i + 1 < n; ++i) xi.push_back(xi.back() + std::exp2(lg(rng)));
    std::vector<int> k1, k2;
    const double v1 = m1.eval_scales(xi, &k1);
    const double v2 = m2.eval_scales(xi, &k2);
    const double p = v1 * v2;
    if (std::abs(p) < 1e-14) continue;
    ++rep.nonzero_samples;
    for (int a : k1) {
      for (int b : k2) rep.max_scale_gap = std::max(rep.max_scale_gap, std::abs(a - b));
    }
    if (!region_membership(candidate, {xi}, loose)) {
      ++rep.support_violations;
      rep.max_eval_mismatch = std::max(rep.max_eval_mismatch, std::abs(p));
    }
  }
  return rep;
}

double FixingExpansion::lhs(const std::vector<double>& x) const {
  double v = 1.0;
  double s = 0.0;
  for (std::size_t j = 0; j < bumps.size(); ++j) {
    v *= bumps[j](x[j]);
    s += x[j];
  }
  return v * outer(s);
}

double FixingExpansion::rhs(const std::vector<double>& x) const {
  double prod = 1.0;
  double s = 0.0;
  for (std::size_t j = 0; j < bumps.size(); ++j) {
    prod *= bumps[j](x[j]);
    s += x[j];
  }
  if (prod == 0.0) return 0.0;
  cplx series{};
  for (const auto& [m, c] : coeffs) {
    series += c * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) * (s - origin) / period);
  }
  return prod * series.real();
}

double FixingExpansion::residual(const std::vector<double>& x) const {
  return std::abs(lhs(x) - rhs(x));
}

double FixingExpansion::coeff_magnitude(long m) const {
  for (const auto& [mm, c] : coeffs) {
    if (mm == m) return std::abs(c);
  }
  return 0.0;
}

FixingExpansion fixing_expand(const std::vector<Bump1D>& bumps, const Bump1D& outer, int trunc) {
  if (bumps.empty()) throw config_error("fixing_expand: need at least one bump");
  if (trunc < 0) throw config_error("fixing_expand: trunc must be >= 0");
  constexpr double kBeta = 0.9;
  for (const auto& b : bumps) {
    if (b.support_fraction() >= kBeta) {
      throw config_error("fixing_expand: input bump fraction must be below 9/10");
    }
  }
  // Range of x_1 + ... + x_d over the support box.
  double slo = 0.0, shi = 0.0;
  for (const auto& b : bumps) {
    auto [a, c] = b.support();
    slo += a;
    shi += c;
  }
  FixingExpansion fx{{}, 0.0, 0.0, false, bumps, outer};

  // Short circuit: outer identically 1 on the reachable range.
  bool outer_one = true;
  for (int i = 0; i <= 256 && outer_one; ++i) {
    const double s = slo + (shi - slo) * static_cast<double>(i) / 256.0;
    if (std::abs(outer(s) - 1.0) > 1e-15) outer_one = false;
  }
  if (outer_one) {
    fx.period = shi - slo;
    fx.origin = slo;
    fx.single_term = true;
    fx.coeffs.push_back({0, cplx(1.0)});
    return fx;
  }

  // Periodize the outer profile over a window containing both its support and
  // the reachable sum range; the periodic extension is C^s, so trapezoid
  // coefficients converge spectrally.
  // The profile meets zero with C^s contact at its support edges, so the
  // periodic extension over the hull is still C^s without padding.
  auto [olo, ohi] = outer.support();
  const double elo = std::min(slo, olo);
  const double ehi = std::max(shi, ohi);
  const double L = ehi - elo;
  const int M = 8192;
  std::vector<double> samp(M);
  for (int i = 0; i < M; ++i) {
    double s = elo + L * static_cast<double>(i) / M;
    // Fold all periods touching the support.
    double v = 0.0;
    for (int p = -1; p <= 1; ++p) v += outer(s + p * L);
    samp[static_cast<std::size_t>(i)] = v;
  }
  fx.period = L;
  fx.origin = elo;
  for (long m = -trunc; m <= trunc; ++m) {
    cplx c{};
    for (int i = 0; i < M; ++i) {
      c += samp[static_cast<std::size_t>(i)] *
           std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(i) / M);
    }
    fx.coeffs.push_back({m, c / static_cast<double>(M)});
  }
  return fx;
}

}  // namespace multiest
