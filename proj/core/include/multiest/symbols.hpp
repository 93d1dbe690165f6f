#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multiest/dyadic.hpp"
#include "multiest/grid.hpp"
#include "multiest/trees.hpp"

namespace multiest {

// C^s polynomial step: 0 for t <= 0, 1 for t >= 1.
double smoothstep(int s, double t);

// Bump adapted to support_fraction * I, identically 1 on plateau_fraction * I
// (both concentric), with a smoothstep-of-order-s transition.
class Bump1D {
 public:
  Bump1D(double lo, double hi, double support_fraction, std::optional<double> plateau_fraction,
         int s);
  static Bump1D on_interval(const ShiftedDyadicInterval& I, double support_fraction,
                            std::optional<double> plateau_fraction, int s);

  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  double support_fraction() const { return support_fraction_; }
  std::optional<double> plateau_fraction() const { return plateau_fraction_; }
  int order() const { return s_; }
  std::pair<double, double> support() const;

 private:
  double lo_, hi_, support_fraction_;
  std::optional<double> plateau_fraction_;
  int s_;
};

// Evaluation DAG for symbols. Bumps on linear forms, products, weighted sums,
// and lazily generated scale-restricted families (only the O(1) scales active
// at a query point are ever touched).
struct SymbolExpr {
  enum class Kind { BumpOnLinearForm, Product, WeightedSum, ScaleRestrictedSum };
  Kind kind = Kind::ScaleRestrictedSum;

  // BumpOnLinearForm: phi(sum_l coeff[l] * xi[l]).
  std::shared_ptr<Bump1D> bump;
  std::vector<double> coeff;

  // Product / WeightedSum children with weights (Product ignores weights).
  std::vector<std::pair<double, std::shared_ptr<SymbolExpr>>> terms;

  // ScaleRestrictedSum: lazy evaluator; scales_fn additionally reports the
  // active root scales k with nonzero contribution.
  std::function<double(const std::vector<double>&)> lazy;
  std::function<double(const std::vector<double>&, std::vector<int>*)> scales_fn;

  nlohmann::json metadata;

  double eval(const std::vector<double>& xi) const;
  double eval_scales(const std::vector<double>& xi, std::vector<int>* root_scales) const;
};

// sigma(x1, x2) = chi_{a1 x1 < a2 x2}, realized as the telescoping scale sum
// over the gap u = a2 x2 - a1 x1. Exactly 0 on {a1 x1 >= a2 x2}.
SymbolExpr halfplane_symbol(double a1, double a2, const RegionParams& rp, int trunc);

// m_{a}: product of the d-1 half-plane factors with the comparability
// restriction across scales; equals 1 on R_a(rp), vanishes outside a reported
// dilate of it.
SymbolExpr make_m_avec(const std::vector<double>& a, const RegionParams& rp, int trunc);

// m_G: recursive symbol over the internal vertices of G, anchored per vertex
// in its first cut gap, with comparability windows across the other cuts and
// an inter-level scale gap between a vertex and its internal sons.
SymbolExpr make_m_G(const RootedTree& G, const RegionParams& rp, int trunc);

// Exact indicator of the open simplex xi_1 < ... < xi_n.
SymbolExpr chi_simplex(int n);

struct Telescope {
  std::vector<SymbolExpr> summands;  // m_{G_1}, m^1 m_{G_2}, ...
  std::vector<SymbolExpr> m_G;       // the per-tree symbols, in order
  SymbolExpr chi;
  // m^i = chi * prod_{j<=i} (1 - m_{G_j}); m^0 = chi.
  double m_level_stored(std::size_t i, const std::vector<double>& xi) const;
  double m_level_recursive(std::size_t i, const std::vector<double>& xi) const;
  double sum_summands(const std::vector<double>& xi) const;
  double residual(const std::vector<double>& xi) const;  // m^N
  nlohmann::json metadata;
};

Telescope telescope(int n, const std::vector<RootedTree>& order, const RegionParams& rp,
                    int trunc);
Telescope telescope(int n, const RegionParams& rp, int trunc);  // enumeration order

struct ClosureReport {
  std::string candidate_paren;
  int support_violations = 0;
  double max_eval_mismatch = 0.0;  // max |m1*m2| observed at violating points
  int nonzero_samples = 0;
  int max_scale_gap = 0;  // max |k - ktilde| over surviving root-scale pairs
};

ClosureReport product_closure_check(const RootedTree& G1, const RootedTree& G2,
                                    const RegionParams& rp, int trunc, int samples,
                                    std::uint64_t seed);

struct FixingExpansion {
  std::vector<std::pair<long, cplx>> coeffs;  // (m, C_m)
  double period = 0.0;
  double origin = 0.0;  // phase reference: e^{2 pi i m (s - origin) / period}
  bool single_term = false;
  std::vector<Bump1D> bumps;
  Bump1D outer;

  double lhs(const std::vector<double>& x) const;
  double rhs(const std::vector<double>& x) const;
  double residual(const std::vector<double>& x) const;
  double coeff_magnitude(long m) const;
};

FixingExpansion fixing_expand(const std::vector<Bump1D>& bumps, const Bump1D& outer, int trunc);

}  // namespace multiest
