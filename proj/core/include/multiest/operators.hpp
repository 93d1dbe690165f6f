#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "multiest/grid.hpp"

namespace multiest {

// Frequency-side n-linear simplex operator specification.
// T(x_m) = L^{-n} sum_{k_1 < ... < k_n} prod_j fhat_j(k_j) e^{2 pi i c_j k_j m / N},
// with per-slot phase coefficient c_j = alpha_j * signs_j (alpha defaults to 1).
struct SimplexOpSpec {
  int n = 2;
  std::vector<int> signs;               // +1 / -1 per slot
  std::optional<std::vector<double>> alpha;
  bool maximal = false;

  static SimplexOpSpec simplex(int n);      // T_n: all signs +1
  static SimplexOpSpec alternating(int n);  // T~_n: +,-,+,-,...
  static SimplexOpSpec with_alpha(std::vector<double> alpha);

  double phase_coeff(int j) const;
  // All consecutive partial sums of the phase coefficients nonzero.
  bool nondegenerate() const;
  void validate(std::size_t N, std::size_t nfs) const;
};

GridFunction simplex_apply(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs);
GridFunction maximal_apply(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs);
GridFunction full_product_reference(const std::vector<GridFunction>& fs);

struct KernelResult {
  GridFunction out;
  bool bandlimited_ok = true;  // inputs within band N/4
};

// Discrete principal-value kernel sums over t = L r / N, r != 0, with
// symmetric pairing of +-t.
KernelResult bht_kernel(const GridFunction& f1, const GridFunction& f2);

enum class T3Variant { plus, minus };
KernelResult t3_kernel(const GridFunction& f1, const GridFunction& f2, const GridFunction& f3,
                       T3Variant variant);

// Frequency-side counterpart of bht_kernel: i*pi*(T2(f1,f2) - T2(f2,f1)),
// the sgn(xi_2 - xi_1) symbol via chi = (1 - sgn)/2.
GridFunction bht_frequency_reference(const GridFunction& f1, const GridFunction& f2);

// Frequency-side counterpart of t3_kernel, O(N * out_samples) via running
// prefix sums: -pi^2 L^{-3} sum_k sgn(k2-k1) sgn(k2-k3) (plus) or
// sgn(k1+k2) sgn(k2+k3) (minus) prod_j fhat_j(k_j) e^{2 pi i (k1+k2+k3) m / N}.
// out_samples = 0 evaluates every grid point; a divisor M of N evaluates the
// strided subgrid x_{m N/M} and returns it as an M-point function on [0, L).
GridFunction t3_frequency_reference(const GridFunction& f1, const GridFunction& f2,
                                    const GridFunction& f3, T3Variant variant,
                                    std::size_t out_samples = 0);

// Separable-symbol cascade plan: a tree of leaves (input slots), pointwise
// products, and convolutions with frequency windows.
struct ChainNode {
  enum class Kind { Leaf, Multiply, Convolve };
  Kind kind = Kind::Leaf;
  int leaf_index = 0;
  std::vector<std::shared_ptr<ChainNode>> children;
  std::function<double(double)> window;  // Convolve: multiplies fhat(k) by window(k/L)

  static std::shared_ptr<ChainNode> leaf(int index);
  static std::shared_ptr<ChainNode> multiply(std::vector<std::shared_ptr<ChainNode>> ch);
  static std::shared_ptr<ChainNode> convolve(std::shared_ptr<ChainNode> child,
                                             std::function<double(double)> window);
};

GridFunction separable_apply(const std::shared_ptr<ChainNode>& chain,
                             const std::vector<GridFunction>& fs);

double hoelder_ratio(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs, double p_out);

}  // namespace multiest
