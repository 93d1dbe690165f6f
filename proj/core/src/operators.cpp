#include "multiest/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace multiest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Spectrum> spectra_of(const std::vector<GridFunction>& fs) {
  std::vector<Spectrum> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(dft(f));
  return out;
}

void check_shared_grid(const std::vector<GridFunction>& fs) {
  if (fs.empty()) throw config_error("operator needs at least one input");
  for (const auto& f : fs) {
    if (f.N() != fs.front().N() || f.L() != fs.front().L()) {
      throw config_error("inputs must share (N, L)");
    }
  }
}

// Core O(n N^2) sweep. For each sample x_m, scans k ascending and maintains
// the prefix sums S_j = U_j(x, k+1); updating j in descending order keeps the
// inequalities strict. When `maximal` is set, folds sup_K |U_n(x, K)| over
// the discrete cutoffs into the same sweep.
GridFunction sweep_apply(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs, bool maximal) {
  check_shared_grid(fs);
  spec.validate(fs.front().N(), fs.size());
  const std::size_t N = fs.front().N();
  const double L = fs.front().L();
  const long half = static_cast<long>(N / 2);
  const int n = spec.n;
  const auto specs = spectra_of(fs);

  // Coefficients in sweep order k = -N/2 .. N/2-1.
  std::vector<std::vector<cplx>> coef(static_cast<std::size_t>(n), std::vector<cplx>(N));
  for (int j = 0; j < n; ++j) {
    for (long k = -half; k < half; ++k) {
      coef[static_cast<std::size_t>(j)][static_cast<std::size_t>(k + half)] = specs[static_cast<std::size_t>(j)].at(k);
    }
  }
  std::vector<double> cj(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) cj[static_cast<std::size_t>(j)] = spec.phase_coeff(j);

  const double norm = std::pow(L, -n);
  std::vector<cplx> out(N);
  std::vector<cplx> S(static_cast<std::size_t>(n) + 1);
  std::vector<cplx> phase(static_cast<std::size_t>(n)), step(static_cast<std::size_t>(n));

  // Sparse path: partial sums only change where some slot has a nonzero
  // coefficient, so band-limited inputs need only the active bins, with
  // phases computed directly per bin.
  std::vector<std::size_t> active;
  for (std::size_t idx = 0; idx < N; ++idx) {
    for (int j = 0; j < n; ++j) {
      if (coef[static_cast<std::size_t>(j)][idx] != cplx{}) {
        active.push_back(idx);
        break;
      }
    }
  }
  if (active.size() * 4 < N) {
    bool unit_coeffs = true;
    for (double c : cj) unit_coeffs = unit_coeffs && (c == 1.0 || c == -1.0);
    for (std::size_t m = 0; m < N; ++m) {
      std::fill(S.begin(), S.end(), cplx{});
      S[0] = 1.0;
      const double base = kTwoPi * static_cast<double>(m) / static_cast<double>(N);
      double best = 0.0;
      for (std::size_t idx : active) {
        const double k = static_cast<double>(static_cast<long>(idx) - half);
        const cplx pk = unit_coeffs ? std::polar(1.0, base * k) : cplx{};
        for (int j = n - 1; j >= 0; --j) {
          const std::size_t ju = static_cast<std::size_t>(j);
          if (coef[ju][idx] == cplx{}) continue;
          const cplx ph = unit_coeffs ? (cj[ju] > 0.0 ? pk : std::conj(pk))
                                      : std::polar(1.0, base * cj[ju] * k);
          S[ju + 1] += coef[ju][idx] * ph * S[ju];
        }
        if (maximal) best = std::max(best, std::abs(S[static_cast<std::size_t>(n)]));
      }
      out[m] = maximal ? cplx(best * norm, 0.0) : S[static_cast<std::size_t>(n)] * norm;
    }
    return GridFunction(std::move(out), L);
  }

  for (std::size_t m = 0; m < N; ++m) {
    std::fill(S.begin(), S.end(), cplx{});
    S[0] = 1.0;
    const double base = kTwoPi * static_cast<double>(m) / static_cast<double>(N);
    for (int j = 0; j < n; ++j) {
      phase[static_cast<std::size_t>(j)] = std::polar(1.0, base * cj[static_cast<std::size_t>(j)] * static_cast<double>(-half));
      step[static_cast<std::size_t>(j)] = std::polar(1.0, base * cj[static_cast<std::size_t>(j)]);
    }
    double best = 0.0;
    for (long k = -half; k < half; ++k) {
      const std::size_t idx = static_cast<std::size_t>(k + half);
      if ((idx & 511u) == 511u) {
        // Refresh incremental phases to stop drift on long sweeps.
        for (int j = 0; j < n; ++j) {
          phase[static_cast<std::size_t>(j)] = std::polar(1.0, base * cj[static_cast<std::size_t>(j)] * static_cast<double>(k));
        }
      }
      for (int j = n - 1; j >= 0; --j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        S[ju + 1] += coef[ju][idx] * phase[ju] * S[ju];
      }
      for (int j = 0; j < n; ++j) phase[static_cast<std::size_t>(j)] *= step[static_cast<std::size_t>(j)];
      if (maximal) best = std::max(best, std::abs(S[static_cast<std::size_t>(n)]));
    }
    out[m] = maximal ? cplx(best * norm, 0.0) : S[static_cast<std::size_t>(n)] * norm;
  }
  return GridFunction(std::move(out), L);
}

}  // namespace

SimplexOpSpec SimplexOpSpec::simplex(int n) {
  SimplexOpSpec s;
  s.n = n;
  s.signs.assign(static_cast<std::size_t>(n), +1);
  return s;
}

SimplexOpSpec SimplexOpSpec::alternating(int n) {
  SimplexOpSpec s;
  s.n = n;
  s.signs.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) s.signs[static_cast<std::size_t>(j)] = (j % 2 == 0) ? +1 : -1;
  return s;
}

SimplexOpSpec SimplexOpSpec::with_alpha(std::vector<double> alpha) {
  SimplexOpSpec s;
  s.n = static_cast<int>(alpha.size());
  s.signs.assign(alpha.size(), +1);
  s.alpha = std::move(alpha);
  return s;
}

double SimplexOpSpec::phase_coeff(int j) const {
  const double a = alpha ? (*alpha)[static_cast<std::size_t>(j)] : 1.0;
  return a * static_cast<double>(signs[static_cast<std::size_t>(j)]);
}

bool SimplexOpSpec::nondegenerate() const {
  for (int j1 = 0; j1 < n; ++j1) {
    double acc = 0;
    for (int j2 = j1; j2 < n; ++j2) {
      acc += phase_coeff(j2);
      if (acc == 0.0) return false;
    }
  }
  return true;
}

void SimplexOpSpec::validate(std::size_t N, std::size_t nfs) const {
  if (n < 1) throw config_error("spec.n must be >= 1");
  if (signs.size() != static_cast<std::size_t>(n)) throw config_error("signs length must equal n");
  if (alpha && alpha->size() != static_cast<std::size_t>(n)) throw config_error("alpha length must equal n");
  for (int s : signs) {
    if (s != 1 && s != -1) throw config_error("signs must be +-1");
  }
  if (nfs != static_cast<std::size_t>(n)) throw config_error("operator arity mismatch");
  if (n <= 4) {
    if (N > (1u << 14)) throw guard_error("work budget: N <= 2^14 for n <= 4");
  } else {
    if (N > (1u << 11)) throw guard_error("work budget: N <= 2^11 for n >= 5");
  }
}

GridFunction simplex_apply(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs) {
  return sweep_apply(spec, fs, /*maximal=*/false);
}

GridFunction maximal_apply(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs) {
  return sweep_apply(spec, fs, /*maximal=*/true);
}

GridFunction full_product_reference(const std::vector<GridFunction>& fs) {
  check_shared_grid(fs);
  std::vector<cplx> out(fs.front().N(), cplx(1.0));
  for (const auto& f : fs) {
    for (std::size_t m = 0; m < out.size(); ++m) out[m] *= f[m];
  }
  return GridFunction(std::move(out), fs.front().L());
}

namespace {

bool within_band(const Spectrum& s, long band) {
  double inside = 0, outside = 0;
  for (long k = s.freq_lo(); k <= s.freq_hi(); ++k) {
    (std::abs(k) <= band ? inside : outside) += std::norm(s.at(k));
  }
  return outside <= 1e-20 * std::max(inside, 1e-300);
}

}  // namespace

KernelResult bht_kernel(const GridFunction& f1, const GridFunction& f2) {
  check_shared_grid({f1, f2});
  const std::size_t N = f1.N();
  const double L = f1.L();
  const long band = static_cast<long>(N / 4);
  const bool ok = within_band(dft(f1), band) && within_band(dft(f2), band);
  std::vector<cplx> out(N);
  // Fold the p.v. sum over t = L r / N, r over all nonzero integers, onto one
  // period: sum_p 1/(r + pN) = (pi/N) cot(pi r / N).
  std::vector<double> w(N / 2);
  for (std::size_t r = 1; r < N / 2; ++r) {
    w[r] = std::numbers::pi / static_cast<double>(N) /
           std::tan(std::numbers::pi * static_cast<double>(r) / static_cast<double>(N));
  }
  for (std::size_t m = 0; m < N; ++m) {
    cplx acc{};
    for (std::size_t r = 1; r < N / 2; ++r) {
      const std::size_t mp = (m + r) % N;
      const std::size_t mm = (m + N - r) % N;
      acc += (f1[mm] * f2[mp] - f1[mp] * f2[mm]) * w[r];
    }
    out[m] = acc;
  }
  return {GridFunction(std::move(out), L), ok};
}

KernelResult t3_kernel(const GridFunction& f1, const GridFunction& f2, const GridFunction& f3,
                       T3Variant variant) {
  check_shared_grid({f1, f2, f3});
  const std::size_t N = f1.N();
  if (N > 512) throw guard_error("t3_kernel: O(N^3) sum guarded to N <= 512");
  const double L = f1.L();
  const long band = static_cast<long>(N / 4);
  const bool ok = within_band(dft(f1), band) && within_band(dft(f2), band) && within_band(dft(f3), band);
  const long half = static_cast<long>(N / 2);
  // Folded p.v. weight per axis, as in bht_kernel; odd in r.
  auto wfun = [N](long r) {
    return std::numbers::pi / static_cast<double>(N) /
           std::tan(std::numbers::pi * static_cast<double>(r) / static_cast<double>(N));
  };
  std::vector<cplx> out(N);
  for (std::size_t m = 0; m < N; ++m) {
    cplx acc{};
    for (long r1 = -(half - 1); r1 < half; ++r1) {
      if (r1 == 0) continue;
      const std::size_t m1 = static_cast<std::size_t>(((static_cast<long>(m) - r1) % static_cast<long>(N) + static_cast<long>(N)) % static_cast<long>(N));
      const double w1 = wfun(r1);
      for (long r2 = -(half - 1); r2 < half; ++r2) {
        if (r2 == 0) continue;
        const long msum = variant == T3Variant::plus ? static_cast<long>(m) + r1 + r2
                                                     : static_cast<long>(m) - r1 - r2;
        const std::size_t m2 = static_cast<std::size_t>((msum % static_cast<long>(N) + static_cast<long>(N)) % static_cast<long>(N));
        const std::size_t m3 = static_cast<std::size_t>(((static_cast<long>(m) - r2) % static_cast<long>(N) + static_cast<long>(N)) % static_cast<long>(N));
        acc += f1[m1] * f2[m2] * f3[m3] * (w1 * wfun(r2));
      }
    }
    out[m] = acc;
  }
  return {GridFunction(std::move(out), L), ok};
}

GridFunction t3_frequency_reference(const GridFunction& f1, const GridFunction& f2,
                                    const GridFunction& f3, T3Variant variant,
                                    std::size_t out_samples) {
  check_shared_grid({f1, f2, f3});
  const std::size_t N = f1.N();
  const std::size_t M = out_samples == 0 ? N : out_samples;
  if (M > N || N % M != 0) throw config_error("out_samples must divide N");
  if (N * M > (1ull << 30)) throw guard_error("work budget: N * out_samples <= 2^30");
  const std::size_t stride = N / M;
  const double L = f1.L();
  const long half = static_cast<long>(N / 2);
  const auto specs = spectra_of({f1, f2, f3});
  std::vector<cplx> c1(N), c2(N), c3(N);
  for (long k = -half; k < half; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k + half);
    c1[idx] = specs[0].at(k);
    c2[idx] = specs[1].at(k);
    c3[idx] = specs[2].at(k);
  }
  const double norm = -std::numbers::pi * std::numbers::pi / (L * L * L);
  std::vector<cplx> out(M);
  std::vector<cplx> e1(N), e2(N), e3(N), p1(N + 1), p3(N + 1);
  for (std::size_t mo = 0; mo < M; ++mo) {
    const std::size_t m = mo * stride;
    const double base = kTwoPi * static_cast<double>(m) / static_cast<double>(N);
    cplx ph = std::polar(1.0, base * static_cast<double>(-half));
    const cplx step = std::polar(1.0, base);
    for (std::size_t idx = 0; idx < N; ++idx) {
      if ((idx & 511u) == 0u) {
        ph = std::polar(1.0, base * static_cast<double>(static_cast<long>(idx) - half));
      }
      e1[idx] = c1[idx] * ph;
      e2[idx] = c2[idx] * ph;
      e3[idx] = c3[idx] * ph;
      ph *= step;
    }
    p1[0] = p3[0] = cplx{};
    for (std::size_t idx = 0; idx < N; ++idx) {
      p1[idx + 1] = p1[idx] + e1[idx];
      p3[idx + 1] = p3[idx] + e3[idx];
    }
    const cplx T1 = p1[N], T3 = p3[N];
    cplx acc{};
    for (std::size_t idx = 0; idx < N; ++idx) {
      cplx B1, B3;
      if (variant == T3Variant::plus) {
        // sum_{k1} sgn(k2 - k1) e1(k1) and likewise in slot 3.
        B1 = 2.0 * p1[idx] + e1[idx] - T1;
        B3 = 2.0 * p3[idx] + e3[idx] - T3;
      } else {
        // sum_{k1} sgn(k1 + k2) e1(k1): threshold at q = -k2.
        const std::size_t qi = static_cast<std::size_t>(2 * half - static_cast<long>(idx));
        const cplx eq1 = qi < N ? e1[qi] : cplx{};
        const cplx eq3 = qi < N ? e3[qi] : cplx{};
        B1 = T1 - 2.0 * p1[qi] - eq1;
        B3 = T3 - 2.0 * p3[qi] - eq3;
      }
      acc += e2[idx] * B1 * B3;
    }
    out[mo] = acc * norm;
  }
  return GridFunction(std::move(out), L);
}

GridFunction bht_frequency_reference(const GridFunction& f1, const GridFunction& f2) {
  const auto spec = SimplexOpSpec::simplex(2);
  auto a = simplex_apply(spec, {f1, f2});
  auto b = simplex_apply(spec, {f2, f1});
  std::vector<cplx> out(a.N());
  const cplx ipi(0.0, std::numbers::pi);
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = ipi * (a[m] - b[m]);
  return GridFunction(std::move(out), a.L());
}

std::shared_ptr<ChainNode> ChainNode::leaf(int index) {
  auto n = std::make_shared<ChainNode>();
  n->kind = Kind::Leaf;
  n->leaf_index = index;
  return n;
}

std::shared_ptr<ChainNode> ChainNode::multiply(std::vector<std::shared_ptr<ChainNode>> ch) {
  auto n = std::make_shared<ChainNode>();
  n->kind = Kind::Multiply;
  n->children = std::move(ch);
  return n;
}

std::shared_ptr<ChainNode> ChainNode::convolve(std::shared_ptr<ChainNode> child,
                                               std::function<double(double)> window) {
  auto n = std::make_shared<ChainNode>();
  n->kind = Kind::Convolve;
  n->children = {std::move(child)};
  n->window = std::move(window);
  return n;
}

namespace {

GridFunction eval_chain(const ChainNode& node, const std::vector<GridFunction>& fs) {
  switch (node.kind) {
    case ChainNode::Kind::Leaf: {
      if (node.leaf_index < 0 || static_cast<std::size_t>(node.leaf_index) >= fs.size()) {
        throw config_error("separable_apply: leaf index out of range");
      }
      return fs[static_cast<std::size_t>(node.leaf_index)];
    }
    case ChainNode::Kind::Multiply: {
      if (node.children.empty()) throw config_error("separable_apply: empty product");
      std::vector<GridFunction> parts;
      for (const auto& c : node.children) parts.push_back(eval_chain(*c, fs));
      return full_product_reference(parts);
    }
    case ChainNode::Kind::Convolve: {
      if (node.children.size() != 1 || !node.window) throw config_error("separable_apply: malformed convolve node");
      auto inner = eval_chain(*node.children.front(), fs);
      auto s = dft(inner);
      for (long k = s.freq_lo(); k <= s.freq_hi(); ++k) {
        s.at(k) *= node.window(static_cast<double>(k) / s.L);
      }
      return idft(s);
    }
  }
  throw config_error("separable_apply: unknown node kind");
}

}  // namespace

GridFunction separable_apply(const std::shared_ptr<ChainNode>& chain,
                             const std::vector<GridFunction>& fs) {
  if (!chain) throw config_error("separable_apply: null chain");
  check_shared_grid(fs);
  return eval_chain(*chain, fs);
}

double hoelder_ratio(const SimplexOpSpec& spec, const std::vector<GridFunction>& fs, double p_out) {
  double denom = 1.0;
  for (const auto& f : fs) denom *= lp_quasinorm(f, 2.0);
  if (denom == 0.0) throw config_error("hoelder_ratio: zero input norm");
  return lp_quasinorm(simplex_apply(spec, fs), p_out) / denom;
}

}  // namespace multiest
