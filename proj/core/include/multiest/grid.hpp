#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "multiest/errors.hpp"

namespace multiest {

using cplx = std::complex<double>;

// Frequency-side coefficients indexed by integer frequency k in [-N/2, N/2).
// Convention: f(x_m) = (1/L) * sum_k coeff(k) e^{2 pi i k m / N}, i.e. the
// forward transform carries the Riemann-sum factor L/N so that coeff(k)
// approximates the continuum integral over one period. The Nyquist bin sits
// on the negative side (k = -N/2).
struct Spectrum {
  std::size_t N = 0;
  double L = 1.0;
  std::vector<cplx> coeff;  // storage order: DFT bins 0..N-1

  Spectrum() = default;
  Spectrum(std::size_t n, double period);

  // k must lie in [-N/2, N/2).
  cplx& at(long k);
  const cplx& at(long k) const;
  static long bin_to_freq(std::size_t bin, std::size_t N);
  long freq_lo() const { return -static_cast<long>(N / 2); }
  long freq_hi() const { return static_cast<long>(N / 2) - 1; }
};

// Periodic sampled complex function: samples[m] = f(x_m), x_m = L*m/N.
class GridFunction {
 public:
  GridFunction(std::vector<cplx> samples, double L);

  std::size_t N() const { return samples_.size(); }
  double L() const { return L_; }
  double dx() const { return L_ / static_cast<double>(samples_.size()); }
  double x(std::size_t m) const { return L_ * static_cast<double>(m) / static_cast<double>(samples_.size()); }
  const std::vector<cplx>& samples() const { return samples_; }
  cplx operator[](std::size_t m) const { return samples_[m]; }

 private:
  double L_;
  std::vector<cplx> samples_;
};

struct Preset {
  enum class Kind { PureMode, Chirp, Gaussian, Indicator, RandomBandlimited };
  Kind kind;

  long mode_k = 0;            // PureMode
  int chirp_sign = +1;        // Chirp: e^{i sign rate x^2} in centered coordinates
  double chirp_rate = 1.0;
  double center = 0.0, width = 1.0;  // Gaussian
  long modulation = 0;
  double a = 0.0, b = 0.0;    // Indicator of [a, b)
  long band = 0;              // RandomBandlimited: support |k| <= band
  std::uint64_t seed = 0;

  static Preset pure_mode(long k);
  static Preset chirp(int sign, double rate = 1.0);
  static Preset gaussian(double center, double width, long modulation = 0);
  static Preset indicator(double a, double b);
  static Preset random_bandlimited(long band, std::uint64_t seed);
};

GridFunction from_preset(const Preset& p, std::size_t N, double L = 1.0);

Spectrum dft(const GridFunction& f);
GridFunction idft(const Spectrum& s);

// ((L/N) sum |f|^p)^{1/p}; p = infinity -> max modulus.
double lp_quasinorm(const GridFunction& f, double p);

// Pointwise multiplication by the indicator of [a, b), endpoints wrapped
// periodically into [0, L); a wrapped window (b < a after wrap) is allowed.
GridFunction truncate(const GridFunction& f, double a, double b);

// Serialization.
void write_binary(const GridFunction& f, std::ostream& os);
GridFunction read_binary(std::istream& is);
std::string to_json(const GridFunction& f);
GridFunction gridfunction_from_json(const std::string& text);

namespace detail {
bool is_pow2(std::size_t n);
// Wrap x into [-L/2, L/2).
double wrap_centered(double x, double L);
}  // namespace detail

}  // namespace multiest
