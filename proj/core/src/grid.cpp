#include "multiest/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

namespace multiest {

namespace detail {

bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

double wrap_centered(double x, double L) {
  double y = std::fmod(x, L);
  if (y < -L / 2) y += L;
  if (y >= L / 2) y -= L;
  return y;
}

}  // namespace detail

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid(std::size_t N) {
  if (!detail::is_pow2(N) || N < 8) {
    throw config_error("grid size must be a power of two, N >= 8");
  }
}

// FFTW plans cached per size; FFTW planning/execution on shared buffers is
// serialized by a mutex (the planner is not thread-safe).
struct FftCache {
  std::mutex mu;
  std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> plans;  // fwd, bwd
  std::map<std::size_t, fftw_complex*> buffers;

  void transform(std::vector<cplx>& data, bool forward) {
    std::scoped_lock lock(mu);
    const std::size_t n = data.size();
    auto it = plans.find(n);
    if (it == plans.end()) {
      fftw_complex* buf = fftw_alloc_complex(n);
      fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
      fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
      buffers[n] = buf;
      it = plans.emplace(n, std::make_pair(fwd, bwd)).first;
    }
    fftw_complex* buf = buffers[n];
    for (std::size_t m = 0; m < n; ++m) {
      buf[m][0] = data[m].real();
      buf[m][1] = data[m].imag();
    }
    fftw_execute(forward ? it->second.first : it->second.second);
    for (std::size_t m = 0; m < n; ++m) data[m] = cplx(buf[m][0], buf[m][1]);
  }
};

FftCache& fft_cache() {
  static FftCache cache;
  return cache;
}

}  // namespace

Spectrum::Spectrum(std::size_t n, double period) : N(n), L(period), coeff(n, cplx{}) {
  check_grid(n);
  if (!(period > 0)) throw config_error("period must be positive");
}

long Spectrum::bin_to_freq(std::size_t bin, std::size_t N) {
  const long half = static_cast<long>(N / 2);
  const long b = static_cast<long>(bin);
  return b < half ? b : b - static_cast<long>(N);
}

cplx& Spectrum::at(long k) {
  const long n = static_cast<long>(N);
  if (k < -n / 2 || k >= n / 2) throw config_error("frequency out of range");
  return coeff[static_cast<std::size_t>((k % n + n) % n)];
}

const cplx& Spectrum::at(long k) const {
  return const_cast<Spectrum*>(this)->at(k);
}

GridFunction::GridFunction(std::vector<cplx> samples, double L)
    : L_(L), samples_(std::move(samples)) {
  check_grid(samples_.size());
  if (!(L > 0)) throw config_error("period must be positive");
  for (const cplx& v : samples_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw config_error("samples must be finite");
    }
  }
}

Preset Preset::pure_mode(long k) {
  Preset p;
  p.kind = Kind::PureMode;
  p.mode_k = k;
  return p;
}

Preset Preset::chirp(int sign, double rate) {
  Preset p;
  p.kind = Kind::Chirp;
  p.chirp_sign = sign >= 0 ? +1 : -1;
  p.chirp_rate = rate;
  return p;
}

Preset Preset::gaussian(double center, double width, long modulation) {
  Preset p;
  p.kind = Kind::Gaussian;
  p.center = center;
  p.width = width;
  p.modulation = modulation;
  return p;
}

Preset Preset::indicator(double a, double b) {
  Preset p;
  p.kind = Kind::Indicator;
  p.a = a;
  p.b = b;
  return p;
}

Preset Preset::random_bandlimited(long band, std::uint64_t seed) {
  Preset p;
  p.kind = Kind::RandomBandlimited;
  p.band = band;
  p.seed = seed;
  return p;
}

GridFunction from_preset(const Preset& p, std::size_t N, double L) {
  check_grid(N);
  if (!(L > 0)) throw config_error("period must be positive");
  std::vector<cplx> v(N);
  switch (p.kind) {
    case Preset::Kind::PureMode: {
      for (std::size_t m = 0; m < N; ++m) {
        const double ph = kTwoPi * static_cast<double>(p.mode_k) * static_cast<double>(m) / static_cast<double>(N);
        v[m] = cplx(std::cos(ph), std::sin(ph));
      }
      break;
    }
    case Preset::Kind::Chirp: {
      for (std::size_t m = 0; m < N; ++m) {
        const double x = detail::wrap_centered(L * static_cast<double>(m) / static_cast<double>(N), L);
        const double ph = p.chirp_sign * p.chirp_rate * x * x;
        v[m] = cplx(std::cos(ph), std::sin(ph));
      }
      break;
    }
    case Preset::Kind::Gaussian: {
      if (!(p.width > 0)) throw config_error("gaussian width must be positive");
      for (std::size_t m = 0; m < N; ++m) {
        const double x = L * static_cast<double>(m) / static_cast<double>(N);
        const double dxc = detail::wrap_centered(x - p.center, L);
        const double env = std::exp(-(dxc * dxc) / (p.width * p.width));
        const double ph = kTwoPi * static_cast<double>(p.modulation) * x / L;
        v[m] = env * cplx(std::cos(ph), std::sin(ph));
      }
      break;
    }
    case Preset::Kind::Indicator: {
      if (p.b - p.a >= L) {
        std::fill(v.begin(), v.end(), cplx(1.0));
        break;
      }
      double a = std::fmod(p.a, L);
      double b = std::fmod(p.b, L);
      if (a < 0) a += L;
      if (b < 0) b += L;
      for (std::size_t m = 0; m < N; ++m) {
        const double x = L * static_cast<double>(m) / static_cast<double>(N);
        const bool in = a <= b ? (x >= a && x < b) : (x >= a || x < b);
        v[m] = in ? 1.0 : 0.0;
      }
      break;
    }
    case Preset::Kind::RandomBandlimited: {
      if (p.band >= static_cast<long>(N / 2)) throw config_error("band must be < N/2 (aliasing)");
      if (p.band < 0) throw config_error("band must be nonnegative");
      std::mt19937_64 rng(p.seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Spectrum s(N, L);
      const double scale = std::sqrt(L / static_cast<double>(2 * p.band + 1));
      for (long k = -p.band; k <= p.band; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s.at(k) = scale * cplx(re, im) / std::sqrt(2.0);
      }
      return idft(s);
    }
  }
  return GridFunction(std::move(v), L);
}

Spectrum dft(const GridFunction& f) {
  Spectrum s(f.N(), f.L());
  s.coeff = f.samples();
  fft_cache().transform(s.coeff, /*forward=*/true);
  const double scale = f.L() / static_cast<double>(f.N());
  for (cplx& c : s.coeff) c *= scale;
  return s;
}

GridFunction idft(const Spectrum& s) {
  std::vector<cplx> v = s.coeff;
  fft_cache().transform(v, /*forward=*/false);
  const double scale = 1.0 / s.L;
  for (cplx& c : v) c *= scale;
  return GridFunction(std::move(v), s.L);
}

double lp_quasinorm(const GridFunction& f, double p) {
  if (!(p > 0)) throw config_error("lp_quasinorm requires p > 0");
  if (std::isinf(p)) {
    double mx = 0;
    for (const cplx& v : f.samples()) mx = std::max(mx, std::abs(v));
    return mx;
  }
  double acc = 0;
  for (const cplx& v : f.samples()) acc += std::pow(std::abs(v), p);
  acc *= f.dx();
  return std::pow(acc, 1.0 / p);
}

GridFunction truncate(const GridFunction& f, double a, double b) {
  const double L = f.L();
  double aw = std::fmod(a, L);
  double bw = std::fmod(b, L);
  if (aw < 0) aw += L;
  if (bw < 0) bw += L;
  if (aw == bw && a != b && std::abs(b - a) >= L) {
    return f;  // full window
  }
  if (aw == bw) throw config_error("truncate: empty window");
  std::vector<cplx> v(f.N());
  for (std::size_t m = 0; m < f.N(); ++m) {
    const double x = f.x(m);
    const bool in = aw < bw ? (x >= aw && x < bw) : (x >= aw || x < bw);
    v[m] = in ? f[m] : cplx{};
  }
  return GridFunction(std::move(v), L);
}

void write_binary(const GridFunction& f, std::ostream& os) {
  const std::uint64_t n = f.N();
  const double L = f.L();
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  for (const cplx& v : f.samples()) {
    const double re = v.real(), im = v.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

GridFunction read_binary(std::istream& is) {
  std::uint64_t n = 0;
  double L = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  if (!is || n > (1u << 24)) throw config_error("bad GridFunction binary header");
  std::vector<cplx> v(n);
  for (std::uint64_t m = 0; m < n; ++m) {
    double re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    is.read(reinterpret_cast<char*>(&im), sizeof im);
    v[m] = cplx(re, im);
  }
  if (!is) throw config_error("truncated GridFunction binary payload");
  return GridFunction(std::move(v), L);
}

std::string to_json(const GridFunction& f) {
  nlohmann::json j;
  j["N"] = f.N();
  j["L"] = f.L();
  auto& arr = j["samples"] = nlohmann::json::array();
  for (const cplx& v : f.samples()) arr.push_back({v.real(), v.imag()});
  return j.dump();
}

GridFunction gridfunction_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const double L = j.at("L").get<double>();
  std::vector<cplx> v;
  for (const auto& e : j.at("samples")) {
    v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  }
  if (v.size() != j.at("N").get<std::size_t>()) throw config_error("JSON N mismatch");
  return GridFunction(std::move(v), L);
}

}  // namespace multiest
