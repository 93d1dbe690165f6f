#include "multiest/dyadic.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace multiest {

using boost::multiprecision::cpp_int;

rational pow2(int j) {
  if (j >= 0) return rational(cpp_int(1) << j, 1);
  return rational(1, cpp_int(1) << (-j));
}

rational to_rational(double x) {
  if (!std::isfinite(x)) throw config_error("cannot convert non-finite double to rational");
  if (x == 0.0) return rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [1/2,1)
  const long long m = static_cast<long long>(std::ldexp(mant, 53));
  return rational(m) * pow2(exp - 53);
}

std::pair<rational, rational> ShiftedDyadicInterval::endpoints() const {
  const int sign = (j % 2 == 0) ? 1 : -1;  // (-1)^j
  const rational left = pow2(j) * rational(3 * static_cast<long long>(k) + sign * alpha_index, 3);
  return {left, left + pow2(j)};
}

rational ShiftedDyadicInterval::center() const {
  auto [lo, hi] = endpoints();
  return (lo + hi) / 2;
}

QuasiCube::QuasiCube(std::vector<ShiftedDyadicInterval> comps) : components(std::move(comps)) {
  if (components.empty()) throw config_error("quasi-cube needs dimension >= 1");
  if (components.size() > 8) throw config_error("quasi-cube dimension > 8 unsupported");
  int jmin = components.front().j, jmax = jmin;
  for (const auto& c : components) {
    jmin = std::min(jmin, c.j);
    jmax = std::max(jmax, c.j);
  }
  if (jmax - jmin > 1) throw config_error("quasi-cube side lengths must be comparable within factor 2");
}

RatBox QuasiCube::box() const {
  RatBox b;
  for (const auto& c : components) {
    auto [lo, hi] = c.endpoints();
    b.sides.push_back({lo, hi});
  }
  return b;
}

void RegionParams::validate() const {
  if (!(c_sep > 1) || !(c_comp > 1) || !(c_dist > 1)) {
    throw config_error("RegionParams constants must be > 1 and finite");
  }
}

RatInterval shrink(const ShiftedDyadicInterval& I, const rational& fraction) {
  auto [lo, hi] = I.endpoints();
  const rational c = (lo + hi) / 2;
  const rational half = (hi - lo) / 2 * fraction;
  return {c - half, c + half};
}

RatBox shrink(const QuasiCube& Q, const rational& fraction) {
  RatBox b;
  for (const auto& c : Q.components) b.sides.push_back(shrink(c, fraction));
  return b;
}

std::optional<ShiftedDyadicInterval> cover_interval_at_scale(const RatInterval& target, int j) {
  // Candidate positions near k ~ target.lo / 2^j; the shift alpha covers the
  // alignment gaps, so a small k window suffices.
  const rational approx = target.lo / pow2(j);
  const cpp_int kfloor = static_cast<cpp_int>(boost::multiprecision::numerator(approx) / boost::multiprecision::denominator(approx)) -
                         (approx < 0 && approx * boost::multiprecision::denominator(approx) != boost::multiprecision::numerator(approx) ? 1 : 0);
  const long long k0 = kfloor.convert_to<long long>();
  for (long long k = k0 - 2; k <= k0 + 2; ++k) {
    for (int alpha = 0; alpha <= 2; ++alpha) {
      ShiftedDyadicInterval I{j, k, alpha};
      if (shrink(I, rational(7, 10)).contains(target)) return I;
    }
  }
  return std::nullopt;
}

QuasiCube cover_cube(const RatBox& target) {
  if (target.dim() == 0) throw config_error("cover_cube: empty target");
  rational lmin = target.sides.front().length();
  rational lmax = lmin;
  for (const auto& s : target.sides) {
    if (!(s.length() > 0)) throw config_error("cover_cube: degenerate target side");
    lmin = std::min(lmin, s.length());
    lmax = std::max(lmax, s.length());
  }
  if (lmax > 2 * lmin) throw config_error("cover_cube: target side ratio exceeds 2");

  // Smallest possible scale: 7/10 * 2^j must at least reach lmax.
  int j = 0;
  while (pow2(j) * rational(7, 10) < lmax) ++j;
  while (j > -1024 && pow2(j - 1) * rational(7, 10) >= lmax) --j;

  for (int scan = 0; scan < 8; ++scan, ++j) {
    std::vector<ShiftedDyadicInterval> comps;
    bool ok = true;
    for (const auto& s : target.sides) {
      auto I = cover_interval_at_scale(s, j);
      if (!I) {
        ok = false;
        break;
      }
      comps.push_back(*I);
    }
    if (ok) return QuasiCube(std::move(comps));
  }
  throw guard_error("cover_cube: no cover found in scanned scale range (bug)");
}

bool is_adapted(const QuasiCube& Q, const std::vector<rational>& a, const RegionParams& rp) {
  rp.validate();
  if (a.size() != Q.dim() || a.size() < 2) throw config_error("is_adapted: dimension mismatch");
  for (const auto& w : a) {
    if (!(w > 0)) throw config_error("is_adapted: weights must be positive");
  }
  const rational cdist = to_rational(rp.c_dist);
  const RatBox box = Q.box();
  for (std::size_t i = 0; i + 1 < Q.dim(); ++i) {
    const RatInterval& X = box.sides[i];
    const RatInterval& Y = box.sides[i + 1];
    const rational& aj = a[i];
    const rational& anext = a[i + 1];
    // Entirely inside {a_j x < a_{j+1} y}: the maximum of a_j x - a_{j+1} y
    // over the closed face must be negative.
    const rational margin = anext * Y.lo - aj * X.hi;
    if (!(margin > 0)) return false;
    // dist^2 and diam^2 comparisons, squared to stay rational.
    const rational dist2 = margin * margin / (aj * aj + anext * anext);
    const rational diam2 = X.length() * X.length() + Y.length() * Y.length();
    if (cdist * cdist * diam2 > dist2) return false;
    if (dist2 > 10000 * cdist * cdist * diam2) return false;
  }
  return true;
}

namespace {

bool boxes_intersect(const RatBox& A, const RatBox& B) {
  for (std::size_t i = 0; i < A.dim(); ++i) {
    if (!(A.sides[i].lo < B.sides[i].hi && B.sides[i].lo < A.sides[i].hi)) return false;
  }
  return true;
}

RatBox dilate(const QuasiCube& Q, const rational& C) {
  RatBox b;
  for (const auto& c : Q.components) {
    auto [lo, hi] = c.endpoints();
    const rational ctr = (lo + hi) / 2;
    const rational half = (hi - lo) / 2 * C;
    b.sides.push_back({ctr - half, ctr + half});
  }
  return b;
}

}  // namespace

bool is_sparse(const std::vector<QuasiCube>& cubes, const rational& C) {
  if (!(C > 1)) throw config_error("is_sparse: C must be > 1");
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j2 = i + 1; j2 < cubes.size(); ++j2) {
      const QuasiCube& A = cubes[i];
      const QuasiCube& B = cubes[j2];
      if (A.dim() != B.dim()) throw config_error("is_sparse: mixed dimensions");
      const rational la = A.l(), lb = B.l();
      if (la < lb) {
        if (!(C * la < lb)) return false;
      } else if (lb < la) {
        if (!(C * lb < la)) return false;
      } else {
        if (boxes_intersect(dilate(A, C), dilate(B, C))) return false;
      }
    }
  }
  return true;
}

std::string to_json(const ShiftedDyadicInterval& I) {
  nlohmann::json j{{"j", I.j}, {"k", I.k}, {"alpha_index", I.alpha_index}};
  return j.dump();
}

std::string to_json(const QuasiCube& Q) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : Q.components) {
    arr.push_back(nlohmann::json{{"j", c.j}, {"k", c.k}, {"alpha_index", c.alpha_index}});
  }
  return arr.dump();
}

ShiftedDyadicInterval interval_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return ShiftedDyadicInterval{j.at("j").get<int>(), j.at("k").get<long long>(), j.at("alpha_index").get<int>()};
}

QuasiCube cube_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<ShiftedDyadicInterval> comps;
  for (const auto& j : arr) {
    comps.push_back({j.at("j").get<int>(), j.at("k").get<long long>(), j.at("alpha_index").get<int>()});
  }
  return QuasiCube(std::move(comps));
}

}  // namespace multiest
