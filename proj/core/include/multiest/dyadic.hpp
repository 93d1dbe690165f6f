#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "multiest/errors.hpp"

namespace multiest {

using rational = boost::multiprecision::cpp_rational;

// Exact power 2^j for any integer j.
rational pow2(int j);
// Doubles are dyadic rationals; the conversion is exact.
rational to_rational(double x);

// Interval 2^j (k + (0,1) + (-1)^j alpha), alpha = alpha_index/3.
struct ShiftedDyadicInterval {
  int j = 0;
  long long k = 0;
  int alpha_index = 0;  // 0, 1, 2  <->  alpha = 0, 1/3, 2/3

  std::pair<rational, rational> endpoints() const;
  rational length() const { return pow2(j); }
  rational left() const { return endpoints().first; }
  rational right() const { return endpoints().second; }
  rational center() const;
  bool operator==(const ShiftedDyadicInterval&) const = default;
};

// Closed-form rational box, used for shrunk cubes and cover targets.
struct RatInterval {
  rational lo, hi;
  rational length() const { return hi - lo; }
  rational center() const { return (lo + hi) / 2; }
  bool contains(const RatInterval& inner) const { return lo <= inner.lo && inner.hi <= hi; }
};

struct RatBox {
  std::vector<RatInterval> sides;
  std::size_t dim() const { return sides.size(); }
};

struct QuasiCube {
  std::vector<ShiftedDyadicInterval> components;

  explicit QuasiCube(std::vector<ShiftedDyadicInterval> comps);
  std::size_t dim() const { return components.size(); }
  // Side length of the first component (the cube scale l(Q)).
  rational l() const { return components.front().length(); }
  RatBox box() const;
  bool operator==(const QuasiCube&) const = default;
};

struct RegionParams {
  double c_sep = 16.0;   // "A << B" means c_sep * A <= B
  double c_comp = 4.0;   // "A ~ B" means max/min <= c_comp
  double c_dist = 4.0;   // dist ~ diam means c_dist*diam <= dist <= 100*c_dist*diam
  void validate() const;
};

// Parallelepiped with the same center, sides scaled by `fraction`.
RatInterval shrink(const ShiftedDyadicInterval& I, const rational& fraction);
RatBox shrink(const QuasiCube& Q, const rational& fraction);

// Smallest-scale shifted dyadic quasi-cube Q with target inside shrink(Q,7/10);
// deterministic tie-break: smallest j, then k, then alpha, per dimension.
QuasiCube cover_cube(const RatBox& target);
std::optional<ShiftedDyadicInterval> cover_interval_at_scale(const RatInterval& target, int j);

// Adaptedness to R_a: each consecutive face inside {a_j x_j < a_{j+1} x_{j+1}}
// with c_dist*diam <= dist(face, boundary line) <= 100*c_dist*diam.
bool is_adapted(const QuasiCube& Q, const std::vector<rational>& a, const RegionParams& rp);

bool is_sparse(const std::vector<QuasiCube>& cubes, const rational& C);

std::string to_json(const ShiftedDyadicInterval& I);
std::string to_json(const QuasiCube& Q);
ShiftedDyadicInterval interval_from_json(const std::string& text);
QuasiCube cube_from_json(const std::string& text);

}  // namespace multiest
