#pragma once

#include <cstdint>

#include <json.hpp>

#include "multiest/tiles.hpp"

namespace multiest {

// Empirical constants for the inequalities that the underlying estimates state
// only up to absolute factors. Frozen from one recorded calibration run; the
// acceptance suite re-runs the same seeded ensembles and asserts against
// these values. Override via the MULTIEST_CONSTANTS environment variable
// (path to a JSON file with the same fields).
struct Constants {
  int version = 1;
  std::uint64_t seed = 727270;
  double c_jn = 16.0;      // John-Nirenberg size comparability
  double c_cal = 0.5;      // energy / L2-norm ratio cap (measured 0.223)
  double c_tool = 2.0;     // tool inequality lhs/rhs cap at 64 tiles (measured 0.271)
  double c_tool_16 = 2.0;  // same cap at 16 tiles (measured 0.959)
  double c_bessel = 1.0;   // |bessel_sum| cap on admissible ensembles (measured 0.145)
  double c_strat = 13.0;   // stratification tree-measure / 2^{2n} cap (measured 6.5)
};

const Constants& constants();
const char* constants_env_var();

nlohmann::json to_json(const Constants& c);
Constants constants_from_json(const nlohmann::json& j);

struct CalibrationMeasurement {
  double jn_max = 0.0, jn_min = 0.0;  // extreme size_jn/size ratios
  double cal_max = 0.0;               // max energy_l2_check ratio
  double tool_max_16 = 0.0, tool_max_64 = 0.0;
  double bessel_max = 0.0;
  double strat_max = 0.0;  // max reported c_strat
  int strat_failures = 0;  // stratifications whose certificate failed
};

// The seeded ensembles behind the frozen constants; shared by the acceptance
// suite and the audit subcommand.
CalibrationMeasurement run_calibration(std::uint64_t seed);

// 16 unit vector tiles + 48 half-length ones below them; the instance pool
// for the size/energy ensembles.
TileCollection calibration_pool();
// Rank-1 two-scale family of 64 tiles realizable on a (N=2048, L=128) grid.
TileCollection calibration_lacunary();

}  // namespace multiest
