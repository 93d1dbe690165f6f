#include "multiest/calibration.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "multiest/size_energy.hpp"

namespace multiest {

const char* constants_env_var() { return "MULTIEST_CONSTANTS"; }

const Constants& constants() {
  static const Constants frozen = [] {
    Constants c;
    if (const char* path = std::getenv(constants_env_var())) {
      std::ifstream is(path);
      if (!is) throw config_error(std::string("cannot open constants file: ") + path);
      nlohmann::json j;
      is >> j;
      c = constants_from_json(j);
    }
    return c;
  }();
  return frozen;
}

nlohmann::json to_json(const Constants& c) {
  return nlohmann::json{{"version", c.version}, {"seed", c.seed},
                        {"c_jn", c.c_jn},       {"c_cal", c.c_cal},
                        {"c_tool", c.c_tool},   {"c_tool_16", c.c_tool_16},
                        {"c_bessel", c.c_bessel}, {"c_strat", c.c_strat}};
}

Constants constants_from_json(const nlohmann::json& j) {
  Constants c;
  c.version = j.at("version").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.c_jn = j.at("c_jn").get<double>();
  c.c_cal = j.at("c_cal").get<double>();
  c.c_tool = j.at("c_tool").get<double>();
  c.c_tool_16 = j.at("c_tool_16").get<double>();
  c.c_bessel = j.at("c_bessel").get<double>();
  c.c_strat = j.at("c_strat").get<double>();
  return c;
}

TileCollection calibration_pool() {
  TileCollection coll;
  for (long long m = 0; m < 16; ++m) {
    coll.tiles.push_back(VectorTile(DyadicInterval{0, m},
                                    {ShiftedDyadicInterval{0, 0, 0}, ShiftedDyadicInterval{0, 2, 0},
                                     ShiftedDyadicInterval{0, 4, 0}}));
  }
  for (long long k = 0; k < 48; ++k) {
    coll.tiles.push_back(VectorTile(DyadicInterval{-1, k},
                                    {ShiftedDyadicInterval{1, 0, 0}, ShiftedDyadicInterval{1, 1, 0},
                                     ShiftedDyadicInterval{1, 2, 0}}));
  }
  return coll;
}

TileCollection calibration_lacunary() {
  LacunaryParams p;
  p.d = 3;
  p.levels = 2;
  p.per_level = 32;
  p.K = 3;
  p.base_scale = 0;
  return lacunary_collection(p);
}

namespace {

TileCollection random_subset(const TileCollection& pool, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(pool.tiles.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  TileCollection out;
  out.rank1_constant = pool.rank1_constant;
  for (std::size_t i = 0; i < count; ++i) out.tiles.push_back(pool.tiles[idx[i]]);
  return out;
}

CoeffSequence gaussian_seq(std::size_t count, int slot, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CoeffSequence seq{slot, {}};
  for (std::size_t i = 0; i < count; ++i) seq.values.emplace_back(g(rng), g(rng));
  return seq;
}

}  // namespace

CalibrationMeasurement run_calibration(std::uint64_t seed) {
  CalibrationMeasurement out;
  std::mt19937_64 rng(seed);
  TileCollection pool = calibration_pool();

  out.jn_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 200; ++t) {
    TileCollection coll = random_subset(pool, 8 + static_cast<std::size_t>(t) % 57, rng);
    CoeffSequence seq = gaussian_seq(coll.tiles.size(), 0, rng);
    const double s = size(coll, seq, 0).value;
    const double jn = size_jn(coll, seq, 0);
    out.jn_max = std::max(out.jn_max, jn / s);
    out.jn_min = std::min(out.jn_min, jn / s);
  }

  TileCollection lac = calibration_lacunary();
  for (int t = 0; t < 100; ++t) {
    GridFunction f = from_preset(Preset::random_bandlimited(900, seed + 1000 + static_cast<std::uint64_t>(t)),
                                 2048, 128.0);
    out.cal_max = std::max(out.cal_max, energy_l2_check(lac, f, 0));
  }

  for (int t = 0; t < 50; ++t) {
    for (std::size_t count : {std::size_t{16}, std::size_t{64}}) {
      TileCollection coll = random_subset(pool, count, rng);
      std::vector<CoeffSequence> seqs;
      for (int j = 0; j < 3; ++j) seqs.push_back(gaussian_seq(coll.tiles.size(), j, rng));
      auto rep = tool_check(coll, seqs, {0.5, 0.5, 0.0});
      (count == 16 ? out.tool_max_16 : out.tool_max_64) =
          std::max(count == 16 ? out.tool_max_16 : out.tool_max_64, rep.ratio);
    }
  }

  for (int t = 0; t < 50; ++t) {
    TileCollection coll = random_subset(pool, 16 + static_cast<std::size_t>(t) % 49, rng);
    CoeffSequence seq = gaussian_seq(coll.tiles.size(), 0, rng);
    auto st = stratify(coll, seq, 0);
    if (!verify_stratification(coll, seq, 0, st)) ++out.strat_failures;
    out.strat_max = std::max(out.strat_max, st.c_strat);
  }

  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 50; ++t) {
    TileCollection P, Q;
    for (long long m = 0; m < 16; ++m) {
      P.tiles.push_back(VectorTile(DyadicInterval{0, m},
                                   {ShiftedDyadicInterval{0, 0, 0}, ShiftedDyadicInterval{0, 2, 0},
                                    ShiftedDyadicInterval{0, 4, 0}}));
      Q.tiles.push_back(VectorTile(DyadicInterval{0, 16 + ((m * 5 + t) % 32)},
                                   {ShiftedDyadicInterval{0, 0, 0}, ShiftedDyadicInterval{0, 2, 0},
                                    ShiftedDyadicInterval{0, 4, 0}}));
    }
    CoeffSequence cP{0, {}}, cQ{0, {}};
    for (int m = 0; m < 16; ++m) {
      cP.values.push_back(std::polar(0.25, phase(rng)));
      cQ.values.push_back(std::polar(0.25, phase(rng)));
    }
    out.bessel_max = std::max(out.bessel_max,
                              std::abs(bessel_sum(P, Q, cP, cQ, 0, 0, 2048, 128.0)));
  }
  return out;
}

}  // namespace multiest
