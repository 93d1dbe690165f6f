#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "multiest/size_energy.hpp"
#include "multiest/tiles.hpp"

using namespace multiest;

namespace {

VectorTile vt3(int tj, long long tk, long long f0, long long f1, long long f2) {
  return VectorTile(DyadicInterval{tj, tk},
                    {ShiftedDyadicInterval{-tj, f0, 0}, ShiftedDyadicInterval{-tj, f1, 0},
                     ShiftedDyadicInterval{-tj, f2, 0}});
}

// Two scales: 16 coarse unit tiles over [0,16) and 32 half-length tiles under
// them; every fine tile sits below exactly one coarse tile in each slot.
TileCollection two_scale_collection() {
  TileCollection coll;
  for (long long m = 0; m < 16; ++m) coll.tiles.push_back(vt3(0, m, 0, 2, 4));
  for (long long k = 0; k < 32; ++k) {
    coll.tiles.push_back(VectorTile(DyadicInterval{-1, k},
                                    {ShiftedDyadicInterval{1, 0, 0}, ShiftedDyadicInterval{1, 1, 0},
                                     ShiftedDyadicInterval{1, 2, 0}}));
  }
  return coll;
}

CoeffSequence random_seq(const TileCollection& coll, int slot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CoeffSequence seq{slot, {}};
  for (std::size_t p = 0; p < coll.tiles.size(); ++p) seq.values.emplace_back(g(rng), g(rng));
  return seq;
}

// Exhaustive tree enumeration: every member is a candidate top; a maximal
// i-tree below it collects the full down-set.
double oracle_size(const TileCollection& coll, const CoeffSequence& seq, int j) {
  double best = 0.0;
  const std::size_t d = coll.tiles.front().dim();
  for (std::size_t i = 0; i < d; ++i) {
    if (static_cast<int>(i) == j) continue;
    for (const auto& top : coll.tiles) {
      double sum = 0.0;
      for (std::size_t p = 0; p < coll.tiles.size(); ++p) {
        auto rel = order_relations(coll.tiles[p].component(i), top.component(i),
                                   coll.rank1_constant);
        if (rel.count(OrderRel::le)) sum += std::norm(seq.values[p]);
      }
      best = std::max(best, std::sqrt(sum / static_cast<double>(top.time.length())));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("size on singletons and disjoint pairs") {
  TileCollection single;
  single.tiles.push_back(vt3(-2, 0, 0, 8, 16));
  CoeffSequence a{0, {cplx(1.0, 0.0)}};
  auto res = size(single, a, 0);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.witness.members == std::vector<std::size_t>{0});

  CoeffSequence zero{0, {cplx(0.0, 0.0)}};
  CHECK(size(single, zero, 0).value == 0.0);

  TileCollection pair;
  pair.tiles.push_back(vt3(0, 0, 0, 2, 4));
  pair.tiles.push_back(vt3(0, 10, 20, 40, 60));
  CoeffSequence ones{0, {cplx(1.0, 0.0), cplx(1.0, 0.0)}};
  CHECK(size(pair, ones, 0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(size(pair, ones, 0).value == doctest::Approx(oracle_size(pair, ones, 0)));

  CHECK_THROWS_AS(size(TileCollection{}, ones, 0), config_error);
  CHECK_THROWS_AS(size(pair, a, 0), config_error);
  CHECK_THROWS_AS(size(pair, ones, 5), config_error);
}

TEST_CASE("size matches exhaustive enumeration on small collections") {
  TileCollection coll = two_scale_collection();
  coll.tiles.erase(coll.tiles.begin() + 8, coll.tiles.begin() + 16);
  coll.tiles.erase(coll.tiles.begin() + 24, coll.tiles.end());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CoeffSequence seq = random_seq(coll, 0, seed);
    for (int j = 0; j < 3; ++j) {
      seq.slot = j;
      CHECK(size(coll, seq, j).value == doctest::Approx(oracle_size(coll, seq, j)));
    }
  }
}

TEST_CASE("size monotonicity under collection restriction") {
  TileCollection full = two_scale_collection();
  CoeffSequence seq = random_seq(full, 0, 77);
  TileCollection part;
  part.tiles.assign(full.tiles.begin(), full.tiles.begin() + 24);
  CoeffSequence sub{0, {seq.values.begin(), seq.values.begin() + 24}};
  for (int j = 0; j < 3; ++j) {
    CHECK(size(part, sub, j).value <= size(full, seq, j).value + 1e-12);
  }
}

TEST_CASE("size_jn comparability") {
  TileCollection single;
  single.tiles.push_back(vt3(-2, 0, 0, 8, 16));
  CoeffSequence a{0, {cplx(1.0, 0.0)}};
  const double s = size(single, a, 0).value;
  const double jn = size_jn(single, a, 0);
  CHECK(jn / s >= 0.25);
  CHECK(jn / s <= 4.0);

  CoeffSequence zero{0, {cplx(0.0, 0.0)}};
  CHECK(size_jn(single, zero, 0) == 0.0);

  TileCollection coll = two_scale_collection();
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    CoeffSequence seq = random_seq(coll, 0, seed);
    const double sv = size(coll, seq, 0).value;
    const double jv = size_jn(coll, seq, 0);
    CHECK(jv / sv >= 1.0 / 16.0);
    CHECK(jv / sv <= 16.0);
  }
}

TEST_CASE("energy on singleton families") {
  TileCollection single;
  single.tiles.push_back(vt3(0, 0, 0, 2, 4));
  CoeffSequence a{0, {cplx(1.0, 0.0)}};
  auto res = energy(single, a, 0);
  CHECK(res.value >= 0.5);
  CHECK(res.value <= 1.0);
  CHECK(res.interior);
  CHECK(verify_energy_certificate(single, a, 0, res));

  CoeffSequence zero{0, {cplx(0.0, 0.0)}};
  CHECK(energy(single, zero, 0).value == 0.0);

  for (int K = 1; K <= 8; ++K) {
    TileCollection coll;
    CoeffSequence seq{0, {}};
    for (long long m = 0; m < K; ++m) {
      coll.tiles.push_back(vt3(0, 8 * m, 16 * m, 16 * m + 2, 16 * m + 4));
      seq.values.emplace_back(1.0, 0.0);
    }
    auto r = energy(coll, seq, 0);
    CHECK(r.value >= std::sqrt(static_cast<double>(K)) / 2.0 - 1e-12);
    CHECK(r.value <= std::sqrt(static_cast<double>(K)) + 1e-12);
    CHECK(verify_energy_certificate(coll, seq, 0, r));
  }
}

TEST_CASE("energy homogeneity and certificates on mixed scales") {
  TileCollection coll = two_scale_collection();
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    CoeffSequence seq = random_seq(coll, 0, seed);
    auto r1 = energy(coll, seq, 0);
    CHECK(verify_energy_certificate(coll, seq, 0, r1));
    CoeffSequence twice = seq;
    for (auto& v : twice.values) v *= 2.0;
    auto r2 = energy(coll, twice, 0);
    CHECK(r2.value >= r1.value - 1e-12);
    CHECK(r2.value <= 4.0 * r1.value + 1e-12);
    CHECK(verify_energy_certificate(coll, twice, 0, r2));
  }
}

TEST_CASE("energy budget guard") {
  TileCollection big;
  CoeffSequence seq{0, {}};
  for (long long m = 0; m < 513; ++m) {
    big.tiles.push_back(vt3(0, m, 0, 2, 4));
    seq.values.emplace_back(1.0, 0.0);
  }
  CHECK_THROWS_AS(energy(big, seq, 0), guard_error);
  CHECK_THROWS_AS(stratify(big, seq, 0), guard_error);
}

TEST_CASE("energy_l2_check against realized packets") {
  TileCollection coll;
  for (long long m = 0; m < 4; ++m) coll.tiles.push_back(vt3(0, m, 0, 2, 4));
  const std::size_t N = 512;
  const double L = 16.0;
  WavePacket wp = make_wave_packet(coll.tiles[1].component(0), 6, N, L);
  CHECK(energy_l2_check(coll, wp.realization, 0) >= 0.25);
  CHECK(energy_l2_check(coll, wp.realization, 0) <= 4.0);

  GridFunction ortho = from_preset(Preset::pure_mode(-128), N, L);
  CHECK(energy_l2_check(coll, ortho, 0) < 1e-10);
}

TEST_CASE("stratify trivial cases") {
  TileCollection single;
  single.tiles.push_back(vt3(0, 0, 0, 2, 4));
  CoeffSequence zero{0, {cplx(0.0, 0.0)}};
  auto st0 = stratify(single, zero, 0);
  REQUIRE(st0.strata.size() == 1);
  CHECK(st0.strata[0].trees.empty());
  CHECK(st0.strata[0].size_bound == 0.0);
  CHECK(st0.residual == std::vector<std::size_t>{0});
  CHECK(verify_stratification(single, zero, 0, st0));

  CoeffSequence a{0, {cplx(1.0, 0.0)}};
  auto st1 = stratify(single, a, 0);
  REQUIRE(st1.strata.size() == 1);
  REQUIRE(st1.strata[0].trees.size() == 1);
  CHECK(st1.strata[0].trees[0].members == std::vector<std::size_t>{0});
  CHECK(st1.residual.empty());
  CHECK(verify_stratification(single, a, 0, st1));
}

TEST_CASE("stratify self-certifies on a 48-tile instance") {
  TileCollection coll = two_scale_collection();
  for (std::uint64_t seed = 60; seed < 64; ++seed) {
    CoeffSequence seq = random_seq(coll, 0, seed);
    auto st = stratify(coll, seq, 0);
    CHECK(verify_stratification(coll, seq, 0, st));
    std::size_t covered = st.residual.size();
    for (const auto& stratum : st.strata) {
      CHECK(stratum.size_bound <= std::min(st.size_total,
                                           std::exp2(-stratum.level) * st.energy_total) + 1e-12);
      for (const auto& tree : stratum.trees) covered += tree.members.size();
    }
    CHECK(covered == coll.tiles.size());
  }
}

TEST_CASE("tool_check exponent contract and singleton values") {
  TileCollection single;
  single.tiles.push_back(vt3(0, 0, 0, 2, 4));
  std::vector<CoeffSequence> seqs = {{0, {cplx(1.0, 0.0)}},
                                     {1, {cplx(1.0, 0.0)}},
                                     {2, {cplx(1.0, 0.0)}}};
  auto rep = tool_check(single, seqs, {0.5, 0.5, 0.0});
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.rhs >= 1.0 / 8.0);
  CHECK(rep.rhs <= 8.0);
  CHECK(rep.ratio == doctest::Approx(rep.lhs / rep.rhs));

  seqs[1].values[0] = cplx(0.0, 0.0);
  auto rep0 = tool_check(single, seqs, {0.5, 0.5, 0.0});
  CHECK(rep0.lhs == 0.0);
  CHECK(rep0.lhs <= rep0.rhs);

  CHECK_THROWS_AS(tool_check(single, seqs, {0.5, 0.25, 0.0}), config_error);
  CHECK_THROWS_AS(tool_check(single, seqs, {1.0, 0.0, 0.0}), config_error);
  CHECK_THROWS_AS(tool_check(single, seqs, {0.5, 0.5}), config_error);
}

TEST_CASE("bessel_sum orthogonality, single pair and normalization guard") {
  const std::size_t N = 512;
  const double L = 16.0;
  TileCollection P, Q;
  P.tiles.push_back(vt3(0, 2, 0, 2, 4));
  Q.tiles.push_back(vt3(0, 9, 8, 10, 12));
  CoeffSequence cP{0, {cplx(1.0, 0.0)}};
  CoeffSequence cQ{0, {cplx(1.0, 0.0)}};
  CHECK(std::abs(bessel_sum(P, Q, cP, cQ, 0, 0, N, L)) < 1e-10);

  auto same = bessel_sum(P, P, cP, cP, 0, 0, N, L);
  CHECK(std::abs(same) >= 0.25);
  CHECK(std::abs(same) <= 4.0);

  CoeffSequence bad{0, {cplx(2.0, 0.0)}};
  CHECK_THROWS_AS(bessel_sum(P, Q, bad, cQ, 0, 0, N, L), config_error);
}

TEST_CASE("delicate decay probe") {
  CHECK_THROWS_AS(delicate_decay_probe(1, 1, 9, 2, 7), config_error);
  CHECK_THROWS_AS(delicate_decay_probe(1, 6, 5, 2, 7), config_error);

  auto probe = delicate_decay_probe(1, 4, 9, 2, 7);
  REQUIRE(probe.k2_values.size() == 6);
  CHECK(probe.slope <= -1.0);
}
