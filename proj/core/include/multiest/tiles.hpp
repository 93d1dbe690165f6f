#pragma once

#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "multiest/dyadic.hpp"
#include "multiest/grid.hpp"
#include "multiest/trees.hpp"

namespace multiest {

// Standard dyadic interval [2^j k, 2^j (k+1)).
struct DyadicInterval {
  int j = 0;
  long long k = 0;
  std::pair<rational, rational> endpoints() const;
  rational length() const { return pow2(j); }
  rational center() const;
  bool operator==(const DyadicInterval&) const = default;
};

bool contains(const DyadicInterval& outer, const DyadicInterval& inner);

// Time-frequency rectangle of area one.
struct Tile {
  DyadicInterval time;
  ShiftedDyadicInterval freq;
  Tile(DyadicInterval t, ShiftedDyadicInterval f);
  bool operator==(const Tile&) const = default;
};

struct VectorTile {
  DyadicInterval time;
  std::vector<ShiftedDyadicInterval> freqs;
  VectorTile(DyadicInterval t, std::vector<ShiftedDyadicInterval> f);
  std::size_t dim() const { return freqs.size(); }
  Tile component(std::size_t i) const { return Tile(time, freqs.at(i)); }
  QuasiCube freq_cube() const;
  bool operator==(const VectorTile&) const = default;
};

struct TileCollection {
  std::vector<VectorTile> tiles;
  rational rank1_constant = 16;
};

enum class OrderRel { lt, le, lesssim, lesssim_prime };

// Relations of P' (first argument) relative to P (second argument).
std::set<OrderRel> order_relations(const Tile& Pprime, const Tile& P, const rational& C);

struct Rank1Report {
  bool ok = true;
  bool sparse_ok = true;
  struct Violation {
    std::size_t p = 0, q = 0;  // indices into the collection
    int condition = 0;         // 1, 2 or 3
  };
  std::vector<Violation> violations;
};

Rank1Report rank1_check(const TileCollection& coll);

struct WavePacket {
  Tile tile;
  int s = 6;
  GridFunction realization;
  double l2_norm = 1.0;
};

// Smooth frequency bump on 9/10 omega_P, modulated to the time center.
WavePacket make_wave_packet(const Tile& tile, int s, std::size_t N, double L);
// Translate by dx (exact phase shift in frequency).
GridFunction translate(const GridFunction& f, double dx);
double chi_tilde(const DyadicInterval& I, double x);

struct LacunaryParams {
  int d = 3;          // vector tile dimension
  int levels = 4;     // number of scales
  int per_level = 4;  // time positions per scale
  int K = 3;          // frequency offset multiplier for the non-anchored slots
  int base_scale = 0; // time length at the finest level is 2^base_scale
};

// Rank-1 family: coordinate 1 anchored in a lacunary chain at frequency 0,
// coordinate j offset by (j-1)K frequency lengths; scales spaced so the cube
// family is sparse.
TileCollection lacunary_collection(const LacunaryParams& p);

// Recursive discrete model operators. Internal vertices of G (preorder ids)
// carry rank-1 collections of dimension (#sons + 1).
GridFunction model_apply(const RootedTree& G, const std::map<int, TileCollection>& colls,
                         const std::vector<GridFunction>& fs, int alpha_samples, int s = 6);
// Truncated variant: only tiles with |I_P| >= min_len contribute at any level.
GridFunction model_apply_truncated(const RootedTree& G, const std::map<int, TileCollection>& colls,
                                   const std::vector<GridFunction>& fs, int alpha_samples,
                                   const rational& min_len, int s = 6);

cplx model_form(const RootedTree& G, const std::map<int, TileCollection>& colls,
                const std::vector<GridFunction>& fs, const GridFunction& f_last,
                int alpha_samples, int s = 6);

nlohmann::json to_json(const VectorTile& vt);
VectorTile vector_tile_from_json(const nlohmann::json& j);

}  // namespace multiest
