#include "multiest/tiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace multiest {

namespace {

RatInterval dilate(const ShiftedDyadicInterval& I, const rational& factor) {
  const rational c = I.center();
  const rational half = factor * I.length() / 2;
  return RatInterval{c - half, c + half};
}

// k-fold box convolution on [0, k]: compact support, C^{k-2}, and a Fourier
// transform that factors into k sinc terms, so the envelope decay constants
// stay small at moderate distances.
double bspline(int k, double u) {
  if (u <= 0.0 || u >= static_cast<double>(k)) return 0.0;
  double fact = 1.0;
  for (int i = 2; i < k; ++i) fact *= i;
  double acc = 0.0, c = 1.0;
  for (int j = 0; j <= static_cast<int>(u); ++j) {
    acc += c * std::pow(u - j, k - 1);
    c *= -static_cast<double>(k - j) / (j + 1);
  }
  return acc / fact;
}

}  // namespace

std::pair<rational, rational> DyadicInterval::endpoints() const {
  const rational len = pow2(j);
  return {len * k, len * (k + 1)};
}

rational DyadicInterval::center() const {
  auto [lo, hi] = endpoints();
  return (lo + hi) / 2;
}

bool contains(const DyadicInterval& outer, const DyadicInterval& inner) {
  auto [olo, ohi] = outer.endpoints();
  auto [ilo, ihi] = inner.endpoints();
  return olo <= ilo && ihi <= ohi;
}

Tile::Tile(DyadicInterval t, ShiftedDyadicInterval f) : time(t), freq(f) {
  if (time.j + freq.j != 0) throw config_error("tile: |I_P| * |omega_P| must equal 1");
}

VectorTile::VectorTile(DyadicInterval t, std::vector<ShiftedDyadicInterval> f)
    : time(t), freqs(std::move(f)) {
  if (freqs.empty()) throw config_error("vector tile: empty frequency list");
  for (const auto& w : freqs) {
    if (time.j + w.j != 0) throw config_error("vector tile: component violates area one");
  }
}

QuasiCube VectorTile::freq_cube() const { return QuasiCube(freqs); }

std::set<OrderRel> order_relations(const Tile& Pprime, const Tile& P, const rational& C) {
  std::set<OrderRel> rel;
  const bool time_sub = contains(P.time, Pprime.time);
  const bool time_strict = time_sub && !(Pprime.time == P.time);
  const bool lt = time_strict && dilate(Pprime.freq, 3).contains(dilate(P.freq, 3));
  const bool le = lt || Pprime == P;
  const bool lesssim = time_sub && dilate(Pprime.freq, C).contains(dilate(P.freq, C));
  if (lt) rel.insert(OrderRel::lt);
  if (le) rel.insert(OrderRel::le);
  if (lesssim) rel.insert(OrderRel::lesssim);
  if (lesssim && !le) rel.insert(OrderRel::lesssim_prime);
  return rel;
}

Rank1Report rank1_check(const TileCollection& coll) {
  Rank1Report rep;
  const auto& ts = coll.tiles;
  const rational& C = coll.rank1_constant;
  if (ts.empty()) return rep;
  const std::size_t d = ts.front().dim();
  for (const auto& vt : ts) {
    if (vt.dim() != d) throw config_error("rank1_check: mixed vector tile dimensions");
  }

  auto le = [&](const Tile& a, const Tile& b) {
    return order_relations(a, b, C).count(OrderRel::le) > 0;
  };
  auto lesssim = [&](const Tile& a, const Tile& b) {
    return order_relations(a, b, C).count(OrderRel::lesssim) > 0;
  };
  auto lesssim_prime = [&](const Tile& a, const Tile& b) {
    return order_relations(a, b, C).count(OrderRel::lesssim_prime) > 0;
  };

  for (std::size_t q = 0; q < ts.size(); ++q) {
    for (std::size_t p = 0; p < ts.size(); ++p) {
      if (p == q) continue;
      const VectorTile& P = ts[q];
      const VectorTile& Pp = ts[p];
      if (p < q) {
        bool shared = false;
        for (std::size_t i = 0; i < d && !shared; ++i) {
          shared = Pp.component(i) == P.component(i);
        }
        if (shared) rep.violations.push_back({p, q, 1});
      }
      bool any_le = false;
      for (std::size_t i = 0; i < d; ++i) {
        if (le(Pp.component(i), P.component(i))) any_le = true;
      }
      if (any_le) {
        for (std::size_t i = 0; i < d; ++i) {
          if (!lesssim(Pp.component(i), P.component(i))) {
            rep.violations.push_back({p, q, 2});
            break;
          }
        }
        if (C * Pp.time.length() < P.time.length()) {
          for (std::size_t j = 0; j < d; ++j) {
            if (!le(Pp.component(j), P.component(j))) continue;
            for (std::size_t i = 0; i < d; ++i) {
              if (i == j) continue;
              if (!lesssim_prime(Pp.component(i), P.component(i))) {
                rep.violations.push_back({p, q, 3});
                j = d;
                break;
              }
            }
          }
        }
      }
    }
  }

  std::vector<QuasiCube> cubes;
  for (const auto& vt : ts) {
    QuasiCube c = vt.freq_cube();
    if (std::find(cubes.begin(), cubes.end(), c) == cubes.end()) cubes.push_back(c);
  }
  rep.sparse_ok = is_sparse(cubes, C);
  rep.ok = rep.violations.empty() && rep.sparse_ok;
  return rep;
}

WavePacket make_wave_packet(const Tile& tile, int s, std::size_t N, double L) {
  if (s < 1) throw config_error("make_wave_packet: smoothness must be >= 1");
  const double lenI = static_cast<double>(tile.time.length());
  const double dx = L / static_cast<double>(N);
  if (lenI < 8 * dx) throw config_error("make_wave_packet: tile finer than 8 grid cells");
  if (lenI > L / 8) throw config_error("make_wave_packet: tile longer than L/8");

  const double wlo = static_cast<double>(tile.freq.left());
  const double whi = static_cast<double>(tile.freq.right());
  const double wc = (wlo + whi) / 2;
  const double half_support = 0.45 * (whi - wlo);
  Spectrum spec(N, L);
  if (wc - half_support < static_cast<double>(spec.freq_lo()) / L ||
      wc + half_support > static_cast<double>(spec.freq_hi()) / L) {
    throw config_error("make_wave_packet: frequency window outside the grid band");
  }

  const int order = s + 2;
  const double cI = static_cast<double>(tile.time.center());
  double sq = 0.0;
  for (long k = spec.freq_lo(); k <= spec.freq_hi(); ++k) {
    const double xi = static_cast<double>(k) / L;
    const double b = bspline(order, (xi - (wc - half_support)) / (2 * half_support) * order);
    sq += b * b;
    const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) * cI / L;
    spec.at(k) = b * cplx(std::cos(ph), std::sin(ph));
  }
  if (sq == 0.0) throw config_error("make_wave_packet: no grid frequency inside the window");
  const double gamma = std::sqrt(L / sq);
  for (auto& c : spec.coeff) c *= gamma;

  WavePacket wp{tile, s, idft(spec), 1.0};
  wp.l2_norm = lp_quasinorm(wp.realization, 2.0);
  return wp;
}

GridFunction translate(const GridFunction& f, double dx) {
  Spectrum spec = dft(f);
  for (long k = spec.freq_lo(); k <= spec.freq_hi(); ++k) {
    const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) * dx / f.L();
    spec.at(k) *= cplx(std::cos(ph), std::sin(ph));
  }
  return idft(spec);
}

double chi_tilde(const DyadicInterval& I, double x) {
  const double lo = static_cast<double>(I.endpoints().first);
  const double hi = static_cast<double>(I.endpoints().second);
  double dist = 0.0;
  if (x < lo) dist = lo - x;
  if (x > hi) dist = x - hi;
  return std::pow(1.0 + dist / static_cast<double>(I.length()), -10.0);
}

TileCollection lacunary_collection(const LacunaryParams& p) {
  if (p.d < 2) throw config_error("lacunary_collection: dimension must be >= 2");
  if (p.levels < 1 || p.per_level < 1) throw config_error("lacunary_collection: empty family");
  if (p.K < 2) throw config_error("lacunary_collection: K must be >= 2");

  const long long C = std::max(4LL, 2LL * (p.d - 1) * p.K + 1);
  int spacing = 1;
  while ((1LL << spacing) <= C) ++spacing;

  TileCollection coll;
  coll.rank1_constant = C;
  for (int i = 0; i < p.levels; ++i) {
    const int t = p.base_scale + i * spacing;
    for (int pos = 0; pos < p.per_level; ++pos) {
      std::vector<ShiftedDyadicInterval> freqs;
      for (int j = 0; j < p.d; ++j) {
        freqs.push_back(ShiftedDyadicInterval{-t, static_cast<long long>(j) * p.K, 0});
      }
      coll.tiles.push_back(VectorTile(DyadicInterval{t, pos}, std::move(freqs)));
    }
  }
  return coll;
}

namespace {

constexpr std::size_t kMaxTilesPerVertex = 4096;

struct ModelCtx {
  const RootedTree* G = nullptr;
  const std::map<int, TileCollection>* colls = nullptr;
  const std::vector<GridFunction>* fs = nullptr;
  int s = 6;
  std::size_t N = 0;
  double L = 1.0;
};

GridFunction apply_vertex(const ModelCtx& c, int v, const rational& min_len, double alpha) {
  const auto& node = c.G->node(v);
  if (node.children.empty()) return (*c.fs)[static_cast<std::size_t>(node.l - 1)];

  auto it = c.colls->find(v);
  if (it == c.colls->end()) throw config_error("model_apply: missing collection for vertex");
  const TileCollection& coll = it->second;
  const std::size_t nsons = node.children.size();
  for (const auto& vt : coll.tiles) {
    if (vt.dim() != nsons + 1) {
      throw config_error("model_apply: collection dimension does not match vertex arity + 1");
    }
  }
  if (coll.tiles.size() > kMaxTilesPerVertex) {
    throw guard_error("model_apply: collection exceeds the per-vertex tile budget");
  }

  std::vector<cplx> out(c.N, cplx(0.0));
  for (const auto& P : coll.tiles) {
    const rational lenI = P.time.length();
    if (lenI < min_len) continue;
    const double lenId = static_cast<double>(lenI);
    const double shift = alpha * lenId;
    cplx coef = std::pow(lenId, -(static_cast<double>(nsons) - 1.0) / 2.0);
    for (std::size_t i = 0; i < nsons; ++i) {
      const GridFunction g = apply_vertex(c, node.children[i], lenI, alpha);
      WavePacket wp = make_wave_packet(P.component(i), c.s, c.N, c.L);
      const GridFunction phi = shift == 0.0 ? wp.realization : translate(wp.realization, shift);
      cplx inner(0.0);
      for (std::size_t m = 0; m < c.N; ++m) inner += g[m] * std::conj(phi[m]);
      coef *= inner * (c.L / static_cast<double>(c.N));
    }
    WavePacket last = make_wave_packet(P.component(nsons), c.s, c.N, c.L);
    const GridFunction phi =
        shift == 0.0 ? last.realization : translate(last.realization, shift);
    for (std::size_t m = 0; m < c.N; ++m) out[m] += coef * phi[m];
  }
  return GridFunction(std::move(out), c.L);
}

ModelCtx make_ctx(const RootedTree& G, const std::map<int, TileCollection>& colls,
                  const std::vector<GridFunction>& fs, int alpha_samples, int s) {
  if (alpha_samples != 1 && alpha_samples != 4 && alpha_samples != 16) {
    throw config_error("model_apply: alpha_samples must be 1, 4 or 16");
  }
  if (fs.size() != static_cast<std::size_t>(G.n_leaves())) {
    throw config_error("model_apply: input count does not match the leaf count");
  }
  ModelCtx c{&G, &colls, &fs, s, fs.front().N(), fs.front().L()};
  for (const auto& f : fs) {
    if (f.N() != c.N || f.L() != c.L) throw config_error("model_apply: grid mismatch");
  }
  return c;
}

GridFunction alpha_average(const ModelCtx& c, int alpha_samples, const rational& min_len) {
  std::vector<cplx> acc(c.N, cplx(0.0));
  for (int a = 0; a < alpha_samples; ++a) {
    const double alpha = static_cast<double>(a) / static_cast<double>(alpha_samples);
    const GridFunction g = apply_vertex(c, c.G->root(), min_len, alpha);
    for (std::size_t m = 0; m < c.N; ++m) acc[m] += g[m];
  }
  for (auto& v : acc) v /= static_cast<double>(alpha_samples);
  return GridFunction(std::move(acc), c.L);
}

}  // namespace

GridFunction model_apply(const RootedTree& G, const std::map<int, TileCollection>& colls,
                         const std::vector<GridFunction>& fs, int alpha_samples, int s) {
  const ModelCtx c = make_ctx(G, colls, fs, alpha_samples, s);
  return alpha_average(c, alpha_samples, rational(0));
}

GridFunction model_apply_truncated(const RootedTree& G, const std::map<int, TileCollection>& colls,
                                   const std::vector<GridFunction>& fs, int alpha_samples,
                                   const rational& min_len, int s) {
  const ModelCtx c = make_ctx(G, colls, fs, alpha_samples, s);
  return alpha_average(c, alpha_samples, min_len);
}

cplx model_form(const RootedTree& G, const std::map<int, TileCollection>& colls,
                const std::vector<GridFunction>& fs, const GridFunction& f_last,
                int alpha_samples, int s) {
  const GridFunction out = model_apply(G, colls, fs, alpha_samples, s);
  if (f_last.N() != out.N() || f_last.L() != out.L()) {
    throw config_error("model_form: grid mismatch");
  }
  cplx acc(0.0);
  for (std::size_t m = 0; m < out.N(); ++m) acc += out[m] * std::conj(f_last[m]);
  return acc * (out.L() / static_cast<double>(out.N()));
}

nlohmann::json to_json(const VectorTile& vt) {
  nlohmann::json j;
  j["time"] = {{"j", vt.time.j}, {"k", vt.time.k}};
  j["freqs"] = nlohmann::json::array();
  for (const auto& w : vt.freqs) {
    j["freqs"].push_back({{"j", w.j}, {"k", w.k}, {"alpha_index", w.alpha_index}});
  }
  return j;
}

VectorTile vector_tile_from_json(const nlohmann::json& j) {
  DyadicInterval time{j.at("time").at("j").get<int>(), j.at("time").at("k").get<long long>()};
  std::vector<ShiftedDyadicInterval> freqs;
  for (const auto& w : j.at("freqs")) {
    freqs.push_back(ShiftedDyadicInterval{w.at("j").get<int>(), w.at("k").get<long long>(),
                                          w.at("alpha_index").get<int>()});
  }
  return VectorTile(time, std::move(freqs));
}

}  // namespace multiest
