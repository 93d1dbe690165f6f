#include "multiest/size_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

namespace multiest {

namespace {

constexpr std::size_t kEnergyBudget = 512;

struct OrderCache {
  // le[i][p * n + t]: P_p component i <= P_t component i.
  std::vector<std::vector<char>> le;
  std::size_t n = 0;
};

OrderCache build_cache(const TileCollection& coll) {
  OrderCache c;
  c.n = coll.tiles.size();
  const std::size_t d = coll.tiles.empty() ? 0 : coll.tiles.front().dim();
  c.le.assign(d, std::vector<char>(c.n * c.n, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t p = 0; p < c.n; ++p) {
      for (std::size_t t = 0; t < c.n; ++t) {
        auto rel = order_relations(coll.tiles[p].component(i), coll.tiles[t].component(i),
                                   coll.rank1_constant);
        c.le[i][p * c.n + t] = rel.count(OrderRel::le) ? 1 : 0;
      }
    }
  }
  return c;
}

void validate_inputs(const TileCollection& coll, const CoeffSequence& seq, int j) {
  if (coll.tiles.empty()) throw config_error("size/energy: empty collection");
  if (seq.values.size() != coll.tiles.size()) {
    throw config_error("size/energy: coefficient sequence misaligned with the collection");
  }
  const int d = static_cast<int>(coll.tiles.front().dim());
  if (j < 0 || j >= d) throw config_error("size/energy: slot out of range");
  for (const auto& vt : coll.tiles) {
    if (static_cast<int>(vt.dim()) != d) throw config_error("size/energy: mixed dimensions");
  }
}

double tree_mean_square(const TileCollection& coll, const CoeffSequence& seq,
                        const std::vector<std::size_t>& members, std::size_t top) {
  double sum = 0.0;
  for (std::size_t p : members) sum += std::norm(seq.values[p]);
  return std::sqrt(sum / static_cast<double>(coll.tiles[top].time.length()));
}

bool time_overlap(const DyadicInterval& a, const DyadicInterval& b) {
  auto [alo, ahi] = a.endpoints();
  auto [blo, bhi] = b.endpoints();
  return alo < bhi && blo < ahi;
}

bool two_omega_overlap(const ShiftedDyadicInterval& a, const ShiftedDyadicInterval& b) {
  const rational ac = a.center(), bc = b.center();
  const rational ah = a.length(), bh = b.length();
  // Closed 2-dilations about the centers.
  return ac - ah <= bc + bh && bc - bh <= ac + ah;
}

bool strongly_disjoint(const TileCollection& coll, int j, const TileTree& A, const TileTree& B) {
  for (std::size_t p : A.members) {
    for (std::size_t q : B.members) {
      const Tile Pj = coll.tiles[p].component(static_cast<std::size_t>(j));
      const Tile Qj = coll.tiles[q].component(static_cast<std::size_t>(j));
      if (Pj == Qj) return false;
      if (two_omega_overlap(Pj.freq, Qj.freq)) {
        if (time_overlap(coll.tiles[q].time, coll.tiles[A.top].time)) return false;
        if (time_overlap(coll.tiles[p].time, coll.tiles[B.top].time)) return false;
      }
    }
  }
  return true;
}

SizeResult size_subset(const TileCollection& coll, const CoeffSequence& seq, int j,
                       const std::vector<std::size_t>& subset, const OrderCache& cache) {
  const std::size_t d = coll.tiles.front().dim();
  const std::size_t n = coll.tiles.size();
  SizeResult best;
  bool first = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (static_cast<int>(i) == j) continue;
    for (std::size_t t = 0; t < n; ++t) {
      TileTree tree{t, static_cast<int>(i), {}};
      double sum = 0.0;
      for (std::size_t p : subset) {
        if (cache.le[i][p * n + t]) {
          tree.members.push_back(p);
          sum += std::norm(seq.values[p]);
        }
      }
      const double v = std::sqrt(sum / static_cast<double>(coll.tiles[t].time.length()));
      if (first || v > best.value) {
        best.value = v;
        best.witness = std::move(tree);
        first = false;
      }
    }
  }
  return best;
}

// Exact L^{1,infty} quasinorm of the square-function step over the members.
double l1w_square_function(const TileCollection& coll, const CoeffSequence& seq,
                           const std::vector<std::size_t>& members) {
  std::vector<rational> cuts;
  for (std::size_t p : members) {
    auto [lo, hi] = coll.tiles[p].time.endpoints();
    cuts.push_back(lo);
    cuts.push_back(hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<double, double>> segs;  // (g value, length)
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const rational mid = (cuts[s] + cuts[s + 1]) / 2;
    double g2 = 0.0;
    for (std::size_t p : members) {
      auto [lo, hi] = coll.tiles[p].time.endpoints();
      if (lo <= mid && mid < hi) {
        g2 += std::norm(seq.values[p]) / static_cast<double>(coll.tiles[p].time.length());
      }
    }
    if (g2 > 0.0) {
      segs.emplace_back(std::sqrt(g2), static_cast<double>(cuts[s + 1] - cuts[s]));
    }
  }
  std::sort(segs.begin(), segs.end(), [](auto& a, auto& b) { return a.first > b.first; });
  double cum = 0.0, best = 0.0;
  for (const auto& [v, len] : segs) {
    cum += len;
    best = std::max(best, v * cum);
  }
  return best;
}

cplx grid_inner(const GridFunction& a, const GridFunction& b) {
  cplx acc(0.0);
  for (std::size_t m = 0; m < a.N(); ++m) acc += a[m] * std::conj(b[m]);
  return acc * (a.L() / static_cast<double>(a.N()));
}

}  // namespace

SizeResult size(const TileCollection& coll, const CoeffSequence& seq, int j) {
  validate_inputs(coll, seq, j);
  OrderCache cache = build_cache(coll);
  std::vector<std::size_t> all(coll.tiles.size());
  for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
  return size_subset(coll, seq, j, all, cache);
}

double size_jn(const TileCollection& coll, const CoeffSequence& seq, int j) {
  validate_inputs(coll, seq, j);
  OrderCache cache = build_cache(coll);
  const std::size_t d = coll.tiles.front().dim();
  const std::size_t n = coll.tiles.size();
  double best = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (static_cast<int>(i) == j) continue;
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<std::size_t> members;
      for (std::size_t p = 0; p < n; ++p) {
        if (cache.le[i][p * n + t]) members.push_back(p);
      }
      const double v = l1w_square_function(coll, seq, members) /
                       static_cast<double>(coll.tiles[t].time.length());
      best = std::max(best, v);
    }
  }
  return best;
}

EnergyResult energy(const TileCollection& coll, const CoeffSequence& seq, int j) {
  validate_inputs(coll, seq, j);
  if (coll.tiles.size() > kEnergyBudget) {
    throw guard_error("energy: collection exceeds the combinatorial search budget");
  }
  OrderCache cache = build_cache(coll);
  const std::size_t d = coll.tiles.front().dim();
  const std::size_t n = coll.tiles.size();

  double min_single = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n; ++p) {
    const double a = std::abs(seq.values[p]);
    if (a > 0.0) {
      min_single =
          std::min(min_single, a / std::sqrt(static_cast<double>(coll.tiles[p].time.length())));
    }
  }
  EnergyResult best;
  if (!std::isfinite(min_single)) return best;  // all-zero sequence

  std::vector<std::size_t> all(n);
  for (std::size_t p = 0; p < n; ++p) all[p] = p;
  const double S = size_subset(coll, seq, j, all, cache).value;
  const int n_lo = static_cast<int>(std::floor(std::log2(min_single))) - 1;
  const int n_hi = static_cast<int>(std::ceil(std::log2(S))) + 1;

  std::vector<std::size_t> tops(n);
  for (std::size_t p = 0; p < n; ++p) tops[p] = p;
  std::sort(tops.begin(), tops.end(), [&](std::size_t a, std::size_t b) {
    if (coll.tiles[a].time.j != coll.tiles[b].time.j) {
      return coll.tiles[a].time.j > coll.tiles[b].time.j;
    }
    return a < b;
  });

  bool first = true;
  for (int lvl = n_lo; lvl <= n_hi; ++lvl) {
    const double lo = std::exp2(static_cast<double>(lvl));
    const double hi = 2.0 * lo;
    std::set<std::size_t> remaining;
    for (std::size_t p = 0; p < n; ++p) {
      if (std::abs(seq.values[p]) > 0.0) remaining.insert(p);
    }
    std::vector<TileTree> family;
    bool progress = true;
    while (progress && !remaining.empty()) {
      progress = false;
      for (std::size_t t : tops) {
        for (std::size_t i = 0; i < d && !progress; ++i) {
          if (static_cast<int>(i) == j) continue;
          TileTree tree{t, static_cast<int>(i), {}};
          for (std::size_t p : remaining) {
            if (cache.le[i][p * n + t]) tree.members.push_back(p);
          }
          if (tree.members.empty()) continue;
          // Trim until every sub-tree stays below the upper band edge.
          bool capped = false;
          while (!capped && !tree.members.empty()) {
            capped = true;
            for (std::size_t t2 = 0; t2 < n && capped; ++t2) {
              std::vector<std::size_t> sub;
              double sum = 0.0;
              for (std::size_t p : tree.members) {
                if (cache.le[i][p * n + t2]) {
                  sub.push_back(p);
                  sum += std::norm(seq.values[p]);
                }
              }
              if (sub.empty()) continue;
              if (std::sqrt(sum / static_cast<double>(coll.tiles[t2].time.length())) >
                  hi * (1.0 + 1e-12)) {
                capped = false;
                std::size_t worst = sub.front();
                for (std::size_t p : sub) {
                  if (std::norm(seq.values[p]) > std::norm(seq.values[worst])) worst = p;
                }
                tree.members.erase(
                    std::find(tree.members.begin(), tree.members.end(), worst));
              }
            }
          }
          if (tree.members.empty()) continue;
          if (tree_mean_square(coll, seq, tree.members, t) < lo) continue;
          bool disjoint = true;
          for (const auto& other : family) {
            if (!strongly_disjoint(coll, j, tree, other)) {
              disjoint = false;
              break;
            }
          }
          if (!disjoint) continue;
          for (std::size_t p : tree.members) remaining.erase(p);
          family.push_back(std::move(tree));
          progress = true;
        }
        if (progress) break;
      }
    }
    double measure = 0.0;
    for (const auto& tree : family) {
      measure += static_cast<double>(coll.tiles[tree.top].time.length());
    }
    const double v = lo * std::sqrt(measure);
    if (first || v > best.value) {
      best.value = v;
      best.level = lvl;
      best.witness = family;
      best.interior = lvl != n_lo && lvl != n_hi;
      first = false;
    }
  }
  return best;
}

bool verify_energy_certificate(const TileCollection& coll, const CoeffSequence& seq, int j,
                               const EnergyResult& res) {
  validate_inputs(coll, seq, j);
  OrderCache cache = build_cache(coll);
  const std::size_t n = coll.tiles.size();
  const double lo = std::exp2(static_cast<double>(res.level));
  const double hi = 2.0 * lo;
  double measure = 0.0;
  std::set<std::size_t> seen;
  for (const auto& tree : res.witness) {
    if (tree.type == j || tree.top >= n || tree.members.empty()) return false;
    const std::size_t i = static_cast<std::size_t>(tree.type);
    for (std::size_t p : tree.members) {
      if (p >= n || !cache.le[i][p * n + tree.top]) return false;
      if (!seen.insert(p).second) return false;
    }
    const double ms = tree_mean_square(coll, seq, tree.members, tree.top);
    if (ms < lo * (1.0 - 1e-12)) return false;
    for (std::size_t t2 = 0; t2 < n; ++t2) {
      std::vector<std::size_t> sub;
      for (std::size_t p : tree.members) {
        if (cache.le[i][p * n + t2]) sub.push_back(p);
      }
      if (sub.empty()) continue;
      if (tree_mean_square(coll, seq, sub, t2) > hi * (1.0 + 1e-12)) return false;
    }
    measure += static_cast<double>(coll.tiles[tree.top].time.length());
  }
  for (std::size_t a = 0; a < res.witness.size(); ++a) {
    for (std::size_t b = a + 1; b < res.witness.size(); ++b) {
      if (!strongly_disjoint(coll, j, res.witness[a], res.witness[b])) return false;
    }
  }
  return std::abs(res.value - lo * std::sqrt(measure)) <= 1e-9 * (1.0 + res.value);
}

double energy_l2_check(const TileCollection& coll, const GridFunction& f, int j, int s) {
  if (coll.tiles.empty()) throw config_error("energy_l2_check: empty collection");
  CoeffSequence seq{j, {}};
  for (const auto& vt : coll.tiles) {
    WavePacket wp = make_wave_packet(vt.component(static_cast<std::size_t>(j)), s, f.N(), f.L());
    seq.values.push_back(grid_inner(f, wp.realization));
  }
  const double nf = lp_quasinorm(f, 2.0);
  if (nf == 0.0) return 0.0;
  return energy(coll, seq, j).value / nf;
}

Stratification stratify(const TileCollection& coll, const CoeffSequence& seq, int j) {
  validate_inputs(coll, seq, j);
  if (coll.tiles.size() > kEnergyBudget) {
    throw guard_error("stratify: collection exceeds the combinatorial search budget");
  }
  OrderCache cache = build_cache(coll);
  Stratification st;
  st.size_total = size(coll, seq, j).value;
  st.energy_total = energy(coll, seq, j).value;

  std::vector<std::size_t> remaining(coll.tiles.size());
  for (std::size_t p = 0; p < remaining.size(); ++p) remaining[p] = p;

  const double S = st.size_total;
  const double E = st.energy_total;
  if (S == 0.0 || E == 0.0) {
    st.strata.push_back(Stratum{});
    st.residual = remaining;
    return st;
  }
  int lvl = static_cast<int>(std::floor(std::log2(E / S)));
  for (int iter = 0; iter < 300; ++iter) {
    SizeResult cur = size_subset(coll, seq, j, remaining, cache);
    if (cur.value == 0.0 || remaining.empty()) break;
    const double tau = std::exp2(static_cast<double>(-lvl - 1)) * E;
    Stratum stratum;
    stratum.level = lvl;
    stratum.size_bound = std::min(std::exp2(static_cast<double>(-lvl)) * E, S);
    while (cur.value > tau) {
      stratum.tree_measure +=
          static_cast<double>(coll.tiles[cur.witness.top].time.length());
      for (std::size_t p : cur.witness.members) {
        remaining.erase(std::find(remaining.begin(), remaining.end(), p));
      }
      stratum.trees.push_back(std::move(cur.witness));
      if (remaining.empty()) break;
      cur = size_subset(coll, seq, j, remaining, cache);
    }
    if (!stratum.trees.empty()) {
      st.c_strat = std::max(
          st.c_strat, stratum.tree_measure / std::exp2(2.0 * static_cast<double>(lvl)));
      st.strata.push_back(std::move(stratum));
    }
    ++lvl;
  }
  st.residual = remaining;
  return st;
}

bool verify_stratification(const TileCollection& coll, const CoeffSequence& seq, int j,
                           const Stratification& st) {
  validate_inputs(coll, seq, j);
  OrderCache cache = build_cache(coll);
  std::set<std::size_t> seen;
  for (const auto& stratum : st.strata) {
    std::vector<std::size_t> members;
    double measure = 0.0;
    for (const auto& tree : stratum.trees) {
      if (tree.type == j) return false;
      measure += static_cast<double>(coll.tiles[tree.top].time.length());
      for (std::size_t p : tree.members) {
        if (!seen.insert(p).second) return false;
        if (!cache.le[static_cast<std::size_t>(tree.type)][p * coll.tiles.size() + tree.top]) {
          return false;
        }
        members.push_back(p);
      }
    }
    if (std::abs(measure - stratum.tree_measure) > 1e-9 * (1.0 + measure)) return false;
    if (measure > st.c_strat * std::exp2(2.0 * stratum.level) * (1.0 + 1e-9)) return false;
    if (size_subset(coll, seq, j, members, cache).value >
        stratum.size_bound * (1.0 + 1e-9)) {
      return false;
    }
  }
  for (std::size_t p : st.residual) {
    if (!seen.insert(p).second) return false;
  }
  return seen.size() == coll.tiles.size();
}

ToolReport tool_check(const TileCollection& coll, const std::vector<CoeffSequence>& seqs,
                      const std::vector<double>& thetas) {
  if (coll.tiles.empty()) throw config_error("tool_check: empty collection");
  const std::size_t d = coll.tiles.front().dim();
  if (d < 3) throw config_error("tool_check: dimension must be >= 3");
  if (seqs.size() != d || thetas.size() != d) {
    throw config_error("tool_check: need one sequence and one exponent per slot");
  }
  double tsum = 0.0;
  for (double th : thetas) {
    if (th < 0.0 || th >= 1.0) throw config_error("tool_check: exponents must lie in [0, 1)");
    tsum += th;
  }
  if (std::abs(tsum - (static_cast<double>(d) - 2.0)) > 1e-12) {
    throw config_error("tool_check: exponents must sum to d - 2");
  }
  ToolReport rep;
  cplx acc(0.0);
  for (std::size_t p = 0; p < coll.tiles.size(); ++p) {
    cplx term = std::pow(static_cast<double>(coll.tiles[p].time.length()),
                         -(static_cast<double>(d) - 2.0) / 2.0);
    for (std::size_t jj = 0; jj < d; ++jj) term *= seqs[jj].values.at(p);
    acc += term;
  }
  rep.lhs = std::abs(acc);
  rep.rhs = 1.0;
  for (std::size_t jj = 0; jj < d; ++jj) {
    const double S = size(coll, seqs[jj], static_cast<int>(jj)).value;
    const double E = energy(coll, seqs[jj], static_cast<int>(jj)).value;
    rep.sizes.push_back(S);
    rep.energies.push_back(E);
    rep.rhs *= std::pow(S, thetas[jj]) * std::pow(E, 1.0 - thetas[jj]);
  }
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return rep;
}

namespace {

// Greedy maximal-tree partition measure for the Lemma-CP normalization check.
double partition_measure(const TileCollection& coll, int slot, const OrderCache& cache) {
  const std::size_t n = coll.tiles.size();
  std::vector<std::size_t> order(n);
  for (std::size_t p = 0; p < n; ++p) order[p] = p;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (coll.tiles[a].time.j != coll.tiles[b].time.j) {
      return coll.tiles[a].time.j > coll.tiles[b].time.j;
    }
    return a < b;
  });
  std::set<std::size_t> remaining;
  for (std::size_t p = 0; p < n; ++p) remaining.insert(p);
  double measure = 0.0;
  for (std::size_t t : order) {
    if (!remaining.count(t)) continue;
    measure += static_cast<double>(coll.tiles[t].time.length());
    for (auto it = remaining.begin(); it != remaining.end();) {
      if (cache.le[static_cast<std::size_t>(slot)][*it * n + t]) {
        it = remaining.erase(it);
      } else {
        ++it;
      }
    }
  }
  return measure;
}

void verify_cp(const TileCollection& coll, const CoeffSequence& c, int slot,
               const OrderCache& cache) {
  const std::size_t n = coll.tiles.size();
  const double D = partition_measure(coll, slot, cache);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (cache.le[static_cast<std::size_t>(slot)][p * n + t]) sum += std::norm(c.values[p]);
    }
    if (sum > static_cast<double>(coll.tiles[t].time.length()) / D * (1.0 + 1e-9)) {
      throw config_error("bessel_sum: coefficient sequence violates the subtree normalization");
    }
  }
}

}  // namespace

cplx bessel_sum(const TileCollection& collP, const TileCollection& collQ,
                const CoeffSequence& cP, const CoeffSequence& cQ, int i, int j, std::size_t N,
                double L, int s) {
  validate_inputs(collP, cP, i);
  validate_inputs(collQ, cQ, j);
  OrderCache cacheP = build_cache(collP);
  OrderCache cacheQ = build_cache(collQ);
  verify_cp(collP, cP, i, cacheP);
  verify_cp(collQ, cQ, j, cacheQ);

  std::map<std::tuple<int, long long, int, long long, int>, GridFunction> packets;
  auto packet = [&](const Tile& t) -> const GridFunction& {
    auto key = std::make_tuple(t.time.j, t.time.k, t.freq.j, t.freq.k, t.freq.alpha_index);
    auto it = packets.find(key);
    if (it == packets.end()) {
      it = packets.emplace(key, make_wave_packet(t, s, N, L).realization).first;
    }
    return it->second;
  };

  cplx acc(0.0);
  for (std::size_t p = 0; p < collP.tiles.size(); ++p) {
    for (std::size_t q = 0; q < collQ.tiles.size(); ++q) {
      if (collP.tiles[p].time.length() > collQ.tiles[q].time.length()) continue;
      const Tile Pi = collP.tiles[p].component(static_cast<std::size_t>(i));
      const Tile Qj = collQ.tiles[q].component(static_cast<std::size_t>(j));
      acc += cP.values[p] * std::conj(cQ.values[q]) * grid_inner(packet(Pi), packet(Qj));
    }
  }
  return acc;
}

DecayProbe delicate_decay_probe(int k1, int k2_lo, int k2_hi, int trials, std::uint64_t seed,
                                int s) {
  if (k2_lo <= k1 + 1) throw config_error("delicate_decay_probe: need k2 >> k1");
  if (k2_hi < k2_lo || trials < 1) throw config_error("delicate_decay_probe: empty scan");
  const double L = std::exp2(static_cast<double>(k2_hi + 2));
  const std::size_t N = static_cast<std::size_t>(8.0 * L);

  auto make_coll = [&](long long base) {
    TileCollection coll;
    for (long long m = 0; m < 2; ++m) {
      std::vector<ShiftedDyadicInterval> freqs;
      for (long long c = 0; c < 3; ++c) freqs.push_back(ShiftedDyadicInterval{0, 2 * c, 0});
      coll.tiles.push_back(VectorTile(DyadicInterval{0, base + m}, std::move(freqs)));
    }
    return coll;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  DecayProbe probe;
  std::vector<double> xs, ys;
  for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
    TileCollection collP = make_coll(1LL << k1);
    TileCollection collQ = make_coll(1LL << k2);
    double mean = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      CoeffSequence cPseq{0, {}}, cQseq{0, {}};
      for (int m = 0; m < 2; ++m) {
        cPseq.values.push_back(std::polar(1.0 / std::sqrt(2.0), phase(rng)));
        cQseq.values.push_back(std::polar(1.0 / std::sqrt(2.0), phase(rng)));
      }
      mean += std::abs(bessel_sum(collP, collQ, cPseq, cQseq, 0, 0, N, L, s));
    }
    mean /= static_cast<double>(trials);
    probe.k2_values.push_back(k2);
    if (mean > 0.0) {
      probe.log2_values.push_back(std::log2(mean));
      xs.push_back(static_cast<double>(k2));
      ys.push_back(std::log2(mean));
    } else {
      probe.log2_values.push_back(-std::numeric_limits<double>::infinity());
    }
  }
  if (xs.size() < 2) {
    probe.slope = -std::numeric_limits<double>::infinity();
    return probe;
  }
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    xbar += xs[t];
    ybar += ys[t];
  }
  xbar /= static_cast<double>(xs.size());
  ybar /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    num += (xs[t] - xbar) * (ys[t] - ybar);
    den += (xs[t] - xbar) * (xs[t] - xbar);
  }
  probe.slope = num / den;
  return probe;
}

}  // namespace multiest
