#pragma once

#include <cstdint>
#include <vector>

#include "multiest/grid.hpp"
#include "multiest/tiles.hpp"

namespace multiest {

// Coefficients a^j_{P_j} for a fixed slot j, aligned with the tiles of a
// TileCollection.
struct CoeffSequence {
  int slot = 0;
  std::vector<cplx> values;
};

// An i-tree: every member P satisfies P_i <= P_{T,i}. The top is a collection
// member but need not belong to the tree.
struct TileTree {
  std::size_t top = 0;
  int type = 0;
  std::vector<std::size_t> members;
};

struct SizeResult {
  double value = 0.0;
  TileTree witness;
};

SizeResult size(const TileCollection& coll, const CoeffSequence& seq, int j);

// John-Nirenberg variant: discrete L^{1,infty} quasinorm of the square
// function over each candidate tree, computed exactly on the step function.
double size_jn(const TileCollection& coll, const CoeffSequence& seq, int j);

struct EnergyResult {
  double value = 0.0;
  int level = 0;
  std::vector<TileTree> witness;  // strongly j-disjoint i-trees (i != j)
  bool interior = true;           // optimum interior to the scanned n range
};

EnergyResult energy(const TileCollection& coll, const CoeffSequence& seq, int j);
bool verify_energy_certificate(const TileCollection& coll, const CoeffSequence& seq, int j,
                               const EnergyResult& res);

double energy_l2_check(const TileCollection& coll, const GridFunction& f, int j, int s = 6);

struct Stratum {
  int level = 0;
  std::vector<TileTree> trees;
  double size_bound = 0.0;    // min(2^{-n} E, S)
  double tree_measure = 0.0;  // sum of |I_T|
};

struct Stratification {
  std::vector<Stratum> strata;
  std::vector<std::size_t> residual;
  double size_total = 0.0;
  double energy_total = 0.0;
  double c_strat = 0.0;  // max over levels of tree_measure / 2^{2n}
};

Stratification stratify(const TileCollection& coll, const CoeffSequence& seq, int j);
bool verify_stratification(const TileCollection& coll, const CoeffSequence& seq, int j,
                           const Stratification& st);

struct ToolReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<double> sizes;
  std::vector<double> energies;
};

ToolReport tool_check(const TileCollection& coll, const std::vector<CoeffSequence>& seqs,
                      const std::vector<double>& thetas);

cplx bessel_sum(const TileCollection& collP, const TileCollection& collQ,
                const CoeffSequence& cP, const CoeffSequence& cQ, int i, int j, std::size_t N,
                double L, int s = 6);

struct DecayProbe {
  double slope = 0.0;
  std::vector<int> k2_values;
  std::vector<double> log2_values;
};

DecayProbe delicate_decay_probe(int k1, int k2_lo, int k2_hi, int trials, std::uint64_t seed,
                                int s = 6);

}  // namespace multiest
