#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multiest/dyadic.hpp"

namespace multiest {

// Rooted tree with n ordered leaves labeled 1..n, every internal vertex
// having >= 2 sons, and contiguous descendant-leaf runs I_u = {l_u..r_u}.
class RootedTree {
 public:
  struct Node {
    int parent = -1;
    std::vector<int> children;  // empty <=> leaf
    int level = 0;
    int l = 0, r = 0;  // leaf-label run under this vertex
  };

  static RootedTree leaf_tree();  // n = 1
  // Build from ordered subtrees glued under a new root.
  static RootedTree join(const std::vector<RootedTree>& sons);

  int root() const { return 0; }
  int n_leaves() const { return n_; }
  std::size_t vertex_count() const { return nodes_.size(); }
  const Node& node(int v) const { return nodes_.at(v); }
  bool is_leaf(int v) const { return nodes_.at(v).children.empty(); }
  int height() const;
  std::vector<int> internal_vertices() const;  // preorder
  // Extract the subtree rooted at v, leaf labels shifted to start at 1.
  RootedTree subtree(int v) const;

  std::string to_paren() const;  // e.g. "((1 2) 3)"
  std::string to_json() const;
  bool operator==(const RootedTree&) const = default;

 private:
  std::vector<Node> nodes_;
  int n_ = 0;
  void relevel(int v, int level);
};

struct RegionQuery {
  std::vector<double> xi;  // strictly increasing
  std::vector<rational> gaps() const;
};

std::vector<RootedTree> enumerate_trees(int n);

std::pair<int, int> index_interval(const RootedTree& G, int u);

bool region_membership(const RootedTree& G, const RegionQuery& q, const RegionParams& rp);
// Same predicate on an explicit positive gap vector (n-1 gaps).
bool region_membership_gaps(const RootedTree& G, const std::vector<rational>& gaps, const RegionParams& rp);

std::optional<int> shares_cut(const RootedTree& G1, const RootedTree& G2);

std::pair<RootedTree, RootedTree> retract_pair(const RootedTree& G1, const RootedTree& G2);

struct CoverageReport {
  int n = 0;
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  double uncovered_fraction = 0;
  std::vector<std::size_t> per_tree_hits;
  double mean_multiplicity = 0;
  std::vector<std::vector<double>> uncovered_examples;  // gap vectors, up to 8
};

CoverageReport coverage_report(int n, const RegionParams& rp, std::size_t samples,
                               std::uint64_t seed, double log2_gap_range = 10.0);

}  // namespace multiest
