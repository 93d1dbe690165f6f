#include "multiest/trees.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace multiest {

RootedTree RootedTree::leaf_tree() {
  RootedTree t;
  Node n;
  n.l = n.r = 1;
  t.nodes_.push_back(n);
  t.n_ = 1;
  return t;
}

RootedTree RootedTree::join(const std::vector<RootedTree>& sons) {
  if (sons.size() < 2) throw config_error("internal vertices need >= 2 sons");
  RootedTree t;
  Node root;
  t.nodes_.push_back(root);
  int offset = 0;
  for (const RootedTree& s : sons) {
    const int base = static_cast<int>(t.nodes_.size());
    for (const Node& sn : s.nodes_) {
      Node n = sn;
      n.parent = n.parent < 0 ? 0 : n.parent + base;
      for (int& c : n.children) c += base;
      n.l += offset;
      n.r += offset;
      t.nodes_.push_back(n);
    }
    t.nodes_[0].children.push_back(base);
    offset += s.n_;
  }
  t.n_ = offset;
  t.nodes_[0].l = 1;
  t.nodes_[0].r = offset;
  t.relevel(0, 0);
  return t;
}

void RootedTree::relevel(int v, int level) {
  nodes_[v].level = level;
  for (int c : nodes_[v].children) relevel(c, level + 1);
}

int RootedTree::height() const {
  int h = 0;
  for (const Node& n : nodes_) h = std::max(h, n.level);
  return h;
}

std::vector<int> RootedTree::internal_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!nodes_[v].children.empty()) out.push_back(static_cast<int>(v));
  }
  return out;
}

RootedTree RootedTree::subtree(int v) const {
  const Node& nv = node(v);
  if (nv.children.empty()) return leaf_tree();
  std::vector<RootedTree> sons;
  for (int c : nv.children) sons.push_back(subtree(c));
  return join(sons);
}

std::string RootedTree::to_paren() const {
  std::ostringstream os;
  auto rec = [&](auto&& self, int v) -> void {
    const Node& n = nodes_[v];
    if (n.children.empty()) {
      os << n.l;
      return;
    }
    os << '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) os << ' ';
      self(self, n.children[i]);
    }
    os << ')';
  };
  rec(rec, 0);
  return os.str();
}

std::string RootedTree::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["paren"] = to_paren();
  auto& arr = j["nodes"] = nlohmann::json::array();
  for (const Node& n : nodes_) {
    arr.push_back({{"parent", n.parent}, {"children", n.children}, {"level", n.level}, {"l", n.l}, {"r", n.r}});
  }
  return j.dump();
}

std::vector<rational> RegionQuery::gaps() const {
  if (xi.size() < 2) throw config_error("RegionQuery needs n >= 2");
  std::vector<rational> g;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    if (!(xi[i] < xi[i + 1])) throw config_error("RegionQuery xi must be strictly increasing");
    g.push_back(to_rational(xi[i + 1]) - to_rational(xi[i]));
  }
  return g;
}

namespace {

// All ordered lists of part sizes >= 1 summing to n, with >= 2 parts.
void compositions(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest) -> void {
    if (rest == 0) {
      if (cur.size() >= 2) out.push_back(cur);
      return;
    }
    for (int p = 1; p <= rest; ++p) {
      cur.push_back(p);
      self(self, rest - p);
      cur.pop_back();
    }
  };
  rec(rec, n);
}

}  // namespace

std::vector<RootedTree> enumerate_trees(int n) {
  if (n < 1) throw config_error("enumerate_trees: n >= 1 required");
  if (n > 8) throw guard_error("enumerate_trees: n > 8 exceeds the size guard");
  if (n == 1) return {RootedTree::leaf_tree()};
  std::vector<std::vector<int>> comps;
  compositions(n, comps);
  std::vector<RootedTree> out;
  for (const auto& comp : comps) {
    // Odometer over the subtree choices of each part.
    std::vector<std::vector<RootedTree>> choices;
    for (int part : comp) choices.push_back(enumerate_trees(part));
    std::vector<std::size_t> idx(comp.size(), 0);
    bool done = false;
    while (!done) {
      std::vector<RootedTree> sons;
      for (std::size_t i = 0; i < comp.size(); ++i) sons.push_back(choices[i][idx[i]]);
      out.push_back(RootedTree::join(sons));
      std::size_t i = comp.size();
      while (true) {
        if (i == 0) {
          done = true;
          break;
        }
        --i;
        if (++idx[i] < choices[i].size()) break;
        idx[i] = 0;
      }
    }
  }
  return out;
}

std::pair<int, int> index_interval(const RootedTree& G, int u) {
  if (u < 0 || static_cast<std::size_t>(u) >= G.vertex_count()) {
    throw config_error("index_interval: foreign vertex handle");
  }
  const auto& n = G.node(u);
  return {n.l, n.r};
}

bool region_membership_gaps(const RootedTree& G, const std::vector<rational>& gaps, const RegionParams& rp) {
  rp.validate();
  if (static_cast<int>(gaps.size()) != G.n_leaves() - 1) {
    throw config_error("region_membership: gap count must be n-1");
  }
  for (const auto& g : gaps) {
    if (!(g > 0)) throw config_error("region_membership: gaps must be positive");
  }
  const rational csep = to_rational(rp.c_sep);
  const rational ccomp = to_rational(rp.c_comp);
  for (int u : G.internal_vertices()) {
    const auto& nu = G.node(u);
    std::set<int> cuts;  // gap indices r_{u_1}..r_{u_{#-1}}
    for (std::size_t i = 0; i + 1 < nu.children.size(); ++i) {
      cuts.insert(G.node(nu.children[i]).r);
    }
    // Pairwise comparability of the cut gaps.
    for (int a : cuts) {
      for (int b : cuts) {
        if (a < b && gaps[a - 1] * ccomp < gaps[b - 1]) return false;
        if (a < b && gaps[b - 1] * ccomp < gaps[a - 1]) return false;
      }
    }
    // Each cut gap dominates every other gap of the block (vacuous when the
    // block has no non-cut gaps).
    for (int l = nu.l; l <= nu.r - 1; ++l) {
      if (cuts.count(l)) continue;
      for (int r : cuts) {
        if (csep * gaps[l - 1] > gaps[r - 1]) return false;
      }
    }
  }
  return true;
}

bool region_membership(const RootedTree& G, const RegionQuery& q, const RegionParams& rp) {
  return region_membership_gaps(G, q.gaps(), rp);
}

namespace {

std::set<int> root_cuts(const RootedTree& G) {
  std::set<int> s;
  const auto& root = G.node(G.root());
  for (std::size_t i = 0; i + 1 < root.children.size(); ++i) {
    s.insert(G.node(root.children[i]).r);
  }
  return s;
}

}  // namespace

std::optional<int> shares_cut(const RootedTree& G1, const RootedTree& G2) {
  if (G1.n_leaves() != G2.n_leaves()) throw config_error("shares_cut: leaf counts differ");
  const auto s1 = root_cuts(G1);
  const auto s2 = root_cuts(G2);
  for (int c : s1) {
    if (s2.count(c)) return c;
  }
  return std::nullopt;
}

namespace {

// Proposition-G Case-2 selection: descend from the root sons, keeping each
// vertex v whose half-open index run [l_v, r_v) misses the other tree's root
// cut set; recurse into the sons of any vertex that intersects it.
void select_vertices(const RootedTree& G, int v, const std::set<int>& other_cuts, std::vector<int>& out) {
  const auto& n = G.node(v);
  bool hit = false;
  for (int c = n.l; c <= n.r - 1; ++c) {
    if (other_cuts.count(c)) {
      hit = true;
      break;
    }
  }
  if (!hit) {
    out.push_back(v);
    return;
  }
  for (int s : n.children) select_vertices(G, s, other_cuts, out);
}

RootedTree retract_one(const RootedTree& G, const std::set<int>& other_cuts) {
  std::vector<int> selected;
  for (int s : G.node(G.root()).children) select_vertices(G, s, other_cuts, selected);
  std::vector<RootedTree> sons;
  for (int v : selected) sons.push_back(G.subtree(v));
  return RootedTree::join(sons);
}

}  // namespace

std::pair<RootedTree, RootedTree> retract_pair(const RootedTree& G1, const RootedTree& G2) {
  if (shares_cut(G1, G2)) throw config_error("retract_pair: trees already share a cut");
  return {retract_one(G1, root_cuts(G2)), retract_one(G2, root_cuts(G1))};
}

CoverageReport coverage_report(int n, const RegionParams& rp, std::size_t samples,
                               std::uint64_t seed, double log2_gap_range) {
  if (n < 2 || n > 6) throw config_error("coverage_report: 2 <= n <= 6 required");
  rp.validate();
  const auto trees = enumerate_trees(n);
  CoverageReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.per_tree_hits.assign(trees.size(), 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-log2_gap_range, log2_gap_range);
  double mult_acc = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> gaps_d(n - 1);
    std::vector<rational> gaps(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      gaps_d[i] = std::exp2(uni(rng));
      gaps[i] = to_rational(gaps_d[i]);
    }
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trees.size(); ++t) {
      if (region_membership_gaps(trees[t], gaps, rp)) {
        ++rep.per_tree_hits[t];
        ++hits;
      }
    }
    mult_acc += static_cast<double>(hits);
    if (hits == 0) {
      ++rep.uncovered;
      if (rep.uncovered_examples.size() < 8) rep.uncovered_examples.push_back(gaps_d);
    }
  }
  rep.uncovered_fraction = samples ? static_cast<double>(rep.uncovered) / static_cast<double>(samples) : 0.0;
  rep.mean_multiplicity = samples ? mult_acc / static_cast<double>(samples) : 0.0;
  return rep;
}

}  // namespace multiest
