#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bumpforest/permutation.hpp"
#include "bumpforest/point_process.hpp"

namespace bumpforest {

/// Sorting move: take the first value v and reinsert it at position v.
/// A base (p(1) == 1) is returned unchanged.
Permutation tau(const Permutation& p);

/// Positions m > 1 with p(m) == m, ascending.
std::vector<int> fixed_points(const Permutation& p);

/// Inverse of tau: pull the fixed point m to the front.
/// Throws std::invalid_argument if m is not in fixed_points(p).
Permutation bump_value(const Permutation& p, int m);

inline constexpr std::uint64_t kDefaultDescMaxNodes = 10'000'000;
inline constexpr int kDefaultForestMaxN = 9;

struct DescTree {
  struct Node {
    Permutation perm;
    std::int64_t parent;  // -1 for the root
    int depth;
  };

  std::vector<Node> nodes;  // BFS order, nodes[0] is the root
  bool truncated = false;

  const Permutation& root() const { return nodes.front().perm; }
  std::size_t size() const { return nodes.size(); }
  int max_depth() const;
  std::vector<std::int64_t> parents() const;

  nlohmann::json to_json() const;
};

/// BFS closure of p under bump_value, up to max_depth levels and max_nodes nodes.
/// truncated is set if either cap cut the closure short.
DescTree desc_tree(const Permutation& p, std::uint64_t max_nodes = kDefaultDescMaxNodes,
                   std::optional<int> max_depth = std::nullopt);

/// The fixed-point forest F_n as parent pointers over Lehmer ranks.
class Forest {
 public:
  struct TreeSummary {
    std::uint32_t base;  // rank of the permutation starting with 1
    std::uint64_t size = 0;
    int max_depth = 0;
    std::uint32_t deepest = 0;  // rank of a deepest node
    std::uint64_t deepest_count = 0;
  };

  int n() const { return n_; }
  std::uint64_t vertex_count() const { return parent_.size(); }

  std::uint32_t parent(std::uint32_t r) const { return parent_[r]; }
  int depth(std::uint32_t r) const { return depth_[r]; }
  std::uint32_t base_of(std::uint32_t r) const { return base_[r]; }
  bool is_leaf(std::uint32_t r) const { return child_count_[r] == 0; }

  const std::vector<TreeSummary>& trees() const { return trees_; }
  const TreeSummary& tree_with_base(std::uint32_t base_rank) const;

  /// Deepest node over the whole forest and how many nodes share that depth.
  int max_depth() const;
  std::uint64_t max_depth_count() const;
  std::uint32_t deepest() const;

  /// Materialize one tree, rooted at its base, as a DescTree.
  DescTree tree(std::uint32_t base_rank) const;

 private:
  friend Forest build_forest(int, int);

  int n_ = 0;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> base_;
  std::vector<std::uint32_t> child_count_;
  std::vector<int> depth_;
  std::vector<TreeSummary> trees_;
};

/// Throws std::invalid_argument unless 1 <= n <= max_n.
Forest build_forest(int n, int max_n = kDefaultForestMaxN);

/// All trees of F_n as DescTrees rooted at their bases.
std::vector<DescTree> forest_trees(const Forest& forest);

/// Separation word p(i) - i, i = 1..n.
std::vector<int> separation_word(const Permutation& p);

/// Atoms at i/n in layer p(i) - i for every non-negative separation.
/// sampled_depth is n, intensity 1.
Configuration separation_config(const Permutation& p);

/// Exact finite-n bump on separation words. Position m (1-based, m > 1)
/// must have separation 0. The bumped value lands at the front with
/// separation m - 1, positions 1..m-1 shift right and lose one.
std::vector<int> bump_separation(const std::vector<int>& sep, int m);

/// Tree generated by bump_separation from separation_word(p).
/// Isomorphic to desc_tree(p); used as an independent route.
struct SeparationTree {
  std::vector<std::vector<int>> words;
  std::vector<std::int64_t> parents;
  bool truncated = false;
};
SeparationTree separation_tree(const Permutation& p,
                               std::uint64_t max_nodes = kDefaultDescMaxNodes);

}  // namespace bumpforest
