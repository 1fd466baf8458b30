#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bumpforest/point_process.hpp"
#include "bumpforest/word.hpp"

namespace bumpforest {

enum class Truncation { kNone, kDepthCap, kNodeCap };

std::string_view to_string(Truncation t);

inline constexpr int kDefaultMaxDepth = 1000;
inline constexpr std::uint64_t kDefaultMaxNodes = 10'000'000;

struct TreeCaps {
  int max_depth = kDefaultMaxDepth;
  std::uint64_t max_nodes = kDefaultMaxNodes;
  /// Keep the node arena. Summaries are always produced.
  bool record_nodes = true;
};

/// Rooted bump tree built breadth first.
///
/// Each node stores only the cell it bumped relative to its parent; words
/// are materialized for the BFS frontier alone, so memory stays linear in
/// the node count.
struct BumpTree {
  struct Node {
    std::int64_t parent;  // -1 for the root
    std::int32_t depth;
    std::int32_t bumped;  // cell index bumped from the parent, -1 for the root
    std::int32_t children;
  };

  std::vector<Node> nodes;  // empty unless TreeCaps::record_nodes
  std::uint64_t size = 0;    // D
  std::uint64_t leaves = 0;  // U, counted over expanded nodes only
  int max_depth = 0;
  Truncation truncation = Truncation::kNone;
  std::vector<std::uint64_t> per_depth;         // D_j
  std::vector<std::uint64_t> leaves_per_depth;  // U_j

  bool truncated() const { return truncation != Truncation::kNone; }
  std::vector<std::int64_t> parents() const;

  nlohmann::json summary_json() const;
  /// Summary plus the node list.
  nlohmann::json full_json() const;
};

/// gamma(w) for a root word without dead cells. Throws std::invalid_argument
/// if w has dead cells. Expansion stops below caps.max_depth.
BumpTree tree_of_word(const Word& w, const TreeCaps& caps = {});

struct ConfigTree {
  BumpTree tree;
  /// The configuration with every layer the construction had to realize.
  Configuration config;
};

/// gamma(xi) grown breadth first. Expanding depth j needs layers 0..j, so
/// whenever the frontier reaches the realized horizon the configuration is
/// extended one layer from `rng` (layer k from lane k).
ConfigTree tree_of_config(const Configuration& c, const RngStream& rng,
                          const TreeCaps& caps = {});

/// gamma_r(xi) restricted to depth r; only layers 0..r-1 are consulted.
BumpTree neighborhood_of_config(const Configuration& c, int r);

inline constexpr std::size_t kMaxSubsetWordLength = 20;

/// Number of complete index sets of w (including the empty set), which is
/// the size of gamma(w). Throws std::invalid_argument past 20 cells.
std::uint64_t vertex_count_via_subsets(const Word& w);

/// Complete index sets of w grouped by size: entry j counts those of size j.
std::vector<std::uint64_t> complete_subsets_by_size(const Word& w);

}  // namespace bumpforest
