#include "bumpforest/bump_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace bumpforest {
namespace {

using Cell = std::int16_t;
constexpr Cell kDeadCell = -1;
// Bumped cells stay distinguishable from shifted-out ones: atoms realized
// later must be lowered once for every bumped cell to their right.
constexpr Cell kBumpedCell = -2;
constexpr int kMaxSupportedDepth = 30000;
constexpr Cell kLetterClamp = kMaxSupportedDepth + 1;

Cell to_cell(int letter) {
  if (letter == kDead) return kDeadCell;
  return static_cast<Cell>(std::min(letter, static_cast<int>(kLetterClamp)));
}

// One BFS level: `count()` words of equal width stored row by row.
struct Level {
  std::size_t width = 0;
  std::vector<std::int64_t> ids;
  std::vector<Cell> cells;

  std::size_t count() const { return ids.size(); }
  const Cell* row(std::size_t k) const { return cells.data() + k * width; }
  void clear() {
    ids.clear();
    cells.clear();
  }
};

void check_caps(const TreeCaps& caps) {
  if (caps.max_depth < 0 || caps.max_depth > kMaxSupportedDepth) {
    throw std::invalid_argument("max_depth must lie in [0, 30000]");
  }
  if (caps.max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
}

class Builder {
 public:
  explicit Builder(const TreeCaps& caps) : caps_(caps) { check_caps(caps); }

  // `horizon(depth, frontier, tree)` must make the frontier words exact up
  // to the letters that can reach 0 by depth + 1.
  template <class Horizon>
  BumpTree run(Level frontier, Horizon&& horizon) {
    BumpTree tree;
    frontier.ids.assign(1, 0);
    add_node(tree, -1, 0, -1);

    Level next;
    next.width = frontier.width;
    std::vector<Cell> scratch(frontier.width);
    for (int depth = 0; frontier.count() > 0; ++depth) {
      horizon(depth, frontier, tree);
      next.width = frontier.width;
      scratch.resize(frontier.width);

      if (depth >= caps_.max_depth) {
        const bool any_live_zero =
            std::find(frontier.cells.begin(), frontier.cells.end(), Cell{0}) != frontier.cells.end();
        if (any_live_zero) {
          tree.truncation = Truncation::kDepthCap;
        } else {
          for (std::size_t k = 0; k < frontier.count(); ++k) count_leaf(tree, depth);
        }
        break;
      }

      next.clear();
      for (std::size_t k = 0; k < frontier.count(); ++k) {
        const Cell* word = frontier.row(k);
        std::int32_t kids = 0;
        for (std::size_t i = 0; i < frontier.width; ++i) {
          if (word[i] != 0) continue;
          if (tree.size >= caps_.max_nodes) {
            tree.truncation = Truncation::kNodeCap;
            return tree;
          }
          std::copy(word, word + frontier.width, scratch.begin());
          scratch[i] = kBumpedCell;
          for (std::size_t left = 0; left < i; ++left) {
            if (scratch[left] > 0) {
              --scratch[left];
            } else if (scratch[left] == 0) {
              scratch[left] = kDeadCell;
            }
          }
          const auto id = add_node(tree, frontier.ids[k], depth + 1, static_cast<std::int32_t>(i));
          next.ids.push_back(id);
          next.cells.insert(next.cells.end(), scratch.begin(), scratch.end());
          ++kids;
        }
        if (caps_.record_nodes) tree.nodes[frontier.ids[k]].children = kids;
        if (kids == 0) count_leaf(tree, depth);
      }
      std::swap(frontier, next);
    }
    return tree;
  }

 private:
  std::int64_t add_node(BumpTree& tree, std::int64_t parent, int depth, std::int32_t bumped) {
    const auto id = static_cast<std::int64_t>(tree.size);
    if (caps_.record_nodes) tree.nodes.push_back({parent, depth, bumped, 0});
    ++tree.size;
    if (tree.per_depth.size() <= static_cast<std::size_t>(depth)) {
      tree.per_depth.resize(depth + 1, 0);
      tree.leaves_per_depth.resize(depth + 1, 0);
    }
    ++tree.per_depth[depth];
    tree.max_depth = std::max(tree.max_depth, depth);
    return id;
  }

  static void count_leaf(BumpTree& tree, int depth) {
    ++tree.leaves;
    ++tree.leaves_per_depth[depth];
  }

  TreeCaps caps_;
};

Level root_level(const std::vector<int>& letters) {
  Level level;
  level.width = letters.size();
  level.cells.reserve(letters.size());
  for (int c : letters) level.cells.push_back(to_cell(c));
  return level;
}

}  // namespace

std::string_view to_string(Truncation t) {
  switch (t) {
    case Truncation::kNone:
      return "none";
    case Truncation::kDepthCap:
      return "depth_cap";
    case Truncation::kNodeCap:
      return "node_cap";
  }
  return "unknown";
}

std::vector<std::int64_t> BumpTree::parents() const {
  std::vector<std::int64_t> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.parent);
  return out;
}

nlohmann::json BumpTree::summary_json() const {
  return {{"D", size},
          {"U", leaves},
          {"max_depth", max_depth},
          {"per_depth", per_depth},
          {"leaves_per_depth", leaves_per_depth},
          {"truncated", truncated()},
          {"truncation", std::string(to_string(truncation))}};
}

nlohmann::json BumpTree::full_json() const {
  auto j = summary_json();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& n : nodes) {
    list.push_back(
        {{"parent", n.parent}, {"depth", n.depth}, {"bumped", n.bumped}, {"children", n.children}});
  }
  j["nodes"] = std::move(list);
  return j;
}

BumpTree tree_of_word(const Word& w, const TreeCaps& caps) {
  if (w.has_dead()) throw std::invalid_argument("tree_of_word needs a root word without dead cells");
  return Builder(caps).run(root_level(w.cells()), [](int, Level&, BumpTree&) {});
}

ConfigTree tree_of_config(const Configuration& c, const RngStream& rng, const TreeCaps& caps) {
  Configuration config = c;
  std::vector<int> layers;
  for (const auto& a : config.atoms()) layers.push_back(a.layer);

  // Expanding depth d needs layers 0..d. Extending inserts the new atoms
  // into every frontier word, lowered by the bumps already made to their
  // right, and renumbers the recorded bump cells.
  auto horizon = [&](int depth, Level& frontier, BumpTree& tree) {
    if (config.sampled_depth() > depth) return;
    Configuration grown = extend_depth(config, depth + 1, rng);
    const auto& old_atoms = config.atoms();
    const auto& new_atoms = grown.atoms();

    std::vector<std::int32_t> remap(old_atoms.size());
    for (std::size_t i = 0, k = 0; i < new_atoms.size(); ++i) {
      if (k < old_atoms.size() && new_atoms[i].location == old_atoms[k].location) remap[k++] = static_cast<std::int32_t>(i);
    }
    for (auto& node : tree.nodes) {
      if (node.bumped >= 0) node.bumped = remap[node.bumped];
    }

    Level rebuilt;
    rebuilt.width = new_atoms.size();
    rebuilt.ids = std::move(frontier.ids);
    rebuilt.cells.resize(rebuilt.ids.size() * rebuilt.width);
    for (std::size_t row = 0; row < rebuilt.ids.size(); ++row) {
      const Cell* src = frontier.row(row);
      Cell* dst = rebuilt.cells.data() + row * rebuilt.width;
      int bumped_right = 0;
      std::size_t k = old_atoms.size();
      for (std::size_t i = new_atoms.size(); i-- > 0;) {
        if (k > 0 && remap[k - 1] == static_cast<std::int32_t>(i)) {
          dst[i] = src[--k];
          if (dst[i] == kBumpedCell) ++bumped_right;
        } else {
          // Fresh atoms sit at layer >= depth >= bumped_right, so stay live.
          dst[i] = to_cell(new_atoms[i].layer - bumped_right);
        }
      }
    }
    frontier = std::move(rebuilt);
    config = std::move(grown);
  };

  ConfigTree out{Builder(caps).run(root_level(layers), horizon), Configuration{}};
  out.config = std::move(config);
  return out;
}

BumpTree neighborhood_of_config(const Configuration& c, int r) {
  TreeCaps caps;
  caps.max_depth = r;
  return tree_of_word(word_of_config(c, r), caps);
}

std::vector<std::uint64_t> complete_subsets_by_size(const Word& w) {
  if (w.length() > kMaxSubsetWordLength) {
    throw std::invalid_argument("subset enumeration limited to 20 cells");
  }
  if (w.has_dead()) throw std::invalid_argument("subset enumeration needs a root word");
  const int len = static_cast<int>(w.length());
  const int r = w.alphabet_bound();
  std::vector<std::uint64_t> out(w.length() + 1, 0);
  const std::uint32_t end = std::uint32_t{1} << len;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    // Scan right to left: the member with `slack` members after it may
    // hold at most min(slack, r - 1).
    int slack = 0;
    bool complete = true;
    for (int i = len - 1; i >= 0 && complete; --i) {
      if (!(mask >> i & 1u)) continue;
      complete = w[i] <= std::min(slack, r - 1);
      ++slack;
    }
    if (complete) ++out[slack];
  }
  return out;
}

std::uint64_t vertex_count_via_subsets(const Word& w) {
  std::uint64_t total = 0;
  for (auto c : complete_subsets_by_size(w)) total += c;
  return total;
}

}  // namespace bumpforest
