#include "bumpforest/perm_forest.hpp"

#include <algorithm>
#include <stdexcept>

namespace bumpforest {

Permutation tau(const Permutation& p) {
  const int v = p(1);
  if (v == 1) return p;
  std::vector<int> out(p.values().begin(), p.values().end());
  std::copy(p.values().begin() + 1, p.values().begin() + v, out.begin());
  out[v - 1] = v;
  return Permutation(std::move(out), Permutation::Unchecked{});
}

std::vector<int> fixed_points(const Permutation& p) {
  std::vector<int> out;
  for (int m = 2; m <= p.size(); ++m) {
    if (p(m) == m) out.push_back(m);
  }
  return out;
}

Permutation bump_value(const Permutation& p, int m) {
  if (m < 2 || m > p.size() || p(m) != m) {
    throw std::invalid_argument("bump_value: " + std::to_string(m) + " is not a fixed point of " +
                                p.to_string());
  }
  std::vector<int> out(p.values().begin(), p.values().end());
  std::copy_backward(p.values().begin(), p.values().begin() + (m - 1), out.begin() + m);
  out[0] = m;
  return Permutation(std::move(out), Permutation::Unchecked{});
}

int DescTree::max_depth() const {
  int d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

std::vector<std::int64_t> DescTree::parents() const {
  std::vector<std::int64_t> out;
  out.reserve(nodes.size());
  for (const auto& node : nodes) out.push_back(node.parent);
  return out;
}

nlohmann::json DescTree::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& node : nodes) {
    list.push_back({{"perm", node.perm.to_string()}, {"parent", node.parent}, {"depth", node.depth}});
  }
  return {{"root", root().to_string()}, {"nodes", std::move(list)}, {"truncated", truncated}};
}

DescTree desc_tree(const Permutation& p, std::uint64_t max_nodes, std::optional<int> max_depth) {
  DescTree tree;
  tree.nodes.push_back({p, -1, 0});
  for (std::size_t head = 0; head < tree.nodes.size(); ++head) {
    const int depth = tree.nodes[head].depth;
    const auto fixed = fixed_points(tree.nodes[head].perm);
    if (fixed.empty()) continue;
    if (max_depth && depth >= *max_depth) {
      tree.truncated = true;
      continue;
    }
    for (int m : fixed) {
      if (tree.nodes.size() >= max_nodes) {
        tree.truncated = true;
        return tree;
      }
      // Copy first: push_back may reallocate.
      Permutation child = bump_value(tree.nodes[head].perm, m);
      tree.nodes.push_back({std::move(child), static_cast<std::int64_t>(head), depth + 1});
    }
  }
  return tree;
}

namespace {

// Children of every rank, compressed: children of r are
// order[offset[r] .. offset[r + 1]).
struct ChildIndex {
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> order;
};

ChildIndex index_children(const std::vector<std::uint32_t>& parent) {
  const auto count = parent.size();
  ChildIndex idx;
  idx.offset.assign(count + 1, 0);
  for (std::uint32_t r = 0; r < count; ++r) {
    if (parent[r] != r) ++idx.offset[parent[r] + 1];
  }
  for (std::size_t r = 0; r < count; ++r) idx.offset[r + 1] += idx.offset[r];
  idx.order.resize(idx.offset.back());
  std::vector<std::uint32_t> fill(idx.offset.begin(), idx.offset.end() - 1);
  for (std::uint32_t r = 0; r < count; ++r) {
    if (parent[r] != r) idx.order[fill[parent[r]]++] = r;
  }
  return idx;
}

DescTree materialize(const ChildIndex& idx, std::uint32_t base, int n) {
  DescTree tree;
  std::vector<std::uint32_t> ranks{base};
  tree.nodes.push_back({unrank(base, n), -1, 0});
  for (std::size_t head = 0; head < ranks.size(); ++head) {
    const auto r = ranks[head];
    for (auto k = idx.offset[r]; k < idx.offset[r + 1]; ++k) {
      const auto child = idx.order[k];
      ranks.push_back(child);
      tree.nodes.push_back(
          {unrank(child, n), static_cast<std::int64_t>(head), tree.nodes[head].depth + 1});
    }
  }
  return tree;
}

}  // namespace

const Forest::TreeSummary& Forest::tree_with_base(std::uint32_t base_rank) const {
  // Bases start with 1, so they occupy the first (n-1)! ranks in order.
  if (base_rank >= trees_.size()) throw std::invalid_argument("rank is not a base");
  return trees_[base_rank];
}

int Forest::max_depth() const {
  int d = 0;
  for (const auto& t : trees_) d = std::max(d, t.max_depth);
  return d;
}

std::uint64_t Forest::max_depth_count() const {
  const int d = max_depth();
  std::uint64_t c = 0;
  for (const auto& t : trees_) {
    if (t.max_depth == d) c += t.deepest_count;
  }
  return c;
}

std::uint32_t Forest::deepest() const {
  const auto it = std::max_element(trees_.begin(), trees_.end(), [](const auto& a, const auto& b) {
    return a.max_depth < b.max_depth;
  });
  return it->deepest;
}

DescTree Forest::tree(std::uint32_t base_rank) const {
  tree_with_base(base_rank);
  return materialize(index_children(parent_), base_rank, n_);
}

Forest build_forest(int n, int max_n) {
  if (n < 1 || n > max_n) {
    throw std::invalid_argument("forest size n=" + std::to_string(n) + " outside [1, " +
                                std::to_string(max_n) + "]");
  }
  if (n > 12) throw std::invalid_argument("forest size exceeds 32-bit rank storage");

  Forest f;
  f.n_ = n;
  const auto count = static_cast<std::uint32_t>(factorial(n));
  f.parent_.resize(count);
  f.child_count_.assign(count, 0);
  for (std::uint32_t r = 0; r < count; ++r) {
    f.parent_[r] = static_cast<std::uint32_t>(rank(tau(unrank(r, n))));
    if (f.parent_[r] != r) ++f.child_count_[f.parent_[r]];
  }

  constexpr int kUnknown = -1;
  f.depth_.assign(count, kUnknown);
  f.base_.assign(count, 0);
  std::vector<std::uint32_t> path;
  for (std::uint32_t r = 0; r < count; ++r) {
    path.clear();
    auto cur = r;
    while (f.depth_[cur] == kUnknown && f.parent_[cur] != cur) {
      path.push_back(cur);
      cur = f.parent_[cur];
    }
    if (f.depth_[cur] == kUnknown) {
      f.depth_[cur] = 0;
      f.base_[cur] = cur;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      f.depth_[*it] = f.depth_[f.parent_[*it]] + 1;
      f.base_[*it] = f.base_[f.parent_[*it]];
    }
  }

  const auto bases = static_cast<std::uint32_t>(factorial(n - 1));
  f.trees_.resize(bases);
  for (std::uint32_t b = 0; b < bases; ++b) f.trees_[b].base = b;
  for (std::uint32_t r = 0; r < count; ++r) {
    auto& t = f.trees_[f.base_[r]];
    ++t.size;
    if (t.deepest_count == 0 || f.depth_[r] > t.max_depth) {
      t.max_depth = f.depth_[r];
      t.deepest = r;
      t.deepest_count = 1;
    } else if (f.depth_[r] == t.max_depth) {
      ++t.deepest_count;
    }
  }
  return f;
}

std::vector<DescTree> forest_trees(const Forest& forest) {
  std::vector<std::uint32_t> parent(forest.vertex_count());
  for (std::uint32_t r = 0; r < parent.size(); ++r) parent[r] = forest.parent(r);
  const auto idx = index_children(parent);
  std::vector<DescTree> out;
  out.reserve(forest.trees().size());
  for (const auto& t : forest.trees()) out.push_back(materialize(idx, t.base, forest.n()));
  return out;
}

std::vector<int> separation_word(const Permutation& p) {
  std::vector<int> out(p.size());
  for (int i = 1; i <= p.size(); ++i) out[i - 1] = p(i) - i;
  return out;
}

Configuration separation_config(const Permutation& p) {
  const int n = p.size();
  std::vector<Atom> atoms;
  for (int i = 1; i <= n; ++i) {
    const int k = p(i) - i;
    if (k >= 0) atoms.push_back({static_cast<double>(i) / n, k});
  }
  return Configuration(1.0, n, std::move(atoms));
}

std::vector<int> bump_separation(const std::vector<int>& sep, int m) {
  const int n = static_cast<int>(sep.size());
  if (m < 2 || m > n || sep[m - 1] != 0) {
    throw std::invalid_argument("bump_separation: position " + std::to_string(m) +
                                " is not 0-separated");
  }
  std::vector<int> out(sep);
  for (int i = m - 1; i >= 1; --i) out[i] = sep[i - 1] - 1;
  out[0] = m - 1;
  return out;
}

SeparationTree separation_tree(const Permutation& p, std::uint64_t max_nodes) {
  SeparationTree tree;
  tree.words.push_back(separation_word(p));
  tree.parents.push_back(-1);
  for (std::size_t head = 0; head < tree.words.size(); ++head) {
    const int n = static_cast<int>(tree.words[head].size());
    for (int m = 2; m <= n; ++m) {
      if (tree.words[head][m - 1] != 0) continue;
      if (tree.words.size() >= max_nodes) {
        tree.truncated = true;
        return tree;
      }
      auto child = bump_separation(tree.words[head], m);
      tree.words.push_back(std::move(child));
      tree.parents.push_back(static_cast<std::int64_t>(head));
    }
  }
  return tree;
}

}  // namespace bumpforest
