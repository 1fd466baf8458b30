#include "bumpforest/tree_shape.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace bumpforest {

std::string canonical_form(std::span<const std::int64_t> parents, int max_depth) {
  const auto n = parents.size();
  if (n == 0) return {};
  if (parents[0] != -1) throw std::invalid_argument("canonical_form: node 0 must be the root");

  std::vector<int> depth(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (parents[i] < 0 || static_cast<std::size_t>(parents[i]) >= i) {
      throw std::invalid_argument("canonical_form: parents must precede children");
    }
    depth[i] = depth[parents[i]] + 1;
  }

  std::vector<std::vector<std::string>> kids(n);
  std::vector<std::string> form(n);
  for (std::size_t i = n; i-- > 0;) {
    if (max_depth >= 0 && depth[i] > max_depth) continue;
    auto& k = kids[i];
    std::sort(k.begin(), k.end());
    std::string s = "(";
    for (auto& c : k) s += c;
    s += ')';
    k.clear();
    k.shrink_to_fit();
    if (i == 0) return s;
    kids[parents[i]].push_back(std::move(s));
  }
  return {};
}

}  // namespace bumpforest
