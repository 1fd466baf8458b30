#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace bumpforest {

/// Canonical string of a rooted unordered tree given as parent links
/// (parent[0] == -1, parent[i] < i). Two trees are isomorphic as rooted
/// trees iff their canonical strings are equal. Nodes deeper than
/// max_depth are ignored when max_depth >= 0.
std::string canonical_form(std::span<const std::int64_t> parents, int max_depth = -1);

}  // namespace bumpforest
