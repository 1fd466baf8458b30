#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "bumpforest/point_process.hpp"

namespace bumpforest {

/// Marker for a cell that was bumped or shifted below zero.
inline constexpr int kDead = -1;

/// A word over {0, ..., r-1} plus the dead marker.
///
/// Cells are addressed by 0-based index. Bumping never revives a dead cell,
/// so every word in one bump tree has the same length.
class Word {
 public:
  Word() = default;
  Word(std::vector<int> cells, int alphabet_bound);

  /// Alphabet bound defaults to one more than the largest letter (at least 1).
  static Word from_letters(std::initializer_list<int> letters);
  static Word from_letters(std::vector<int> letters);

  /// Space separated letters, "_" for dead, "∅" for the empty word.
  static Word parse(std::string_view text, int alphabet_bound = 0);

  std::size_t length() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  int alphabet_bound() const { return alphabet_; }
  int operator[](std::size_t i) const { return cells_[i]; }
  const std::vector<int>& cells() const { return cells_; }

  bool is_live(std::size_t i) const { return cells_[i] != kDead; }
  bool has_dead() const;
  std::size_t dead_count() const;

  /// Letters with dead cells removed.
  std::vector<int> live_letters() const;

  /// Full view with "_" for dead cells. An all-dead or empty word prints "∅".
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<int> cells_;
  int alphabet_ = 1;
};

/// Strictly increasing 0-based cell indices a_1 < ... < a_j.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> indices);
  explicit IndexSet(std::vector<int> indices);

  /// Members of bitmask `mask` over {0..63}.
  static IndexSet from_mask(std::uint64_t mask);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  int operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<int>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> indices_;
};

/// Layers of the atoms with layer < r, in location order.
/// Throws std::invalid_argument if c.sampled_depth() < r.
Word word_of_config(const Configuration& c, int r);

/// Bump the live 0 at index i: it dies, every live cell left of it drops by
/// one (a live 0 there dies), cells right of it are unchanged.
Word bump_word(const Word& w, std::size_t i);

/// One child per live 0, in index order.
std::vector<Word> children(const Word& w);

/// Inversion-table criterion: w[a_i] <= min(j - i, r - 1) for 1-based i.
/// w must have no dead cells.
bool is_complete(const Word& w, const IndexSet& a);

/// The unique legal bump order for a complete index set, as positions into
/// `a`: bump a[order[0]] first, then a[order[1]], and so on.
/// Throws std::invalid_argument if a is not complete in w.
std::vector<int> recover_order(const Word& w, const IndexSet& a);

/// f_y(x): x! if x <= y, else y! * y^(x - y). Throws std::overflow_error past 64 bits.
std::uint64_t truncated_factorial(int y, int x);

/// Fillings of the cells of an index set of size j making it complete: f_r(j).
std::uint64_t count_complete_fillings(const IndexSet& a, int r);

/// Length-n words over {0..r-1} in which bumping exactly the cells of `a`
/// reaches a leaf.
std::uint64_t count_leaf_fillings(const IndexSet& a, int n, int r);

/// Fillings u of A ∪ B with both u_A and u_B complete, by enumerating all
/// r^|A ∪ B| fillings.
std::uint64_t count_double_complete(const IndexSet& a, const IndexSet& b, int r);

/// Closed form of count_double_complete: each cell of A ∪ B independently
/// takes any letter up to its tightest completeness bound, so the count is
/// the product over cells of min(slack_A + 1, slack_B + 1, r), where the
/// slack of the i-th of j indices is j - i.
std::uint64_t double_complete_product(const IndexSet& a, const IndexSet& b, int r);

struct DoubleCompleteBounds {
  std::uint64_t lower;
  std::uint64_t upper;
};

/// Layout-free bounds on count_double_complete for |A \ B| = a_only,
/// |B \ A| = b_only, |A ∩ B| = shared:
/// lower = f_r(min + shared) * f_r(max), upper = (a+shared)! (b+shared)! / shared!.
DoubleCompleteBounds bound_double_complete(int a_only, int b_only, int shared, int r);

}  // namespace bumpforest
