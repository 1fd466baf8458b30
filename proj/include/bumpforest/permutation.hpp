#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bumpforest {

/// A permutation of {1, ..., n} in one-line notation.
///
/// Positions are 1-based to match the usual pi(1) pi(2) ... pi(n) reading.
/// Construction validates that the values form a bijection.
class Permutation {
 public:
  explicit Permutation(std::vector<int> values);

  static Permutation identity(int n);

  /// Digit string for n <= 9 ("31245"), comma separated otherwise ("10,1,2,...").
  static Permutation parse(std::string_view text);

  int size() const { return static_cast<int>(values_.size()); }
  int operator()(int position) const { return values_[position - 1]; }
  std::span<const int> values() const { return values_; }

  bool is_base() const { return values_.front() == 1; }

  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> values, Unchecked) : values_(std::move(values)) {}

  std::vector<int> values_;

  friend Permutation tau(const Permutation&);
  friend Permutation bump_value(const Permutation&, int);
  friend Permutation unrank(std::uint64_t, int);
};

/// Largest n for which rank() fits in 64 bits.
inline constexpr int kMaxRankable = 20;

/// Lehmer-code rank in [0, n!), lexicographic order.
std::uint64_t rank(const Permutation& p);
Permutation unrank(std::uint64_t r, int n);

std::uint64_t factorial(int n);

}  // namespace bumpforest
