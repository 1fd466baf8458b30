#include "bumpforest/permutation.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace bumpforest {

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
  const auto n = values_.size();
  if (n == 0) throw std::invalid_argument("permutation must have at least one value");
  std::vector<bool> seen(n + 1, false);
  for (int v : values_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[v]) {
      throw std::invalid_argument("values are not a permutation of 1..n");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v), Unchecked{});
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> values;
  if (text.find(',') == std::string_view::npos) {
    for (char ch : text) {
      if (ch < '1' || ch > '9') {
        throw std::invalid_argument("bad permutation digit in \"" + std::string(text) + "\"");
      }
      values.push_back(ch - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto next = text.find(',', pos);
      if (next == std::string_view::npos) next = text.size();
      auto field = text.substr(pos, next - pos);
      int v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::invalid_argument("bad permutation entry \"" + std::string(field) + "\"");
      }
      values.push_back(v);
      pos = next + 1;
    }
  }
  return Permutation(std::move(values));
}

std::string Permutation::to_string() const {
  std::string out;
  if (size() <= 9) {
    for (int v : values_) out.push_back(static_cast<char>('0' + v));
    return out;
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values_[i]);
  }
  return out;
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxRankable) throw std::invalid_argument("factorial argument out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t rank(const Permutation& p) {
  const int n = p.size();
  if (n > kMaxRankable) throw std::invalid_argument("permutation too long to rank");
  // Lehmer digit i counts smaller values to the right of position i.
  std::uint32_t used = 0;
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) {
    const int v = p.values()[i] - 1;
    const std::uint32_t below = (1u << v) - 1;
    const int smaller_left = __builtin_popcount(used & below);
    r = r * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(v - smaller_left);
    used |= 1u << v;
  }
  return r;
}

Permutation unrank(std::uint64_t r, int n) {
  if (n < 1 || n > kMaxRankable) throw std::invalid_argument("unrank size out of range");
  if (r >= factorial(n)) throw std::invalid_argument("rank out of range");
  std::vector<int> digits(n);
  for (int i = n - 1; i >= 0; --i) {
    const auto base = static_cast<std::uint64_t>(n - i);
    digits[i] = static_cast<int>(r % base);
    r /= base;
  }
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) {
    values.push_back(pool[digits[i]]);
    pool.erase(pool.begin() + digits[i]);
  }
  return Permutation(std::move(values), Permutation::Unchecked{});
}

}  // namespace bumpforest
