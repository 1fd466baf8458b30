#include "bumpforest/word.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bumpforest {
namespace {

constexpr std::string_view kEmptySymbol = "∅";
constexpr std::string_view kBoxSymbol = "□";

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("count exceeds 64 bits");
  return out;
}

void check_root_word(const Word& w, const IndexSet& a) {
  if (w.has_dead()) throw std::invalid_argument("completeness is defined on root words only");
  if (!a.empty() && static_cast<std::size_t>(a.indices().back()) >= w.length()) {
    throw std::invalid_argument("index set reaches past the end of the word");
  }
}

}  // namespace

Word::Word(std::vector<int> cells, int alphabet_bound)
    : cells_(std::move(cells)), alphabet_(alphabet_bound) {
  if (alphabet_ < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  for (int c : cells_) {
    if (c != kDead && (c < 0 || c >= alphabet_)) {
      throw std::invalid_argument("letter " + std::to_string(c) + " outside alphabet of size " +
                                  std::to_string(alphabet_));
    }
  }
}

Word Word::from_letters(std::initializer_list<int> letters) {
  return from_letters(std::vector<int>(letters));
}

Word Word::from_letters(std::vector<int> letters) {
  int bound = 1;
  for (int c : letters) bound = std::max(bound, c + 1);
  return Word(std::move(letters), bound);
}

Word Word::parse(std::string_view text, int alphabet_bound) {
  std::vector<int> cells;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == kEmptySymbol) continue;
    if (token == "_" || token == kBoxSymbol) {
      cells.push_back(kDead);
      continue;
    }
    int v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || v < 0) {
      throw std::invalid_argument("bad word token \"" + token + "\"");
    }
    cells.push_back(v);
  }
  if (alphabet_bound <= 0) {
    alphabet_bound = 1;
    for (int c : cells) alphabet_bound = std::max(alphabet_bound, c + 1);
  }
  return Word(std::move(cells), alphabet_bound);
}

bool Word::has_dead() const {
  return std::find(cells_.begin(), cells_.end(), kDead) != cells_.end();
}

std::size_t Word::dead_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kDead));
}

std::vector<int> Word::live_letters() const {
  std::vector<int> out;
  for (int c : cells_) {
    if (c != kDead) out.push_back(c);
  }
  return out;
}

std::string Word::to_string() const {
  if (dead_count() == cells_.size()) return std::string(kEmptySymbol);
  std::string out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i) out.push_back(' ');
    out += cells_[i] == kDead ? std::string("_") : std::to_string(cells_[i]);
  }
  return out;
}

IndexSet::IndexSet(std::initializer_list<int> indices) : IndexSet(std::vector<int>(indices)) {}

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) throw std::invalid_argument("negative index in index set");
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("index set must be strictly increasing");
    }
  }
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1) out.push_back(i);
  }
  IndexSet s;
  s.indices_ = std::move(out);
  return s;
}

Word word_of_config(const Configuration& c, int r) {
  if (r < 0 || c.sampled_depth() < r) {
    throw std::invalid_argument("word_of_config: configuration realizes only " +
                                std::to_string(c.sampled_depth()) + " layers, need " +
                                std::to_string(r));
  }
  std::vector<int> cells;
  for (const auto& a : c.atoms()) {
    if (a.layer < r) cells.push_back(a.layer);
  }
  return Word(std::move(cells), std::max(r, 1));
}

Word bump_word(const Word& w, std::size_t i) {
  if (i >= w.length() || w[i] != 0) {
    throw std::invalid_argument("bump_word: cell " + std::to_string(i) + " is not a live 0");
  }
  std::vector<int> cells = w.cells();
  cells[i] = kDead;
  for (std::size_t k = 0; k < i; ++k) {
    if (cells[k] != kDead) cells[k] = cells[k] == 0 ? kDead : cells[k] - 1;
  }
  return Word(std::move(cells), w.alphabet_bound());
}

std::vector<Word> children(const Word& w) {
  std::vector<Word> out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (w[i] == 0) out.push_back(bump_word(w, i));
  }
  return out;
}

bool is_complete(const Word& w, const IndexSet& a) {
  check_root_word(w, a);
  const int j = static_cast<int>(a.size());
  const int r = w.alphabet_bound();
  for (int k = 0; k < j; ++k) {
    if (w[a[k]] > std::min(j - 1 - k, r - 1)) return false;
  }
  return true;
}

std::vector<int> recover_order(const Word& w, const IndexSet& a) {
  if (!is_complete(w, a)) throw std::invalid_argument("recover_order: index set is not complete");
  // Letter of the k-th index = number of indices to its right bumped before
  // it. Inserting right to left at that offset rebuilds the bump sequence.
  std::vector<int> order;
  order.reserve(a.size());
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k) {
    order.insert(order.begin() + w[a[k]], k);
  }
  return order;
}

std::uint64_t truncated_factorial(int y, int x) {
  if (x < 0 || y < 0) throw std::invalid_argument("truncated_factorial: negative argument");
  std::uint64_t out = 1;
  for (int k = 1; k <= x; ++k) out = checked_mul(out, static_cast<std::uint64_t>(std::min(k, y)));
  return out;
}

std::uint64_t count_complete_fillings(const IndexSet& a, int r) {
  if (r < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  // The i-th of j indices may hold any of min(j - i + 1, r) letters.
  const int j = static_cast<int>(a.size());
  std::uint64_t out = 1;
  for (int i = 1; i <= j; ++i) out = checked_mul(out, static_cast<std::uint64_t>(std::min(j - i + 1, r)));
  return out;
}

std::uint64_t count_leaf_fillings(const IndexSet& a, int n, int r) {
  if (r < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  if (!a.empty() && a.indices().back() >= n) {
    throw std::invalid_argument("index set reaches past the word length");
  }
  const int j = static_cast<int>(a.size());
  std::uint64_t out = truncated_factorial(r, j);
  // A cell outside `a` with `right` bumped indices after it ends up live 0
  // exactly when its letter equals `right`, which is possible only if right < r.
  std::size_t next = 0;
  for (int cell = 0; cell < n; ++cell) {
    if (next < a.size() && a[next] == cell) {
      ++next;
      continue;
    }
    const int right = j - static_cast<int>(next);
    out = checked_mul(out, static_cast<std::uint64_t>(right >= r ? r : r - 1));
  }
  return out;
}

std::uint64_t count_double_complete(const IndexSet& a, const IndexSet& b, int r) {
  if (r < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  std::vector<int> all;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  const std::size_t width = all.empty() ? 0 : static_cast<std::size_t>(all.back()) + 1;

  std::vector<int> filling(all.size(), 0);
  std::vector<int> cells(width, 0);
  std::uint64_t count = 0;
  while (true) {
    for (std::size_t k = 0; k < all.size(); ++k) cells[all[k]] = filling[k];
    const Word w(cells, r);
    if (is_complete(w, a) && is_complete(w, b)) ++count;
    std::size_t k = 0;
    while (k < filling.size() && ++filling[k] == r) filling[k++] = 0;
    if (k == filling.size()) break;
  }
  return count;
}

std::uint64_t double_complete_product(const IndexSet& a, const IndexSet& b, int r) {
  if (r < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  std::vector<int> all;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  auto choices_in = [](const IndexSet& s, int cell) -> int {
    const auto it = std::lower_bound(s.begin(), s.end(), cell);
    if (it == s.end() || *it != cell) return std::numeric_limits<int>::max();
    return static_cast<int>(s.end() - it);  // slack + 1
  };
  std::uint64_t out = 1;
  for (int cell : all) {
    const int c = std::min({choices_in(a, cell), choices_in(b, cell), r});
    out = checked_mul(out, static_cast<std::uint64_t>(c));
  }
  return out;
}

DoubleCompleteBounds bound_double_complete(int a_only, int b_only, int shared, int r) {
  if (a_only < 0 || b_only < 0 || shared < 0) {
    throw std::invalid_argument("bound_double_complete: negative size");
  }
  if (r < 1) throw std::invalid_argument("alphabet bound must be >= 1");
  DoubleCompleteBounds out{};
  out.lower = checked_mul(truncated_factorial(r, std::min(a_only, b_only) + shared),
                          truncated_factorial(r, std::max(a_only, b_only)));
  // (b + shared)! / shared! as a falling product keeps it integral.
  std::uint64_t upper = 1;
  for (int k = 2; k <= a_only + shared; ++k) upper = checked_mul(upper, static_cast<std::uint64_t>(k));
  for (int k = shared + 1; k <= b_only + shared; ++k) {
    upper = checked_mul(upper, static_cast<std::uint64_t>(k));
  }
  out.upper = upper;
  return out;
}

}  // namespace bumpforest
