#include "bumpforest/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/rational.hpp>

#include "bumpforest/bump_tree.hpp"
#include "bumpforest/estimators.hpp"
#include "bumpforest/perm_forest.hpp"
#include "bumpforest/word.hpp"

namespace bumpforest {
namespace {

using Rational = boost::rational<std::int64_t>;

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return out;
}

std::uint64_t power(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Calls fn(word) for every word of length n over {0..r-1}.
void for_each_word(int n, int r, const std::function<bool(const Word&)>& fn) {
  std::vector<int> letters(n, 0);
  while (true) {
    if (!fn(Word(letters, r))) return;
    int k = 0;
    while (k < n && ++letters[k] == r) letters[k++] = 0;
    if (k == n) return;
  }
}

std::string describe(const Word& w, const IndexSet& a) {
  std::ostringstream out;
  out << "word \"" << w.to_string() << "\" (r=" << w.alphabet_bound() << "), A={";
  for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i];
  out << '}';
  return out.str();
}

// Number of bump orders of `a` that are legal, found by depth-first search
// over every cell of `a` that is a live 0 at its turn.
std::uint64_t count_legal_orders(const Word& w, const std::vector<int>& remaining,
                                 std::vector<int>* first_order, std::vector<int>& prefix) {
  if (remaining.empty()) {
    if (first_order && first_order->empty()) *first_order = prefix;
    return 1;
  }
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < remaining.size(); ++k) {
    const int cell = remaining[k];
    if (w[cell] != 0) continue;
    std::vector<int> rest = remaining;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    prefix.push_back(cell);
    total += count_legal_orders(bump_word(w, static_cast<std::size_t>(cell)), rest, first_order, prefix);
    prefix.pop_back();
  }
  return total;
}

void fail(VerifyResult& result, std::string message) {
  if (result.passed) result.counterexample = std::move(message);
  result.passed = false;
}

VerifyResult word_identities(const VerifyBudget& b) {
  if (b.n_max > 9 || b.r_max > 4) throw std::invalid_argument("word-identities budget: n <= 9, r <= 4");
  VerifyResult result{"word-identities"};
  for (int r = 1; r <= b.r_max; ++r) {
    for (int n = 0; n <= b.n_max; ++n) {
      std::vector<std::uint64_t> sums(n + 1, 0);
      for_each_word(n, r, [&](const Word& w) {
        const auto by_size = complete_subsets_by_size(w);
        for (int j = 0; j <= n; ++j) sums[j] += by_size[j];
        return true;
      });
      for (int j = 0; j <= n; ++j) {
        ++result.checks;
        const auto expected = binomial(n, j) * truncated_factorial(r, j) * power(r, n - j);
        if (sums[j] != expected) {
          std::ostringstream msg;
          msg << "n=" << n << " r=" << r << " j=" << j << ": enumerated " << sums[j]
              << " complete subsets, expected C(n,j) f_r(j) r^(n-j) = " << expected;
          fail(result, msg.str());
        }
      }
    }
  }
  return result;
}

VerifyResult completeness(const VerifyBudget& b) {
  if (b.len_max > 8 || b.r_max > 4) throw std::invalid_argument("completeness budget: len <= 8, r <= 4");
  VerifyResult result{"completeness"};
  for (int r = 1; r <= b.r_max; ++r) {
    for (int n = 0; n <= b.len_max; ++n) {
      for_each_word(n, r, [&](const Word& w) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          const auto a = IndexSet::from_mask(mask);
          std::vector<int> found;
          std::vector<int> prefix;
          const auto orders = count_legal_orders(w, a.indices(), &found, prefix);
          const bool criterion = is_complete(w, a);
          ++result.checks;
          if (criterion != (orders > 0)) {
            fail(result, describe(w, a) + ": criterion says " + (criterion ? "complete" : "incomplete") +
                             ", search found " + std::to_string(orders) + " orders");
            return false;
          }
          if (orders > 1) {
            fail(result, describe(w, a) + ": " + std::to_string(orders) + " legal orders");
            return false;
          }
          if (criterion) {
            const auto order = recover_order(w, a);
            std::vector<int> cells;
            for (int k : order) cells.push_back(a[k]);
            if (cells != found) {
              fail(result, describe(w, a) + ": recover_order disagrees with search");
              return false;
            }
          }
        }
        return true;
      });
      if (!result.passed) return result;
    }
  }
  return result;
}

VerifyResult leaves(const VerifyBudget& b) {
  if (b.len_max > 8 || b.r_max > 4) throw std::invalid_argument("leaves budget: len <= 8, r <= 4");
  VerifyResult result{"leaves"};
  for (int r = 1; r <= b.r_max; ++r) {
    for (int n = 0; n <= b.len_max; ++n) {
      // Leaf tallies keyed by the bumped set (as a mask), from explicit trees.
      std::vector<std::uint64_t> tally(std::size_t{1} << n, 0);
      for_each_word(n, r, [&](const Word& w) {
        const auto tree = tree_of_word(w);
        std::vector<std::uint64_t> mask(tree.nodes.size(), 0);
        for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
          mask[i] = mask[tree.nodes[i].parent] | (std::uint64_t{1} << tree.nodes[i].bumped);
        }
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
          if (tree.nodes[i].children == 0) ++tally[mask[i]];
        }
        return true;
      });
      for (std::uint64_t m = 0; m < tally.size(); ++m) {
        ++result.checks;
        const auto a = IndexSet::from_mask(m);
        const auto formula = count_leaf_fillings(a, n, r);
        if (formula != tally[m]) {
          std::ostringstream msg;
          msg << "n=" << n << " r=" << r << " A mask " << m << ": formula " << formula
              << ", tree enumeration " << tally[m];
          fail(result, msg.str());
          return result;
        }
      }
    }
  }
  return result;
}

VerifyResult double_complete(const VerifyBudget& b) {
  if (b.len_max > 7 || b.r_max > 4) throw std::invalid_argument("double-complete budget: len <= 7, r <= 4");
  VerifyResult result{"double-complete"};
  for (int r = 1; r <= b.r_max; ++r) {
    for (int m = 0; m <= b.len_max; ++m) {
      // Every cell of A ∪ B is A-only (0), B-only (1) or shared (2).
      std::map<std::tuple<int, int, int>, std::uint64_t> minimum;
      const auto layouts = power(3, m);
      for (std::uint64_t code = 0; code < layouts; ++code) {
        std::vector<int> av, bv;
        int a_only = 0, b_only = 0, shared = 0;
        auto c = code;
        for (int cell = 0; cell < m; ++cell, c /= 3) {
          const int label = static_cast<int>(c % 3);
          if (label != 1) av.push_back(cell);
          if (label != 0) bv.push_back(cell);
          (label == 0 ? a_only : label == 1 ? b_only : shared)++;
        }
        const IndexSet a(av), bset(bv);
        const auto brute = count_double_complete(a, bset, r);
        const auto product = double_complete_product(a, bset, r);
        const auto bounds = bound_double_complete(a_only, b_only, shared, r);
        ++result.checks;
        std::ostringstream where;
        where << "r=" << r << " layout " << code << " (|A\\B|=" << a_only << ", |B\\A|=" << b_only
              << ", |A∩B|=" << shared << ")";
        if (brute != product) {
          fail(result, where.str() + ": brute force " + std::to_string(brute) + " != product " +
                           std::to_string(product));
          return result;
        }
        if (brute < bounds.lower || brute > bounds.upper) {
          fail(result, where.str() + ": " + std::to_string(brute) + " outside [" +
                           std::to_string(bounds.lower) + ", " + std::to_string(bounds.upper) + "]");
          return result;
        }
        auto key = std::make_tuple(a_only, b_only, shared);
        auto it = minimum.find(key);
        if (it == minimum.end() || brute < it->second) minimum[key] = brute;
      }
      // The lower bound is attained by the layout with the shared cells first.
      for (const auto& [key, value] : minimum) {
        const auto [a_only, b_only, shared] = key;
        ++result.checks;
        if (value != bound_double_complete(a_only, b_only, shared, r).lower) {
          std::ostringstream msg;
          msg << "r=" << r << " sizes (" << a_only << "," << b_only << "," << shared
              << "): minimum over layouts " << value << " is not the lower bound";
          fail(result, msg.str());
          return result;
        }
      }
    }
  }
  return result;
}

VerifyResult forest_facts(const VerifyBudget& b) {
  if (b.n_max < 1 || b.n_max > 9) throw std::invalid_argument("forest-facts budget: 1 <= n <= 9");
  VerifyResult result{"forest-facts"};
  for (int n = 1; n <= b.n_max; ++n) {
    const auto forest = build_forest(n);
    std::ostringstream where;
    where << "n=" << n << ": ";

    std::uint64_t total = 0;
    for (const auto& t : forest.trees()) {
      total += t.size;
      if (!unrank(t.base, n).is_base()) fail(result, where.str() + "tree base does not start with 1");
    }
    ++result.checks;
    if (total != factorial(n)) fail(result, where.str() + "trees do not cover n! vertices");

    const int longest = (1 << (n - 1)) - 1;
    std::vector<int> staircase;
    for (int v = 2; v <= n; ++v) staircase.push_back(v);
    staircase.push_back(1);
    const auto expected_leaf = rank(Permutation(staircase));
    ++result.checks;
    if (forest.max_depth() != longest || forest.max_depth_count() != 1 ||
        forest.deepest() != expected_leaf || forest.base_of(forest.deepest()) != 0) {
      std::ostringstream msg;
      msg << where.str() << "longest path " << forest.max_depth() << " (x" << forest.max_depth_count()
          << ") from " << unrank(forest.deepest(), n).to_string() << ", expected unique path of "
          << longest << " from " << Permutation(staircase).to_string();
      fail(result, msg.str());
    }

    const auto identity_size = forest.tree_with_base(0).size;
    const double lo = static_cast<double>(factorial(n - 1));
    ++result.checks;
    if (identity_size < lo || static_cast<double>(identity_size) > std::exp(1.0) * lo) {
      fail(result, where.str() + "identity tree size " + std::to_string(identity_size) +
                       " outside [(n-1)!, e(n-1)!]");
    }

    if (n <= 6) {
      for (std::uint32_t r = 0; r < forest.vertex_count(); ++r) {
        const auto p = unrank(r, n);
        for (int m : fixed_points(p)) {
          ++result.checks;
          if (tau(bump_value(p, m)) != p) {
            fail(result, where.str() + "tau(bump(" + p.to_string() + ", " + std::to_string(m) + ")) != p");
          }
        }
      }
    }
  }
  return result;
}

VerifyResult depth_expectations(const VerifyBudget& b) {
  VerifyResult result{"depth-expectations"};
  const int r_top = std::min(b.r_max, kMaxExactAlphabet);
  for (int r = 1; r <= r_top; ++r) {
    const auto table = exact_depth_expectations(b.alpha, r, b.n_max);
    for (const auto& row : table.rows) {
      ++result.checks;
      const double gap = row.size_target - row.size_partial;
      if (gap < -1e-12 || gap > row.size_tail * (1 + 1e-9) + 1e-15) {
        std::ostringstream msg;
        msg << "r=" << r << " j=" << row.j << ": E[D_j] partial " << row.size_partial
            << " not within tail " << row.size_tail << " of " << row.size_target;
        fail(result, msg.str());
      }
      if (row.leaves_partial) {
        ++result.checks;
        const double lgap = row.leaves_target - *row.leaves_partial;
        if (lgap < -1e-12 || lgap > row.leaves_tail * (1 + 1e-9) + 1e-15) {
          std::ostringstream msg;
          msg << "r=" << r << " j=" << row.j << ": E[U_j] partial " << *row.leaves_partial
              << " not within tail " << row.leaves_tail << " of " << row.leaves_target;
          fail(result, msg.str());
        }
      }
    }
  }

  // Word-length law in exact arithmetic, the common e^(-alpha r) factor
  // removed: summing alpha^n / n! over all r^n words gives (alpha r)^n / n!.
  const Rational alpha(static_cast<std::int64_t>(std::llround(b.alpha * 1000)), 1000);
  for (int r = 1; r <= r_top; ++r) {
    for (int n = 0; n <= std::min(b.n_max, 6); ++n) {
      Rational per_word(1);
      for (int i = 1; i <= n; ++i) per_word *= alpha / Rational(i);
      Rational sum(0);
      for_each_word(n, r, [&](const Word&) {
        sum += per_word;
        return true;
      });
      Rational expected(1);
      for (int i = 1; i <= n; ++i) expected *= alpha * Rational(r) / Rational(i);
      ++result.checks;
      if (sum != expected) {
        fail(result, "word length law fails at r=" + std::to_string(r) + " n=" + std::to_string(n));
      }
    }
  }
  return result;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"word-identities", "completeness",  "leaves",
                                              "double-complete", "forest-facts", "depth-expectations"};
  return names;
}

VerifyResult run_verify_suite(std::string_view suite, const VerifyBudget& budget) {
  if (suite == "word-identities") return word_identities(budget);
  if (suite == "completeness") return completeness(budget);
  if (suite == "leaves") return leaves(budget);
  if (suite == "double-complete") return double_complete(budget);
  if (suite == "forest-facts") return forest_facts(budget);
  if (suite == "depth-expectations") return depth_expectations(budget);
  throw std::invalid_argument("unknown suite \"" + std::string(suite) + "\"");
}

}  // namespace bumpforest
