#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "bumpforest/word.hpp"

using namespace bumpforest;

namespace {

Word W(const char* s, int r = 0) { return Word::parse(s, r); }

// Every word of length n over {0..r-1}.
void for_each_word(int n, int r, const std::function<void(const Word&)>& fn) {
  std::vector<int> cells(n, 0);
  while (true) {
    fn(Word(cells, r));
    int i = n - 1;
    while (i >= 0 && cells[i] == r - 1) cells[i--] = 0;
    if (i < 0) return;
    ++cells[i];
  }
}

// Legal bump orders of the cells of `a`, found by trying every order.
std::vector<std::vector<int>> legal_orders(const Word& w, const IndexSet& a) {
  std::vector<int> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    Word cur = w;
    bool ok = true;
    for (int k : order) {
      if (cur[a[k]] != 0) {
        ok = false;
        break;
      }
      cur = bump_word(cur, a[k]);
    }
    if (ok) out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace

TEST(Word, ParseAndPrint) {
  EXPECT_EQ(W("2 1 0 1 0").to_string(), "2 1 0 1 0");
  EXPECT_EQ(W("1 0 _ 1 0").to_string(), "1 0 _ 1 0");
  EXPECT_EQ(W("1 0 □ 0 □").to_string(), "1 0 _ 0 _");
  EXPECT_EQ(W("∅").length(), 0u);
  EXPECT_EQ(W("").to_string(), "∅");
  EXPECT_EQ(W("_ _").to_string(), "∅");
  EXPECT_EQ(W("2 1 0").alphabet_bound(), 3);
  EXPECT_EQ(W("0 0", 4).alphabet_bound(), 4);
  EXPECT_THROW(W("3", 2), std::invalid_argument);
  EXPECT_THROW(W("x"), std::invalid_argument);
}

TEST(Word, Views) {
  const auto w = W("1 0 _ 0 _");
  EXPECT_TRUE(w.has_dead());
  EXPECT_EQ(w.dead_count(), 2u);
  EXPECT_EQ(w.live_letters(), (std::vector<int>{1, 0, 0}));
  EXPECT_FALSE(w.is_live(2));
}

TEST(BumpWord, FigureFourRootChildren) {
  const auto w = W("2 1 0 1 0");
  EXPECT_EQ(bump_word(w, 2), W("1 0 _ 1 0", 3));
  EXPECT_EQ(bump_word(w, 4), W("1 0 _ 0 _", 3));
}

TEST(BumpWord, SingleZeroDies) {
  EXPECT_EQ(bump_word(W("0"), 0).to_string(), "∅");
}

TEST(BumpWord, RejectsNonZero) {
  EXPECT_THROW(bump_word(W("1 0"), 0), std::invalid_argument);
  EXPECT_THROW(bump_word(W("_ 0"), 0), std::invalid_argument);
  EXPECT_THROW(bump_word(W("0"), 1), std::invalid_argument);
}

TEST(Children, Examples) {
  EXPECT_EQ(children(W("2 1 0 1 0")).size(), 2u);
  EXPECT_TRUE(children(W("1 1")).empty());
  const auto kids = children(W("0 0"));
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0].to_string(), "_ 0");
  EXPECT_EQ(kids[1].to_string(), "∅");
  EXPECT_EQ(kids[1].dead_count(), 2u);
}

TEST(Children, BumpingIsMonotone) {
  for_each_word(5, 3, [](const Word& w) {
    std::function<void(const Word&)> walk = [&](const Word& parent) {
      for (const auto& child : children(parent)) {
        EXPECT_GT(child.dead_count(), parent.dead_count());
        for (std::size_t i = 0; i < child.length(); ++i) {
          if (child.is_live(i)) EXPECT_LE(child[i], parent[i]);
          if (!parent.is_live(i)) EXPECT_FALSE(child.is_live(i));
        }
        walk(child);
      }
    };
    walk(w);
  });
}

TEST(IsComplete, Examples) {
  const auto w = W("2 1 0 1 0", 3);
  EXPECT_TRUE(is_complete(w, {0, 1, 2}));
  EXPECT_FALSE(is_complete(w, {0}));
  EXPECT_TRUE(is_complete(w, {}));
  EXPECT_TRUE(is_complete(W("0 0 0"), {0, 1, 2}));
}

TEST(IsComplete, AgreesWithExhaustiveOrderSearch) {
  for (int n = 0; n <= 6; ++n) {
    for (int r = 1; r <= 3; ++r) {
      for_each_word(n, r, [&](const Word& w) {
        for (std::uint64_t m = 0; m < (1u << n); ++m) {
          const auto a = IndexSet::from_mask(m);
          const auto orders = legal_orders(w, a);
          ASSERT_EQ(is_complete(w, a), !orders.empty()) << w.to_string() << " mask " << m;
          if (!orders.empty()) {
            ASSERT_EQ(orders.size(), 1u);
            ASSERT_EQ(recover_order(w, a), orders.front());
          }
        }
      });
    }
  }
}

TEST(RecoverOrder, Examples) {
  EXPECT_EQ(recover_order(W("2 1 0"), {0, 1, 2}), (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(recover_order(W("0"), {0}), (std::vector<int>{0}));
  EXPECT_EQ(recover_order(W("0 0"), {0, 1}), (std::vector<int>{0, 1}));
  EXPECT_THROW(recover_order(W("1 1"), {0, 1}), std::invalid_argument);
}

TEST(TruncatedFactorial, Values) {
  EXPECT_EQ(truncated_factorial(3, 5), 54u);
  EXPECT_EQ(truncated_factorial(5, 3), 6u);
  EXPECT_EQ(truncated_factorial(1, 4), 1u);
  EXPECT_EQ(truncated_factorial(2, 4), 8u);
  EXPECT_EQ(truncated_factorial(4, 0), 1u);
  EXPECT_EQ(truncated_factorial(0, 0), 1u);
  EXPECT_EQ(truncated_factorial(0, 3), 0u);
  EXPECT_THROW(truncated_factorial(30, 30), std::overflow_error);
}

TEST(CompleteFillings, Examples) {
  EXPECT_EQ(count_complete_fillings({0, 1}, 3), 2u);
  EXPECT_EQ(count_complete_fillings({0, 1, 2, 3}, 2), 8u);
  EXPECT_EQ(count_complete_fillings({}, 2), 1u);
}

TEST(CompleteFillings, BruteForce) {
  for (int j = 0; j <= 6; ++j) {
    for (int r = 1; r <= 4; ++r) {
      std::vector<int> all(j);
      std::iota(all.begin(), all.end(), 0);
      const IndexSet a(all);
      std::uint64_t count = 0;
      for_each_word(j, r, [&](const Word& w) { count += is_complete(w, a); });
      EXPECT_EQ(count, count_complete_fillings(a, r)) << j << ' ' << r;
    }
  }
}

TEST(LeafFillings, Examples) {
  EXPECT_EQ(count_leaf_fillings({1}, 2, 2), 1u);
  EXPECT_EQ(count_leaf_fillings({0, 2}, 3, 3), 4u);
  EXPECT_EQ(count_leaf_fillings({0, 1, 2, 3}, 4, 2), truncated_factorial(2, 4));
}

TEST(LeafFillings, SmallSetsUseSimpleForm) {
  // For j < r: j! (r-1)^(n-j).
  for (int r = 2; r <= 4; ++r) {
    for (int n = 0; n <= 6; ++n) {
      for (std::uint64_t m = 0; m < (1u << n); ++m) {
        const auto a = IndexSet::from_mask(m);
        const int j = static_cast<int>(a.size());
        if (j >= r) continue;
        std::uint64_t expected = truncated_factorial(j, j);
        for (int k = 0; k < n - j; ++k) expected *= r - 1;
        EXPECT_EQ(count_leaf_fillings(a, n, r), expected);
      }
    }
  }
}

TEST(LeafFillings, BruteForceOverWordsAndBumpSequences) {
  for (int r = 1; r <= 3; ++r) {
    for (int n = 0; n <= 5; ++n) {
      std::vector<std::uint64_t> tally(1u << n, 0);
      for_each_word(n, r, [&](const Word& w) {
        for (std::uint64_t m = 0; m < tally.size(); ++m) {
          const auto a = IndexSet::from_mask(m);
          if (!is_complete(w, a)) continue;
          Word cur = w;
          for (int k : recover_order(w, a)) cur = bump_word(cur, a[k]);
          if (children(cur).empty()) ++tally[m];
        }
      });
      for (std::uint64_t m = 0; m < tally.size(); ++m) {
        EXPECT_EQ(count_leaf_fillings(IndexSet::from_mask(m), n, r), tally[m]);
      }
    }
  }
}

TEST(DoubleComplete, Degenerate) {
  for (int r = 1; r <= 4; ++r) {
    for (int c = 0; c <= 5; ++c) {
      std::vector<int> all(c);
      std::iota(all.begin(), all.end(), 0);
      EXPECT_EQ(count_double_complete(IndexSet(all), IndexSet(all), r), truncated_factorial(r, c));
    }
  }
  EXPECT_EQ(count_double_complete({0, 2}, {1, 3, 4}, 4), 2u * 6u);
  // Shared cells smallest, a <= b: f_r(a+c) f_r(b).
  EXPECT_EQ(count_double_complete({0, 1, 2}, {0, 1, 3, 4}, 4),
            truncated_factorial(4, 3) * truncated_factorial(4, 2));
}

TEST(DoubleComplete, ProductMatchesBruteForceAndBounds) {
  for (int r = 1; r <= 4; ++r) {
    for (int m = 0; m <= 6; ++m) {
      // Each of the m cells is in A only, B only, or both.
      std::vector<int> layout(m, 0);
      while (true) {
        std::vector<int> av, bv;
        int a_only = 0, b_only = 0, shared = 0;
        for (int i = 0; i < m; ++i) {
          if (layout[i] != 1) av.push_back(i);
          if (layout[i] != 0) bv.push_back(i);
          a_only += layout[i] == 0;
          b_only += layout[i] == 1;
          shared += layout[i] == 2;
        }
        const IndexSet a(av), b(bv);
        const auto brute = count_double_complete(a, b, r);
        EXPECT_EQ(double_complete_product(a, b, r), brute);
        const auto bounds = bound_double_complete(a_only, b_only, shared, r);
        EXPECT_GE(brute, bounds.lower);
        EXPECT_LE(brute, bounds.upper);
        int i = m - 1;
        while (i >= 0 && layout[i] == 2) layout[i--] = 0;
        if (i < 0) break;
        ++layout[i];
      }
    }
  }
}

TEST(DoubleComplete, BoundExamples) {
  auto b = bound_double_complete(0, 0, 2, 2);
  EXPECT_EQ(b.lower, 2u);
  EXPECT_EQ(b.upper, 2u);
  b = bound_double_complete(1, 1, 1, 10);
  EXPECT_EQ(b.lower, 2u);
  EXPECT_EQ(b.upper, 4u);
  b = bound_double_complete(2, 1, 0, 10);
  EXPECT_EQ(b.lower, 2u);
  EXPECT_EQ(b.upper, 2u);
}

TEST(DoubleComplete, OneOneOneLayoutsSpanTheBounds) {
  // a = b = c = 1 with large r: minimum 2, maximum 4 over the 3! layouts.
  std::vector<int> roles{0, 1, 2};
  std::uint64_t lo = ~0ull, hi = 0;
  do {
    std::vector<int> av, bv;
    for (int i = 0; i < 3; ++i) {
      if (roles[i] != 1) av.push_back(i);
      if (roles[i] != 0) bv.push_back(i);
    }
    const auto x = count_double_complete(IndexSet(av), IndexSet(bv), 10);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  } while (std::next_permutation(roles.begin(), roles.end()));
  EXPECT_EQ(lo, 2u);
  EXPECT_EQ(hi, 4u);
}

TEST(IndexSet, Validates) {
  EXPECT_THROW(IndexSet({1, 1}), std::invalid_argument);
  EXPECT_THROW(IndexSet({2, 1}), std::invalid_argument);
  EXPECT_THROW(IndexSet({-1}), std::invalid_argument);
  EXPECT_EQ(IndexSet::from_mask(0b1011).indices(), (std::vector<int>{0, 1, 3}));
}
