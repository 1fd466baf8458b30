#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "bumpforest/point_process.hpp"

using namespace bumpforest;

namespace {

// Pearson goodness of fit of observed counts per value against Poisson(mean).
// Bins with small expectation are pooled into the upper tail.
double poisson_gof_pvalue(const std::vector<std::uint64_t>& observed, double mean) {
  const boost::math::poisson_distribution<> law(mean);
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  double stat = 0;
  int bins = 0;
  double tail_obs = static_cast<double>(total);
  double tail_exp = static_cast<double>(total);
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = total * boost::math::pdf(law, static_cast<double>(k));
    if (expected < 20 || tail_exp - expected < 20) break;
    stat += std::pow(observed[k] - expected, 2) / expected;
    tail_obs -= static_cast<double>(observed[k]);
    tail_exp -= expected;
    ++bins;
  }
  stat += std::pow(tail_obs - tail_exp, 2) / tail_exp;
  ++bins;
  const boost::math::chi_squared_distribution<> chi(bins - 1);
  return boost::math::cdf(boost::math::complement(chi, stat));
}

void tally(std::vector<std::uint64_t>& hist, std::size_t k) {
  if (hist.size() <= k) hist.resize(k + 1, 0);
  ++hist[k];
}

}  // namespace

TEST(RngStream, ReproducibleAndDistinct) {
  const RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  EXPECT_EQ(a.engine()(), b.engine()());
  EXPECT_NE(a.engine()(), c.engine()());
  EXPECT_NE(a.engine()(), d.engine()());
  EXPECT_NE(a.engine(0)(), a.engine(1)());
  EXPECT_EQ(a.child(3).engine()(), b.child(3).engine()());
  EXPECT_NE(a.child(3).engine()(), a.child(4).engine()());
}

TEST(Uniform, OpenAtZeroClosedAtOne) {
  auto e = RngStream(1, 0).engine();
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open_closed(e);
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(Uniform, BelowIsUnbiased) {
  auto e = RngStream(2, 0).engine();
  std::vector<std::uint64_t> hist(7, 0);
  const int n = 700000;
  for (int i = 0; i < n; ++i) ++hist[uniform_below(e, 7)];
  double stat = 0;
  for (auto h : hist) stat += std::pow(h - n / 7.0, 2) / (n / 7.0);
  const boost::math::chi_squared_distribution<> chi(6);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, stat)), 0.01);
}

TEST(SampleLayer, RejectsBadAlpha) {
  auto e = RngStream(1, 0).engine();
  EXPECT_THROW(sample_layer(0.0, e), std::invalid_argument);
  EXPECT_THROW(sample_layer(1.5, e), std::invalid_argument);
  EXPECT_THROW(sample_layer(-0.1, e), std::invalid_argument);
}

TEST(SampleLayer, SortedInUnitInterval) {
  auto e = RngStream(3, 0).engine();
  for (int i = 0; i < 10000; ++i) {
    const auto layer = sample_layer(1.0, e);
    ASSERT_TRUE(std::is_sorted(layer.begin(), layer.end()));
    for (double x : layer) {
      ASSERT_GT(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
  }
}

TEST(SampleLayer, MeanCountAtHalf) {
  auto e = RngStream(4, 0).engine();
  const int n = 1000000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_layer(0.5, e).size());
  EXPECT_NEAR(sum / n, 0.5, 0.003);
}

TEST(SampleLayer, EmptyProbabilityAtOne) {
  auto e = RngStream(5, 0).engine();
  const int n = 1000000;
  int empty = 0;
  for (int i = 0; i < n; ++i) empty += sample_layer(1.0, e).empty();
  EXPECT_NEAR(static_cast<double>(empty) / n, std::exp(-1.0), 0.002);
}

TEST(SampleLayer, LocationsUniform) {
  auto e = RngStream(6, 0).engine();
  std::vector<std::uint64_t> hist(10, 0);
  std::uint64_t total = 0;
  for (int i = 0; i < 200000; ++i) {
    for (double x : sample_layer(1.0, e)) {
      ++hist[std::min<std::size_t>(9, static_cast<std::size_t>(x * 10))];
      ++total;
    }
  }
  double stat = 0;
  for (auto h : hist) stat += std::pow(h - total / 10.0, 2) / (total / 10.0);
  const boost::math::chi_squared_distribution<> chi(9);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, stat)), 0.01);
}

TEST(Superposition, TwoHalfLayersArePoissonOne) {
  auto e = RngStream(7, 0).engine();
  std::vector<std::uint64_t> hist;
  for (int i = 0; i < 1000000; ++i) {
    tally(hist, sample_layer(0.5, e).size() + sample_layer(0.5, e).size());
  }
  EXPECT_GT(poisson_gof_pvalue(hist, 1.0), 0.01);
}

TEST(Splitting, RelabeledMergedLayersAreIndependentPoisson) {
  constexpr int kLabels = 3;
  constexpr double kAlpha = 0.4;
  auto e = RngStream(8, 0).engine();
  std::vector<std::vector<std::uint64_t>> hist(kLabels);
  std::vector<std::uint64_t> joint_zero(2, 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    std::size_t merged = 0;
    for (int k = 0; k < kLabels; ++k) merged += sample_layer(kAlpha, e).size();
    std::vector<std::size_t> counts(kLabels, 0);
    for (std::size_t a = 0; a < merged; ++a) ++counts[uniform_below(e, kLabels)];
    for (int k = 0; k < kLabels; ++k) tally(hist[k], counts[k]);
    ++joint_zero[counts[0] == 0 && counts[1] == 0];
  }
  for (int k = 0; k < kLabels; ++k) EXPECT_GT(poisson_gof_pvalue(hist[k], kAlpha), 0.01) << k;
  // Independence: P(N_0 = 0, N_1 = 0) = e^(-2 alpha).
  const double p = std::exp(-2 * kAlpha);
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(joint_zero[1]) / n, p, 4 * se);
}

TEST(Configuration, ValidatesAtoms) {
  EXPECT_THROW(Configuration(0.5, 2, {{0.0, 0}}), std::invalid_argument);
  EXPECT_THROW(Configuration(0.5, 2, {{1.5, 0}}), std::invalid_argument);
  EXPECT_THROW(Configuration(0.5, 2, {{0.5, 2}}), std::invalid_argument);
  EXPECT_THROW(Configuration(0.5, 2, {{0.5, -1}}), std::invalid_argument);
  EXPECT_THROW(Configuration(0.5, 2, {{0.5, 0}, {0.5, 1}}), std::invalid_argument);
  EXPECT_THROW(Configuration(0.0, 2, {}), std::invalid_argument);
}

TEST(Configuration, SortsAndCounts) {
  const Configuration c(0.5, 3, {{0.7, 0}, {0.2, 2}, {0.4, 0}});
  EXPECT_DOUBLE_EQ(c.atoms()[0].location, 0.2);
  EXPECT_DOUBLE_EQ(c.atoms()[2].location, 0.7);
  EXPECT_EQ(c.count_in_layer(0), 2u);
  EXPECT_EQ(c.count_in_layer(1), 0u);
  EXPECT_EQ(c.count_in_layer(2), 1u);
}

TEST(Configuration, JsonRoundTrip) {
  const Configuration c(0.25, 3, {{0.125, 1}, {0.5, 0}, {1.0, 2}});
  const auto j = c.to_json();
  EXPECT_EQ(j["alpha"], 0.25);
  EXPECT_EQ(j["sampled_depth"], 3);
  EXPECT_EQ(j["atoms"][0][0], 0.125);
  EXPECT_EQ(j["atoms"][0][1], 1);
  EXPECT_EQ(Configuration::from_json(j), c);
}

TEST(ExtendDepth, OnlyNewLayers) {
  const RngStream rng(11, 0);
  const auto c = extend_depth(empty_configuration(0.9), 3, rng);
  EXPECT_EQ(c.sampled_depth(), 3);
  for (const auto& a : c.atoms()) EXPECT_LT(a.layer, 3);
  const auto d = extend_depth(c, 5, rng);
  for (const auto& a : c.atoms()) {
    EXPECT_NE(std::find(d.atoms().begin(), d.atoms().end(), a), d.atoms().end());
  }
}

TEST(ExtendDepth, StepwiseEqualsDirect) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const RngStream rng(12, s);
    const auto direct = extend_depth(empty_configuration(0.7), 4, rng);
    const auto stepwise = extend_depth(extend_depth(empty_configuration(0.7), 2, rng), 4, rng);
    EXPECT_EQ(direct, stepwise);
  }
}

TEST(ExtendDepth, RejectsShrinking) {
  const RngStream rng(13, 0);
  const auto c = extend_depth(empty_configuration(0.5), 3, rng);
  EXPECT_THROW(extend_depth(c, 3, rng), std::invalid_argument);
  EXPECT_THROW(extend_depth(c, 2, rng), std::invalid_argument);
}

TEST(ExtendDepth, AtomCountIsPoissonAdditive) {
  const RngStream rng(14, 0);
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    sum += static_cast<double>(extend_depth(empty_configuration(0.3), 10, rng.child(i)).size());
  }
  EXPECT_NEAR(sum / n, 3.0, 0.05);
}

TEST(ExtendDepth, DeterministicForSameStream) {
  EXPECT_EQ(sample_configuration(0.6, 5, RngStream(15, 3)), sample_configuration(0.6, 5, RngStream(15, 3)));
}

TEST(Bump, DropsLeftShiftsRight) {
  const Configuration c(0.5, 3, {{0.3, 1}, {0.5, 0}, {0.7, 0}});
  const auto b = bump(c, {0.5, 0});
  EXPECT_EQ(b.atoms(), (std::vector<Atom>{{0.3, 0}, {0.7, 0}}));
  EXPECT_EQ(b.sampled_depth(), 2);
}

TEST(Bump, LeftZeroFallsOff) {
  const Configuration c(0.5, 2, {{0.2, 0}, {0.5, 0}});
  EXPECT_TRUE(bump(c, {0.5, 0}).atoms().empty());
}

TEST(Bump, LowersEverythingLeftOfTheAtom) {
  const Configuration c(0.5, 4, {{0.1, 3}, {0.2, 1}, {0.4, 0}, {0.6, 2}, {0.8, 0}, {0.9, 1}});
  const auto b = bump(c, {0.8, 0});
  EXPECT_EQ(b.atoms(), (std::vector<Atom>{{0.1, 2}, {0.2, 0}, {0.6, 1}, {0.9, 1}}));
}

TEST(Bump, RejectsNonZeroOrMissing) {
  const Configuration c(0.5, 2, {{0.3, 1}, {0.5, 0}});
  EXPECT_THROW(bump(c, {0.3, 1}), std::invalid_argument);
  EXPECT_THROW(bump(c, {0.4, 0}), std::invalid_argument);
}

TEST(Bump, NeverRaisesLayersOrReorders) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto c = sample_configuration(0.8, 4, RngStream(16, s));
    for (const auto& x : c.atoms()) {
      if (x.layer != 0) continue;
      const auto b = bump(c, x);
      EXPECT_EQ(b.sampled_depth(), c.sampled_depth() - 1);
      for (const auto& a : b.atoms()) {
        const auto it = std::find_if(c.atoms().begin(), c.atoms().end(),
                                     [&](const Atom& o) { return o.location == a.location; });
        ASSERT_NE(it, c.atoms().end());
        EXPECT_LE(a.layer, it->layer);
        EXPECT_LT(a.layer, b.sampled_depth());
      }
    }
  }
}
