#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bumpforest/bump_tree.hpp"
#include "bumpforest/point_process.hpp"
#include "bumpforest/stream_stats.hpp"

namespace bumpforest {

/// A closed-form value that may be infinite.
struct Analytic {
  double value = 0.0;
  bool divergent = false;

  static Analytic finite(double v) { return {v, false}; }
  static Analytic diverges() { return {0.0, true}; }

  /// "divergent" or the value with 17 significant digits.
  std::string to_string() const;
};

/// E[D] = 1 / (1 - alpha); divergent at alpha = 1.
/// Throws std::invalid_argument outside (0, 1].
Analytic expected_size(double alpha);

/// E[U] = e^-alpha / (1 - alpha); divergent at alpha = 1.
Analytic expected_leaves(double alpha);

struct SecondMomentBounds {
  Analytic lower;
  Analytic upper;
  int lower_terms = 0;          // series terms summed for the lower bound
  double lower_tail_bound = 0;  // bound on the omitted remainder
};

/// Bounds on E[D^2] from the double-completeness counting.
///
/// upper: (1-a)^-2 * sum_c (a/(1-a)^2)^c, finite iff a/(1-a)^2 < 1.
/// lower: sum over 0 <= a < b, c >= 0 of C(a+c, a) alpha^(a+b+c), finite iff
/// alpha^2/(1-alpha) < 1. The c and b sums are geometric and taken exactly;
/// the remaining series is truncated once its geometric tail drops below
/// rel_tol of the partial sum.
SecondMomentBounds second_moment_bounds(double alpha, double rel_tol = 1e-9);

/// (3 - sqrt 5)/2 and (sqrt 5 - 1)/2.
double finite_second_moment_threshold();
double divergent_second_moment_threshold();

struct GwMoments {
  double mean;
  double second_moment;
};

/// Size moments of a Galton-Watson tree with Poisson(alpha) offspring.
/// Throws std::invalid_argument unless 0 < alpha < 1.
GwMoments gw_moments(double alpha);

struct SimulationOptions {
  TreeCaps caps{kDefaultMaxDepth, kDefaultMaxNodes, false};
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Estimates are flagged unreliable above this truncation rate.
  double unreliable_threshold = 1e-4;
};

/// Trials are cut into blocks of this many; blocks are merged in index
/// order, so results do not depend on the worker count.
inline constexpr std::uint64_t kTrialBlock = 8192;

struct StatisticRow {
  std::string statistic;
  double estimate = 0;
  double se = 0;
  std::optional<Analytic> analytic;
};

struct EstimateReport {
  std::string model;  // "bump" or "galton-watson"
  double alpha = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t truncated = 0;
  double truncation_rate = 0;
  bool unreliable = false;
  std::vector<StatisticRow> rows;

  const StatisticRow& row(const std::string& statistic) const;

  nlohmann::json to_json() const;
  /// One line per row, columns as in csv_header().
  std::string to_csv_rows() const;
  static std::string csv_header();
};

/// Galton-Watson trees with Poisson(alpha) offspring. Rows: size, size_sq.
/// Trial t draws from rng.child(t). A tree reaching caps.max_nodes is
/// counted as truncated and left out of the moments.
EstimateReport simulate_gw(double alpha, std::uint64_t trials, const RngStream& rng,
                           const SimulationOptions& options = {});

/// Bump trees of Poisson(alpha) configurations. Rows: size, leaves, size_sq.
/// Analytic columns carry E[D], E[U] and the E[D^2] upper bound.
/// Truncated samples are excluded from the moments and counted.
EstimateReport estimate_bump_moments(double alpha, std::uint64_t trials, const RngStream& rng,
                                     const SimulationOptions& options = {});

/// Sizes of independent bump trees in trial order. Truncated trees report
/// the node count reached, which is a lower bound on D.
struct SizeSample {
  std::vector<double> sizes;
  std::vector<bool> truncated;
  std::uint64_t truncated_count = 0;
};
SizeSample sample_bump_sizes(double alpha, std::uint64_t trials, const RngStream& rng,
                             const SimulationOptions& options = {});

/// Hill estimator of the tail index from the top k order statistics.
/// Throws std::invalid_argument unless 1 <= k < sample size.
double hill_estimate(std::vector<double> sample, std::size_t k);

struct TailReport {
  double alpha = 0;
  std::uint64_t trials = 0;
  std::uint64_t truncated = 0;
  std::size_t hill_k = 0;
  double hill_index = 0;
  /// (x, P(D >= x)) for x = 1, 2, 4, ...
  std::vector<std::pair<double, double>> survival;

  nlohmann::json to_json() const;
};

/// Empirical survival function of D on a doubling grid and the Hill index
/// over the top hill_k sizes (default: top 1%, at least 10).
TailReport tail_diagnostic(double alpha, std::uint64_t trials, const RngStream& rng,
                           const SimulationOptions& options = {}, std::size_t hill_k = 0);

/// Running mean of D at intensity alpha, checked against growing bounds.
struct DivergenceProbe {
  double alpha = 1;
  std::uint64_t trials_run = 0;
  std::uint64_t truncated = 0;
  /// For each bound B, the first trial count at which the running mean
  /// exceeded B, if it did.
  std::vector<std::pair<double, std::optional<std::uint64_t>>> crossings;
  double final_mean = 0;
};
DivergenceProbe divergence_probe(double alpha, const std::vector<double>& bounds,
                                 std::uint64_t max_trials, const RngStream& rng,
                                 const TreeCaps& caps = {kDefaultMaxDepth, kDefaultMaxNodes, false});

/// Empirical distribution of rooted-tree shapes keyed by canonical form.
struct ShapeDistribution {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  double probability(const std::string& shape) const;
};

/// r-neighborhoods of desc(pi) for uniform random permutations of size n.
ShapeDistribution sample_permutation_neighborhoods(int n, int r, std::uint64_t trials,
                                                   const RngStream& rng);

/// gamma_r(xi) for Poisson(alpha) configurations.
ShapeDistribution sample_limit_neighborhoods(double alpha, int r, std::uint64_t trials,
                                             const RngStream& rng);

struct TvDistance {
  double distance = 0;
  /// Delta-method standard error of the plug-in estimate.
  double se = 0;
};
TvDistance tv_distance(const ShapeDistribution& a, const ShapeDistribution& b);

struct LocalLimitReport {
  int n = 0;
  int r = 0;
  std::uint64_t trials = 0;
  TvDistance tv;
  ShapeDistribution permutation;
  ShapeDistribution limit;

  nlohmann::json to_json() const;
};

/// Compare r-neighborhoods of desc(pi_n) against gamma_r(xi) at alpha = 1.
/// Permutations use rng.child(0), limit configurations rng.child(1).
/// Throws std::invalid_argument unless n >= 1 and 0 <= r <= 4.
LocalLimitReport local_limit_check(int n, int r, std::uint64_t trials, const RngStream& rng);

struct DepthExpectation {
  int j = 0;
  double size_partial = 0;   // sum over words of length <= n_max of P(w) D_j(w)
  double size_target = 0;    // alpha^j
  double size_tail = 0;      // remainder beyond n_max
  std::optional<double> leaves_partial;  // only for j < r
  double leaves_target = 0;  // e^-alpha alpha^j
  double leaves_tail = 0;
};

struct DepthTable {
  double alpha = 0;
  int r = 0;
  int n_max = 0;
  std::vector<DepthExpectation> rows;  // j = 0..r

  nlohmann::json to_json() const;
};

inline constexpr int kMaxExactAlphabet = 4;
inline constexpr int kMaxExactLength = 9;

/// Exact E[D_j^(r)] and E[U_j^(r)] partial sums over all words of length
/// <= n_max, weighted by P(W = w) = e^(-alpha r) alpha^n / n!. The tails
/// are the exact Poisson remainders beyond n_max.
/// Throws std::invalid_argument unless 1 <= r <= 4 and 0 <= n_max <= 9.
DepthTable exact_depth_expectations(double alpha, int r, int n_max);

/// P(Poisson(mean) > k).
double poisson_upper_tail(double mean, int k);

}  // namespace bumpforest
