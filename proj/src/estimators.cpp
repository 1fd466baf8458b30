#include "bumpforest/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "bumpforest/perm_forest.hpp"
#include "bumpforest/tree_shape.hpp"

namespace bumpforest {
namespace {

void check_alpha_closed(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(begin, end, acc) over fixed blocks of kTrialBlock trials and merges
// the per-block accumulators in block order.
template <class Acc, class Fn>
Acc run_blocks(std::uint64_t trials, unsigned workers, Fn&& fn) {
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Acc> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (auto b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      const auto begin = b * kTrialBlock;
      fn(begin, std::min(trials, begin + kTrialBlock), partial[b]);
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(blocks, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  Acc total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

struct BumpAcc {
  StreamStats size, leaves, size_sq;

  void merge(const BumpAcc& o) {
    size.merge(o.size);
    leaves.merge(o.leaves);
    size_sq.merge(o.size_sq);
  }
};

struct GwAcc {
  StreamStats size, size_sq;

  void merge(const GwAcc& o) {
    size.merge(o.size);
    size_sq.merge(o.size_sq);
  }
};

TreeCaps summary_caps(TreeCaps caps) {
  caps.record_nodes = false;
  return caps;
}

StatisticRow make_row(std::string name, const StreamStats& s, std::optional<Analytic> analytic) {
  return {std::move(name), s.mean(), s.standard_error(), analytic};
}

double poisson_pmf(double mean, int k) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

}  // namespace

std::string Analytic::to_string() const {
  if (divergent) return "divergent";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Analytic expected_size(double alpha) {
  check_alpha_closed(alpha);
  if (alpha == 1.0) return Analytic::diverges();
  return Analytic::finite(1.0 / (1.0 - alpha));
}

Analytic expected_leaves(double alpha) {
  check_alpha_closed(alpha);
  if (alpha == 1.0) return Analytic::diverges();
  return Analytic::finite(std::exp(-alpha) / (1.0 - alpha));
}

double finite_second_moment_threshold() { return (3.0 - std::sqrt(5.0)) / 2.0; }
double divergent_second_moment_threshold() { return (std::sqrt(5.0) - 1.0) / 2.0; }

SecondMomentBounds second_moment_bounds(double alpha, double rel_tol) {
  check_alpha_closed(alpha);
  SecondMomentBounds out;
  const double q = 1.0 - alpha;

  const double upper_ratio = alpha < 1.0 ? alpha / (q * q) : INFINITY;
  out.upper = upper_ratio < 1.0 ? Analytic::finite(1.0 / (q * q) / (1.0 - upper_ratio))
                                : Analytic::diverges();

  // Summing c and then b > a exactly leaves
  // alpha / (1 - alpha)^2 * sum_a rho^a with rho = alpha^2 / (1 - alpha).
  const double rho = alpha < 1.0 ? alpha * alpha / q : INFINITY;
  if (rho >= 1.0) {
    out.lower = Analytic::diverges();
    return out;
  }
  const double scale = alpha / (q * q);
  double partial = 0.0;
  double term = scale;
  int terms = 0;
  double tail = 0.0;
  while (true) {
    partial += term;
    ++terms;
    term *= rho;
    tail = term / (1.0 - rho);
    if (tail < rel_tol * partial || terms > 100000) break;
  }
  out.lower = Analytic::finite(partial);
  out.lower_terms = terms;
  out.lower_tail_bound = tail;
  return out;
}

GwMoments gw_moments(double alpha) {
  check_alpha_open(alpha);
  // Squaring Y = 1 + Y_1 + ... + Y_X gives
  // E[Y^2] = 1 + 2 E[X] E[Y] + E[X] E[Y^2] + E[X^2 - X] E[Y]^2, so
  // E[Y^2] = 1/(1-m)^2 + Var(X)/(1-m)^3 with Var(X) = alpha.
  const double q = 1.0 - alpha;
  return {1.0 / q, 1.0 / (q * q) + alpha / (q * q * q)};
}

const StatisticRow& EstimateReport::row(const std::string& statistic) const {
  for (const auto& r : rows) {
    if (r.statistic == statistic) return r;
  }
  throw std::out_of_range("no statistic " + statistic);
}

std::string EstimateReport::csv_header() {
  return "alpha,statistic,estimate,se,analytic,trials,truncation_rate,seed";
}

std::string EstimateReport::to_csv_rows() const {
  std::string out;
  for (const auto& r : rows) {
    out += format_number(alpha) + ',' + r.statistic + ',' + format_number(r.estimate) + ',' +
           format_number(r.se) + ',' + (r.analytic ? r.analytic->to_string() : std::string{}) + ',' +
           std::to_string(trials) + ',' + format_number(truncation_rate) + ',' +
           std::to_string(seed) + '\n';
  }
  return out;
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"statistic", r.statistic}, {"estimate", r.estimate}, {"se", r.se}};
    if (r.analytic) {
      row["analytic"] = r.analytic->divergent ? nlohmann::json("divergent")
                                              : nlohmann::json(r.analytic->value);
    } else {
      row["analytic"] = nullptr;
    }
    stats.push_back(std::move(row));
  }
  return {{"model", model},         {"alpha", alpha},
          {"trials", trials},       {"seed", seed},
          {"workers", workers},     {"truncated", truncated},
          {"truncation_rate", truncation_rate},
          {"unreliable", unreliable}, {"statistics", std::move(stats)}};
}

EstimateReport simulate_gw(double alpha, std::uint64_t trials, const RngStream& rng,
                           const SimulationOptions& options) {
  check_alpha_open(alpha);
  const auto max_nodes = options.caps.max_nodes;
  const unsigned workers = resolve_workers(options.workers);
  auto acc = run_blocks<GwAcc>(trials, workers, [&](std::uint64_t begin, std::uint64_t end, GwAcc& a) {
    for (auto t = begin; t < end; ++t) {
      auto engine = rng.child(t).engine();
      std::uint64_t size = 1;
      std::uint64_t pending = 1;
      bool truncated = false;
      while (pending > 0) {
        --pending;
        const auto kids = static_cast<std::uint64_t>(sample_poisson(engine, alpha));
        size += kids;
        pending += kids;
        if (size >= max_nodes && pending > 0) {
          truncated = true;
          break;
        }
      }
      if (truncated) {
        a.size.add_truncated();
        continue;
      }
      const double d = static_cast<double>(size);
      a.size.add(d);
      a.size_sq.add(d * d);
    }
  });

  EstimateReport report;
  report.model = "galton-watson";
  report.alpha = alpha;
  report.trials = trials;
  report.seed = rng.seed();
  report.workers = workers;
  report.truncated = acc.size.truncated();
  report.truncation_rate = trials ? static_cast<double>(report.truncated) / trials : 0.0;
  report.unreliable = report.truncation_rate > options.unreliable_threshold;
  const auto m = gw_moments(alpha);
  report.rows.push_back(make_row("gw_size", acc.size, Analytic::finite(m.mean)));
  report.rows.push_back(make_row("gw_size_sq", acc.size_sq, Analytic::finite(m.second_moment)));
  return report;
}

EstimateReport estimate_bump_moments(double alpha, std::uint64_t trials, const RngStream& rng,
                                     const SimulationOptions& options) {
  check_alpha_closed(alpha);
  const auto caps = summary_caps(options.caps);
  const unsigned workers = resolve_workers(options.workers);
  const auto empty = empty_configuration(alpha);
  auto acc = run_blocks<BumpAcc>(trials, workers, [&](std::uint64_t begin, std::uint64_t end, BumpAcc& a) {
    for (auto t = begin; t < end; ++t) {
      const auto result = tree_of_config(empty, rng.child(t), caps);
      if (result.tree.truncated()) {
        a.size.add_truncated();
        continue;
      }
      const double d = static_cast<double>(result.tree.size);
      a.size.add(d);
      a.leaves.add(static_cast<double>(result.tree.leaves));
      a.size_sq.add(d * d);
    }
  });

  EstimateReport report;
  report.model = "bump";
  report.alpha = alpha;
  report.trials = trials;
  report.seed = rng.seed();
  report.workers = workers;
  report.truncated = acc.size.truncated();
  report.truncation_rate = trials ? static_cast<double>(report.truncated) / trials : 0.0;
  report.unreliable = report.truncation_rate > options.unreliable_threshold;
  report.rows.push_back(make_row("size", acc.size, expected_size(alpha)));
  report.rows.push_back(make_row("leaves", acc.leaves, expected_leaves(alpha)));
  report.rows.push_back(make_row("size_sq", acc.size_sq, second_moment_bounds(alpha).upper));
  return report;
}

SizeSample sample_bump_sizes(double alpha, std::uint64_t trials, const RngStream& rng,
                             const SimulationOptions& options) {
  check_alpha_closed(alpha);
  const auto caps = summary_caps(options.caps);
  const auto empty = empty_configuration(alpha);
  SizeSample out;
  out.sizes.resize(trials);
  out.truncated.resize(trials);
  std::vector<char> flags(trials, 0);

  struct Count {
    std::uint64_t truncated = 0;
    void merge(const Count& o) { truncated += o.truncated; }
  };
  const auto total = run_blocks<Count>(
      trials, resolve_workers(options.workers), [&](std::uint64_t begin, std::uint64_t end, Count& c) {
        for (auto t = begin; t < end; ++t) {
          const auto result = tree_of_config(empty, rng.child(t), caps);
          out.sizes[t] = static_cast<double>(result.tree.size);
          flags[t] = result.tree.truncated() ? 1 : 0;
          c.truncated += flags[t];
        }
      });
  for (std::uint64_t t = 0; t < trials; ++t) out.truncated[t] = flags[t] != 0;
  out.truncated_count = total.truncated;
  return out;
}

double hill_estimate(std::vector<double> sample, std::size_t k) {
  if (k < 1 || k >= sample.size()) {
    throw std::invalid_argument("hill_estimate: need 1 <= k < sample size");
  }
  std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(k), sample.end(),
                   std::greater<>());
  const double threshold = sample[k];
  if (!(threshold > 0.0)) throw std::invalid_argument("hill_estimate: threshold must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(sample[i] / threshold);
  return sum > 0.0 ? static_cast<double>(k) / sum : INFINITY;
}

nlohmann::json TailReport::to_json() const {
  nlohmann::json surv = nlohmann::json::array();
  for (const auto& [x, p] : survival) surv.push_back({x, p});
  return {{"alpha", alpha},   {"trials", trials},         {"truncated", truncated},
          {"hill_k", hill_k}, {"hill_index", hill_index}, {"survival", std::move(surv)}};
}

TailReport tail_diagnostic(double alpha, std::uint64_t trials, const RngStream& rng,
                           const SimulationOptions& options, std::size_t hill_k) {
  if (trials < 2) throw std::invalid_argument("tail_diagnostic needs at least two trials");
  auto sample = sample_bump_sizes(alpha, trials, rng, options);
  TailReport report;
  report.alpha = alpha;
  report.trials = trials;
  report.truncated = sample.truncated_count;
  report.hill_k = hill_k != 0 ? hill_k
                              : std::max<std::size_t>(10, static_cast<std::size_t>(trials / 100));
  report.hill_k = std::min<std::size_t>(report.hill_k, trials - 1);

  std::vector<double> sorted = sample.sizes;
  std::sort(sorted.begin(), sorted.end());
  for (double x = 1.0; x <= sorted.back(); x *= 2.0) {
    const auto at_least = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x);
    report.survival.emplace_back(x, static_cast<double>(at_least) / static_cast<double>(trials));
  }
  report.hill_index = hill_estimate(std::move(sample.sizes), report.hill_k);
  return report;
}

DivergenceProbe divergence_probe(double alpha, const std::vector<double>& bounds,
                                 std::uint64_t max_trials, const RngStream& rng,
                                 const TreeCaps& caps) {
  check_alpha_closed(alpha);
  DivergenceProbe probe;
  probe.alpha = alpha;
  for (double b : bounds) probe.crossings.emplace_back(b, std::nullopt);
  const auto empty = empty_configuration(alpha);
  const auto tree_caps = summary_caps(caps);
  double sum = 0.0;
  std::size_t open = bounds.size();
  for (std::uint64_t t = 0; t < max_trials && open > 0; ++t) {
    const auto result = tree_of_config(empty, rng.child(t), tree_caps);
    if (result.tree.truncated()) ++probe.truncated;
    sum += static_cast<double>(result.tree.size);
    probe.trials_run = t + 1;
    const double mean = sum / static_cast<double>(t + 1);
    for (auto& [bound, when] : probe.crossings) {
      if (!when && mean > bound) {
        when = t + 1;
        --open;
      }
    }
  }
  probe.final_mean = probe.trials_run ? sum / static_cast<double>(probe.trials_run) : 0.0;
  return probe;
}

double ShapeDistribution::probability(const std::string& shape) const {
  const auto it = counts.find(shape);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

ShapeDistribution sample_permutation_neighborhoods(int n, int r, std::uint64_t trials,
                                                   const RngStream& rng) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
  if (r < 0) throw std::invalid_argument("radius must be >= 0");
  ShapeDistribution dist;
  std::vector<int> values(n);
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto engine = rng.child(t).engine();
    std::iota(values.begin(), values.end(), 1);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(uniform_below(engine, static_cast<std::uint64_t>(i) + 1));
      std::swap(values[i], values[j]);
    }
    const auto tree = desc_tree(Permutation(values), kDefaultDescMaxNodes, r);
    ++dist.counts[canonical_form(tree.parents(), r)];
    ++dist.total;
  }
  return dist;
}

ShapeDistribution sample_limit_neighborhoods(double alpha, int r, std::uint64_t trials,
                                             const RngStream& rng) {
  check_alpha_closed(alpha);
  if (r < 0) throw std::invalid_argument("radius must be >= 0");
  ShapeDistribution dist;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto config = sample_configuration(alpha, r, rng.child(t));
    const auto tree = neighborhood_of_config(config, r);
    ++dist.counts[canonical_form(tree.parents(), r)];
    ++dist.total;
  }
  return dist;
}

TvDistance tv_distance(const ShapeDistribution& a, const ShapeDistribution& b) {
  if (a.total == 0 || b.total == 0) throw std::invalid_argument("tv_distance: empty distribution");
  std::vector<std::string> keys;
  for (const auto& [k, _] : a.counts) keys.push_back(k);
  for (const auto& [k, _] : b.counts) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  // TV = 1/2 sum_h s_h (p_h - q_h) with s_h = sign(p_h - q_h); the delta
  // method treats s as fixed, so each side contributes Var(s(X)) / N.
  double tv = 0.0, mean_a = 0.0, mean_b = 0.0, mass_a = 0.0, mass_b = 0.0;
  for (const auto& k : keys) {
    const double p = a.probability(k);
    const double q = b.probability(k);
    const double s = p > q ? 1.0 : (p < q ? -1.0 : 0.0);
    tv += std::abs(p - q);
    mean_a += s * p;
    mean_b += s * q;
    mass_a += s * s * p;
    mass_b += s * s * q;
  }
  const double var = 0.25 * ((mass_a - mean_a * mean_a) / static_cast<double>(a.total) +
                             (mass_b - mean_b * mean_b) / static_cast<double>(b.total));
  return {0.5 * tv, std::sqrt(std::max(0.0, var))};
}

nlohmann::json LocalLimitReport::to_json() const {
  nlohmann::json shapes = nlohmann::json::array();
  std::vector<std::string> keys;
  for (const auto& [k, _] : permutation.counts) keys.push_back(k);
  for (const auto& [k, _] : limit.counts) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const auto& k : keys) {
    shapes.push_back({{"shape", k},
                      {"permutation", permutation.probability(k)},
                      {"limit", limit.probability(k)}});
  }
  return {{"n", n},           {"r", r},         {"trials", trials}, {"tv", tv.distance},
          {"tv_se", tv.se}, {"shapes", std::move(shapes)}};
}

LocalLimitReport local_limit_check(int n, int r, std::uint64_t trials, const RngStream& rng) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
  if (r < 0 || r > 4) throw std::invalid_argument("radius must lie in [0, 4]");
  if (trials == 0) throw std::invalid_argument("local_limit_check needs trials > 0");
  LocalLimitReport report;
  report.n = n;
  report.r = r;
  report.trials = trials;
  report.permutation = sample_permutation_neighborhoods(n, r, trials, rng.child(0));
  report.limit = sample_limit_neighborhoods(1.0, r, trials, rng.child(1));
  report.tv = tv_distance(report.permutation, report.limit);
  return report;
}

double poisson_upper_tail(double mean, int k) {
  if (mean < 0) throw std::invalid_argument("poisson_upper_tail: negative mean");
  if (k < 0) return 1.0;
  if (mean == 0.0) return 0.0;
  // Sum the pmf upward from k + 1; terms decay factorially past the mean.
  double total = 0.0;
  double term = poisson_pmf(mean, k + 1);
  for (int i = k + 1; i < k + 1000; ++i) {
    total += term;
    term *= mean / static_cast<double>(i + 1);
    if (i > mean && term < total * 1e-18) break;
  }
  return total;
}

nlohmann::json DepthTable::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j{{"j", row.j},
                     {"size_partial", row.size_partial},
                     {"size_target", row.size_target},
                     {"size_tail", row.size_tail}};
    if (row.leaves_partial) {
      j["leaves_partial"] = *row.leaves_partial;
      j["leaves_target"] = row.leaves_target;
      j["leaves_tail"] = row.leaves_tail;
    }
    list.push_back(std::move(j));
  }
  return {{"alpha", alpha}, {"r", r}, {"n_max", n_max}, {"rows", std::move(list)}};
}

DepthTable exact_depth_expectations(double alpha, int r, int n_max) {
  check_alpha_closed(alpha);
  if (r < 1 || r > kMaxExactAlphabet) throw std::invalid_argument("r must lie in [1, 4]");
  if (n_max < 0 || n_max > kMaxExactLength) throw std::invalid_argument("n_max must lie in [0, 9]");

  DepthTable table;
  table.alpha = alpha;
  table.r = r;
  table.n_max = n_max;
  std::vector<double> size_sum(r + 1, 0.0), leaf_sum(r, 0.0);
  TreeCaps caps;
  caps.record_nodes = false;

  for (int n = 0; n <= n_max; ++n) {
    // Integer counts per length, weighted once: P(W = w) = e^(-alpha r) alpha^n / n!.
    std::vector<std::uint64_t> size_count(r + 1, 0), leaf_count(r, 0);
    std::vector<int> letters(n, 0);
    while (true) {
      const auto tree = tree_of_word(Word(letters, r), caps);
      for (int j = 0; j <= r && j < static_cast<int>(tree.per_depth.size()); ++j) {
        size_count[j] += tree.per_depth[j];
      }
      for (int j = 0; j < r && j < static_cast<int>(tree.leaves_per_depth.size()); ++j) {
        leaf_count[j] += tree.leaves_per_depth[j];
      }
      int k = 0;
      while (k < n && ++letters[k] == r) letters[k++] = 0;
      if (k == n) break;
    }
    const double weight = std::exp(-alpha * r + n * std::log(alpha) - std::lgamma(n + 1.0));
    for (int j = 0; j <= r; ++j) size_sum[j] += weight * static_cast<double>(size_count[j]);
    for (int j = 0; j < r; ++j) leaf_sum[j] += weight * static_cast<double>(leaf_count[j]);
  }

  for (int j = 0; j <= r; ++j) {
    DepthExpectation row;
    row.j = j;
    row.size_partial = size_sum[j];
    row.size_target = std::pow(alpha, j);
    row.size_tail = row.size_target * poisson_upper_tail(alpha * r, n_max - j);
    row.leaves_target = std::exp(-alpha) * std::pow(alpha, j);
    if (j < r) {
      row.leaves_partial = leaf_sum[j];
      row.leaves_tail = row.leaves_target * poisson_upper_tail(alpha * (r - 1), n_max - j);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bumpforest
