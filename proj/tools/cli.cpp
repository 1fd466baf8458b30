#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bumpforest/bump_tree.hpp"
#include "bumpforest/estimators.hpp"
#include "bumpforest/perm_forest.hpp"
#include "bumpforest/verify.hpp"

namespace bumpforest::cli {
namespace {

constexpr std::uint64_t kFallbackSeed = 20190101;

struct RunConfig {
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = kFallbackSeed;
  unsigned workers = 0;
  int max_depth = kDefaultMaxDepth;
  std::uint64_t max_nodes = kDefaultMaxNodes;
  std::uint64_t trials = 100000;

  int n = 5;
  int max_n = kDefaultForestMaxN;
  std::string perm;
  std::vector<double> alphas{0.5};
  std::vector<std::string> stats{"size", "leaves", "size_sq"};
  std::string suite;
  VerifyBudget budget;
  int r = 2;
  int n_max = 9;
  std::size_t hill_k = 0;
  std::vector<double> bounds{5, 10, 20};
  std::string word;
  bool full = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BUMPFOREST_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return kFallbackSeed;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

SimulationOptions simulation_options(const RunConfig& cfg) {
  SimulationOptions o;
  o.caps.max_depth = cfg.max_depth;
  o.caps.max_nodes = cfg.max_nodes;
  o.caps.record_nodes = false;
  o.workers = cfg.workers;
  return o;
}

int cmd_forest(const RunConfig& cfg, std::ostream& out) {
  const auto forest = build_forest(cfg.n, cfg.max_n);
  const auto& identity = forest.tree_with_base(0);
  const auto deepest = forest.deepest();
  const auto from = unrank(deepest, cfg.n).to_string();
  const auto to = unrank(forest.base_of(deepest), cfg.n).to_string();
  if (cfg.format == "json") {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : forest.trees()) {
      trees.push_back({{"base", unrank(t.base, cfg.n).to_string()},
                       {"size", t.size},
                       {"max_depth", t.max_depth},
                       {"deepest", unrank(t.deepest, cfg.n).to_string()},
                       {"deepest_count", t.deepest_count}});
    }
    nlohmann::json j{{"n", cfg.n},
                     {"vertices", forest.vertex_count()},
                     {"tree_count", forest.trees().size()},
                     {"identity_tree_size", identity.size},
                     {"longest_path",
                      {{"length", forest.max_depth()},
                       {"unique", forest.max_depth_count() == 1},
                       {"from", from},
                       {"to", to}}},
                     {"trees", std::move(trees)}};
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "n,vertices,trees,identity_tree_size,longest_path,longest_path_count,longest_from,longest_to\n";
  out << cfg.n << ',' << forest.vertex_count() << ',' << forest.trees().size() << ',' << identity.size
      << ',' << forest.max_depth() << ',' << forest.max_depth_count() << ',' << from << ',' << to
      << "\n\nbase,size,max_depth,deepest,deepest_count\n";
  for (const auto& t : forest.trees()) {
    out << unrank(t.base, cfg.n).to_string() << ',' << t.size << ',' << t.max_depth << ','
        << unrank(t.deepest, cfg.n).to_string() << ',' << t.deepest_count << '\n';
  }
  return kOk;
}

void print_indented(const DescTree& tree, std::ostream& out) {
  std::vector<std::vector<std::size_t>> kids(tree.size());
  for (std::size_t i = 1; i < tree.size(); ++i) kids[tree.nodes[i].parent].push_back(i);
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    out << std::string(2 * tree.nodes[i].depth, ' ') << tree.nodes[i].perm.to_string() << '\n';
    for (auto k : kids[i]) walk(k);
  };
  walk(0);
}

int cmd_desc(const RunConfig& cfg, std::ostream& out) {
  const auto tree = desc_tree(Permutation::parse(cfg.perm), cfg.max_nodes);
  if (cfg.format == "json") {
    out << tree.to_json().dump(2) << '\n';
  } else if (cfg.format == "text") {
    print_indented(tree, out);
  } else {
    out << "perm,parent,depth\n";
    for (const auto& node : tree.nodes) {
      out << node.perm.to_string() << ',' << node.parent << ',' << node.depth << '\n';
    }
  }
  return kOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const auto options = simulation_options(cfg);
  const RngStream rng(cfg.seed, 0);
  auto wants = [&](const std::string& s) {
    return std::find(cfg.stats.begin(), cfg.stats.end(), s) != cfg.stats.end();
  };
  for (const auto& s : cfg.stats) {
    if (s != "size" && s != "leaves" && s != "size_sq" && s != "gw_size" && s != "gw_size_sq") {
      throw CLI::ValidationError("--stats", "unknown statistic " + s);
    }
  }
  const bool bump_stats = wants("size") || wants("leaves") || wants("size_sq");
  const bool gw_stats = wants("gw_size") || wants("gw_size_sq");

  std::vector<EstimateReport> reports;
  for (double alpha : cfg.alphas) {
    if (bump_stats) {
      auto report = estimate_bump_moments(alpha, cfg.trials, rng, options);
      std::erase_if(report.rows, [&](const StatisticRow& r) { return !wants(r.statistic); });
      reports.push_back(std::move(report));
    }
    if (gw_stats) {
      if (alpha >= 1.0) throw CLI::ValidationError("--alpha", "Galton-Watson statistics need alpha < 1");
      auto report = simulate_gw(alpha, cfg.trials, rng, options);
      std::erase_if(report.rows, [&](const StatisticRow& r) { return !wants(r.statistic); });
      reports.push_back(std::move(report));
    }
  }

  bool unreliable = false;
  for (const auto& r : reports) unreliable = unreliable || r.unreliable;
  if (cfg.format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) list.push_back(r.to_json());
    out << nlohmann::json{{"seed", cfg.seed}, {"workers", reports.empty() ? 1u : reports.front().workers},
                          {"reports", std::move(list)}}
               .dump(2)
        << '\n';
  } else {
    out << EstimateReport::csv_header() << '\n';
    for (const auto& r : reports) out << r.to_csv_rows();
  }
  return unreliable ? kUnreliable : kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto result = run_verify_suite(cfg.suite, cfg.budget);
  if (cfg.format == "json") {
    out << nlohmann::json{{"suite", result.suite},
                          {"passed", result.passed},
                          {"checks", result.checks},
                          {"counterexample", result.counterexample}}
               .dump(2)
        << '\n';
  } else {
    out << "suite,passed,checks\n"
        << result.suite << ',' << (result.passed ? "true" : "false") << ',' << result.checks << '\n';
  }
  if (!result.passed) {
    err << "verification failed: " << result.counterexample << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_tail(const RunConfig& cfg, std::ostream& out) {
  const RngStream rng(cfg.seed, 0);
  for (double alpha : cfg.alphas) {
    const auto report = tail_diagnostic(alpha, cfg.trials, rng, simulation_options(cfg), cfg.hill_k);
    if (cfg.format == "json") {
      out << report.to_json().dump(2) << '\n';
      continue;
    }
    out << "alpha,hill_k,hill_index,truncated,trials\n"
        << fmt(alpha) << ',' << report.hill_k << ',' << fmt(report.hill_index) << ','
        << report.truncated << ',' << report.trials << "\n\nx,survival\n";
    for (const auto& [x, p] : report.survival) out << fmt(x) << ',' << fmt(p) << '\n';
  }
  return kOk;
}

int cmd_local_limit(const RunConfig& cfg, std::ostream& out) {
  const auto report = local_limit_check(cfg.n, cfg.r, cfg.trials, RngStream(cfg.seed, 0));
  if (cfg.format == "json") {
    out << report.to_json().dump(2) << '\n';
    return kOk;
  }
  out << "n,r,trials,tv,tv_se\n"
      << report.n << ',' << report.r << ',' << report.trials << ',' << fmt(report.tv.distance) << ','
      << fmt(report.tv.se) << "\n\nshape,permutation,limit\n";
  for (const auto& row : report.to_json()["shapes"]) {
    out << row["shape"].get<std::string>() << ',' << fmt(row["permutation"].get<double>()) << ','
        << fmt(row["limit"].get<double>()) << '\n';
  }
  return kOk;
}

int cmd_depth(const RunConfig& cfg, std::ostream& out) {
  for (double alpha : cfg.alphas) {
    const auto table = exact_depth_expectations(alpha, cfg.r, cfg.n_max);
    if (cfg.format == "json") {
      out << table.to_json().dump(2) << '\n';
      continue;
    }
    out << "alpha,r,n_max,j,size_partial,size_target,size_tail,leaves_partial,leaves_target,leaves_tail\n";
    for (const auto& row : table.rows) {
      out << fmt(alpha) << ',' << table.r << ',' << table.n_max << ',' << row.j << ','
          << fmt(row.size_partial) << ',' << fmt(row.size_target) << ',' << fmt(row.size_tail) << ',';
      if (row.leaves_partial) {
        out << fmt(*row.leaves_partial) << ',' << fmt(row.leaves_target) << ',' << fmt(row.leaves_tail);
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
  return kOk;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out) {
  TreeCaps caps{cfg.max_depth, cfg.max_nodes, false};
  const double alpha = cfg.alphas.front();
  const auto probe = divergence_probe(alpha, cfg.bounds, cfg.trials, RngStream(cfg.seed, 0), caps);
  if (cfg.format == "json") {
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& [b, when] : probe.crossings) {
      crossings.push_back({{"bound", b}, {"trials", when ? nlohmann::json(*when) : nlohmann::json()}});
    }
    out << nlohmann::json{{"alpha", alpha},
                          {"trials_run", probe.trials_run},
                          {"truncated", probe.truncated},
                          {"final_mean", probe.final_mean},
                          {"crossings", std::move(crossings)}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "alpha,bound,crossed_at_trial,trials_run,final_mean,truncated\n";
  for (const auto& [b, when] : probe.crossings) {
    out << fmt(alpha) << ',' << fmt(b) << ',' << (when ? std::to_string(*when) : std::string()) << ','
        << probe.trials_run << ',' << fmt(probe.final_mean) << ',' << probe.truncated << '\n';
  }
  return kOk;
}

int cmd_tree(const RunConfig& cfg, std::ostream& out) {
  TreeCaps caps{cfg.max_depth, cfg.max_nodes, true};
  const auto tree = tree_of_word(Word::parse(cfg.word), caps);
  if (cfg.format == "json") {
    out << (cfg.full ? tree.full_json() : tree.summary_json()).dump(2) << '\n';
    return kOk;
  }
  out << "D,U,max_depth,truncated\n"
      << tree.size << ',' << tree.leaves << ',' << tree.max_depth << ','
      << (tree.truncated() ? "true" : "false") << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.seed = default_seed();

  CLI::App app{"Fixed-point forests, bump trees and their moment identities"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed (falls back to $BUMPFOREST_SEED)");
  };
  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--max-depth", cfg.max_depth, "Depth cap per tree")->check(CLI::Range(0, 30000));
    sub->add_option("--max-nodes", cfg.max_nodes, "Node cap per tree")->check(CLI::PositiveNumber);
  };
  auto add_alpha = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alphas, "Intensities in (0, 1], repeatable or comma separated")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
  };

  auto* forest = app.add_subcommand("forest", "Summarize the fixed-point forest F_n");
  forest->add_option("--n", cfg.n, "Permutation size")->required();
  forest->add_option("--max-n", cfg.max_n, "Largest n accepted");
  add_format(forest);

  auto* desc = app.add_subcommand("desc", "Descendant tree of a permutation");
  desc->add_option("--perm", cfg.perm, "Permutation, e.g. 31245 or 10,1,2,...")->required();
  desc->add_option("--max-nodes", cfg.max_nodes, "Node cap");
  add_format(desc);

  auto* estimate = app.add_subcommand("estimate", "Monte Carlo moments of bump and Galton-Watson trees");
  add_alpha(estimate);
  estimate->add_option("--trials", cfg.trials, "Trees per intensity")->check(CLI::PositiveNumber);
  estimate->add_option("--stats", cfg.stats, "size, leaves, size_sq, gw_size, gw_size_sq")->delimiter(',');
  estimate->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
  add_seed(estimate);
  add_caps(estimate);
  add_format(estimate);

  auto* verify = app.add_subcommand("verify", "Run an exhaustive identity suite");
  verify->add_option("--suite", cfg.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(verify_suite_names()));
  verify->add_option("--n-max", cfg.budget.n_max, "Largest word length or forest size");
  verify->add_option("--r-max", cfg.budget.r_max, "Largest alphabet");
  verify->add_option("--len-max", cfg.budget.len_max, "Largest word length for order searches");
  verify->add_option("--alpha", cfg.budget.alpha, "Intensity for depth-expectations")
      ->check(CLI::Range(0.0, 1.0));
  add_format(verify);

  auto* tail = app.add_subcommand("tail", "Tail diagnostic: survival function and Hill index of D");
  add_alpha(tail);
  tail->add_option("--trials", cfg.trials, "Trees per intensity")->check(CLI::Range(2ull, ~0ull));
  tail->add_option("--hill-k", cfg.hill_k, "Order statistics used by the Hill estimator (0 = top 1%)");
  tail->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
  add_seed(tail);
  add_caps(tail);
  add_format(tail);

  auto* local = app.add_subcommand("local-limit", "Compare neighborhoods of desc(pi_n) with the limit tree");
  local->add_option("--n", cfg.n, "Permutation size");
  local->add_option("--r", cfg.r, "Neighborhood radius")->check(CLI::Range(0, 4));
  local->add_option("--trials", cfg.trials, "Samples per side")->check(CLI::PositiveNumber);
  add_seed(local);
  add_format(local);

  auto* depth = app.add_subcommand("depth", "Exact per-depth expectations by word enumeration");
  add_alpha(depth);
  depth->add_option("--r", cfg.r, "Alphabet size")->check(CLI::Range(1, kMaxExactAlphabet));
  depth->add_option("--n-max", cfg.n_max, "Longest word enumerated")->check(CLI::Range(0, kMaxExactLength));
  add_format(depth);

  auto* probe = app.add_subcommand("probe", "Running mean of D against growing bounds");
  add_alpha(probe);
  probe->add_option("--trials", cfg.trials, "Trial budget")->check(CLI::PositiveNumber);
  probe->add_option("--bounds", cfg.bounds, "Bounds to cross")->delimiter(',');
  add_seed(probe);
  add_caps(probe);
  add_format(probe);

  auto* tree = app.add_subcommand("tree", "Bump tree of a word");
  tree->add_option("--word", cfg.word, "Space separated letters, e.g. \"2 1 0 1 0\"")->required();
  tree->add_flag("--full", cfg.full, "Include the node list (json)");
  add_caps(tree);
  add_format(tree);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  std::ofstream file;
  std::ostringstream buffer;
  std::ostream& sink = cfg.out_path.empty() ? out : static_cast<std::ostream&>(buffer);

  int code = kOk;
  try {
    if (*forest) code = cmd_forest(cfg, sink);
    else if (*desc) code = cmd_desc(cfg, sink);
    else if (*estimate) code = cmd_estimate(cfg, sink);
    else if (*verify) code = cmd_verify(cfg, sink, err);
    else if (*tail) code = cmd_tail(cfg, sink);
    else if (*local) code = cmd_local_limit(cfg, sink);
    else if (*depth) code = cmd_depth(cfg, sink);
    else if (*probe) code = cmd_probe(cfg, sink);
    else if (*tree) code = cmd_tree(cfg, sink);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot open " << cfg.out_path << '\n';
      return kUsageError;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace bumpforest::cli
