#include <cmath>
#include <limits>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bumpforest/bump_tree.hpp"
#include "bumpforest/estimators.hpp"
#include "bumpforest/perm_forest.hpp"
#include "bumpforest/verify.hpp"

namespace py = pybind11;
using namespace bumpforest;

namespace {

py::object to_python(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
    default:
      throw std::runtime_error("unsupported json value");
  }
}

double analytic_value(const Analytic& a) {
  return a.divergent ? std::numeric_limits<double>::infinity() : a.value;
}

SimulationOptions options(unsigned workers, int max_depth, std::uint64_t max_nodes) {
  SimulationOptions o;
  o.workers = workers;
  o.caps.max_depth = max_depth;
  o.caps.max_nodes = max_nodes;
  return o;
}

Word parse_word(const std::string& text, int alphabet_bound) { return Word::parse(text, alphabet_bound); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed-point forests, bump trees and their moment identities";

  py::register_exception<std::overflow_error>(m, "OverflowError", PyExc_OverflowError);

  m.def("tau", [](const std::string& p) { return tau(Permutation::parse(p)).to_string(); }, py::arg("perm"));
  m.def("fixed_points", [](const std::string& p) { return fixed_points(Permutation::parse(p)); }, py::arg("perm"));
  m.def("bump_value", [](const std::string& p, int v) { return bump_value(Permutation::parse(p), v).to_string(); },
        py::arg("perm"), py::arg("m"));
  m.def("desc_tree",
        [](const std::string& p, std::uint64_t max_nodes) {
          return to_python(desc_tree(Permutation::parse(p), max_nodes).to_json());
        },
        py::arg("perm"), py::arg("max_nodes") = kDefaultDescMaxNodes);
  m.def("forest_summary",
        [](int n) {
          const auto forest = build_forest(n);
          py::list trees;
          for (const auto& t : forest.trees()) {
            py::dict d;
            d["base"] = unrank(t.base, n).to_string();
            d["size"] = t.size;
            d["max_depth"] = t.max_depth;
            d["deepest"] = unrank(t.deepest, n).to_string();
            trees.append(d);
          }
          py::dict out;
          out["n"] = n;
          out["vertices"] = forest.vertex_count();
          out["longest_path"] = forest.max_depth();
          out["longest_path_count"] = forest.max_depth_count();
          out["longest_from"] = unrank(forest.deepest(), n).to_string();
          out["longest_to"] = unrank(forest.base_of(forest.deepest()), n).to_string();
          out["trees"] = trees;
          return out;
        },
        py::arg("n"));
  m.def("separation_config", [](const std::string& p) { return to_python(separation_config(Permutation::parse(p)).to_json()); },
        py::arg("perm"));

  m.def("bump_word", [](const std::string& w, std::size_t i) { return bump_word(Word::parse(w), i).to_string(); },
        py::arg("word"), py::arg("index"));
  m.def("children",
        [](const std::string& w) {
          std::vector<std::string> out;
          for (const auto& c : children(Word::parse(w))) out.push_back(c.to_string());
          return out;
        },
        py::arg("word"));
  m.def("is_complete",
        [](const std::string& w, std::vector<int> a, int r) { return is_complete(parse_word(w, r), IndexSet(a)); },
        py::arg("word"), py::arg("indices"), py::arg("alphabet_bound") = 0);
  m.def("recover_order",
        [](const std::string& w, std::vector<int> a, int r) { return recover_order(parse_word(w, r), IndexSet(a)); },
        py::arg("word"), py::arg("indices"), py::arg("alphabet_bound") = 0);
  m.def("truncated_factorial", &truncated_factorial, py::arg("y"), py::arg("x"));
  m.def("count_complete_fillings", [](std::vector<int> a, int r) { return count_complete_fillings(IndexSet(a), r); },
        py::arg("indices"), py::arg("r"));
  m.def("count_leaf_fillings",
        [](std::vector<int> a, int n, int r) { return count_leaf_fillings(IndexSet(a), n, r); }, py::arg("indices"),
        py::arg("n"), py::arg("r"));
  m.def("count_double_complete",
        [](std::vector<int> a, std::vector<int> b, int r) { return count_double_complete(IndexSet(a), IndexSet(b), r); },
        py::arg("a"), py::arg("b"), py::arg("r"));
  m.def("double_complete_product",
        [](std::vector<int> a, std::vector<int> b, int r) {
          return double_complete_product(IndexSet(a), IndexSet(b), r);
        },
        py::arg("a"), py::arg("b"), py::arg("r"));
  m.def("bound_double_complete",
        [](int a, int b, int c, int r) {
          const auto x = bound_double_complete(a, b, c, r);
          return py::make_tuple(x.lower, x.upper);
        },
        py::arg("a_only"), py::arg("b_only"), py::arg("shared"), py::arg("r"));

  m.def("tree_of_word",
        [](const std::string& w, int max_depth, std::uint64_t max_nodes, bool full) {
          TreeCaps caps{max_depth, max_nodes, full};
          const auto t = tree_of_word(Word::parse(w), caps);
          return to_python(full ? t.full_json() : t.summary_json());
        },
        py::arg("word"), py::arg("max_depth") = kDefaultMaxDepth, py::arg("max_nodes") = kDefaultMaxNodes,
        py::arg("full") = false);
  m.def("vertex_count_via_subsets", [](const std::string& w) { return vertex_count_via_subsets(Word::parse(w)); },
        py::arg("word"));

  m.def("expected_size", [](double a) { return analytic_value(expected_size(a)); }, py::arg("alpha"));
  m.def("expected_leaves", [](double a) { return analytic_value(expected_leaves(a)); }, py::arg("alpha"));
  m.def("second_moment_bounds",
        [](double a) {
          const auto b = second_moment_bounds(a);
          return py::make_tuple(analytic_value(b.lower), analytic_value(b.upper));
        },
        py::arg("alpha"));
  m.def("gw_moments",
        [](double a) {
          const auto g = gw_moments(a);
          return py::make_tuple(g.mean, g.second_moment);
        },
        py::arg("alpha"));
  m.def("estimate_bump_moments",
        [](double alpha, std::uint64_t trials, std::uint64_t seed, unsigned workers, int max_depth,
           std::uint64_t max_nodes) {
          EstimateReport r;
          {
            py::gil_scoped_release release;
            r = estimate_bump_moments(alpha, trials, RngStream(seed, 0), options(workers, max_depth, max_nodes));
          }
          return to_python(r.to_json());
        },
        py::arg("alpha"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0,
        py::arg("max_depth") = kDefaultMaxDepth, py::arg("max_nodes") = kDefaultMaxNodes);
  m.def("simulate_gw",
        [](double alpha, std::uint64_t trials, std::uint64_t seed, unsigned workers, std::uint64_t max_nodes) {
          EstimateReport r;
          {
            py::gil_scoped_release release;
            r = simulate_gw(alpha, trials, RngStream(seed, 0), options(workers, kDefaultMaxDepth, max_nodes));
          }
          return to_python(r.to_json());
        },
        py::arg("alpha"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0,
        py::arg("max_nodes") = kDefaultMaxNodes);
  m.def("tail_diagnostic",
        [](double alpha, std::uint64_t trials, std::uint64_t seed, std::size_t hill_k, unsigned workers) {
          TailReport r;
          {
            py::gil_scoped_release release;
            r = tail_diagnostic(alpha, trials, RngStream(seed, 0), options(workers, kDefaultMaxDepth, kDefaultMaxNodes),
                                hill_k);
          }
          return to_python(r.to_json());
        },
        py::arg("alpha"), py::arg("trials"), py::arg("seed") = 0, py::arg("hill_k") = 0, py::arg("workers") = 0);
  m.def("local_limit_check",
        [](int n, int r, std::uint64_t trials, std::uint64_t seed) {
          LocalLimitReport rep;
          {
            py::gil_scoped_release release;
            rep = local_limit_check(n, r, trials, RngStream(seed, 0));
          }
          return to_python(rep.to_json());
        },
        py::arg("n"), py::arg("r"), py::arg("trials"), py::arg("seed") = 0);
  m.def("exact_depth_expectations",
        [](double alpha, int r, int n_max) { return to_python(exact_depth_expectations(alpha, r, n_max).to_json()); },
        py::arg("alpha"), py::arg("r"), py::arg("n_max"));
  m.def("verify",
        [](const std::string& suite, int n_max, int r_max, int len_max, double alpha) {
          const auto res = run_verify_suite(suite, VerifyBudget{n_max, r_max, len_max, alpha});
          py::dict out;
          out["suite"] = res.suite;
          out["passed"] = res.passed;
          out["checks"] = res.checks;
          out["counterexample"] = res.counterexample;
          return out;
        },
        py::arg("suite"), py::arg("n_max") = 8, py::arg("r_max") = 4, py::arg("len_max") = 6, py::arg("alpha") = 0.5);
  m.def("verify_suite_names", &verify_suite_names);
}
