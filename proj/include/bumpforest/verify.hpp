#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bumpforest {

/// Enumeration budgets for the exhaustive identity suites.
struct VerifyBudget {
  int n_max = 8;    // word length (word-identities, depth-expectations) or n (forest-facts)
  int r_max = 4;    // alphabet bound
  int len_max = 6;  // word length for completeness, leaves, double-complete
  double alpha = 0.5;
};

struct VerifyResult {
  std::string suite;
  bool passed = true;
  std::uint64_t checks = 0;
  std::string counterexample;  // first failure, empty on success
};

const std::vector<std::string>& verify_suite_names();

/// Throws std::invalid_argument for an unknown suite name.
VerifyResult run_verify_suite(std::string_view suite, const VerifyBudget& budget);

}  // namespace bumpforest
