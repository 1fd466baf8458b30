#pragma once

#include <ostream>

namespace bumpforest::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kVerificationFailed = 2;
inline constexpr int kUnreliable = 3;

/// Runs the bumpforest command line. Output that would go to --out is
/// written to `out` when --out is absent.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bumpforest::cli
