#pragma once

#include <cstdint>
#include <ostream>

namespace pdtlab::cli {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int cases = 200;
  int max_n = 8;
  bool exhaustive_functions = false;
  int threads = 1;
};

/// Runs every property suite and prints one summary line per suite.
/// Returns the total number of failures.
int run_suites(const SuiteOptions& opt, std::ostream& out);

}  // namespace pdtlab::cli
