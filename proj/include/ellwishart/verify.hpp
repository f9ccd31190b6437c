#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ellw::verify {

struct Options {
  bool quick = false;          // smaller Monte Carlo sizes
  std::uint64_t seed = 20240915;
  /// Test hook: name of a fault to inject ("commutation-index" corrupts the
  /// commutation-matrix index map inside the operator-equivalence item).
  std::string inject_fault;
  /// When set, the determinism criterion shells out to this CLI binary and
  /// byte-compares its artifacts; otherwise it runs the library writers.
  std::string cli_path;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every acceptance criterion and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const Options& options);

}  // namespace ellw::verify
