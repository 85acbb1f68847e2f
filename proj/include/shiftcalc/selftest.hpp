#pragma once

// Executable acceptance checks. The reference computations they compare
// against are injected through Oracles so that test code can supply its own.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shiftcalc/exact_linalg.hpp"

namespace shiftcalc {

struct Oracles {
  /// Plain triple-loop product.
  std::function<IntMatrix(const IntMatrix&, const IntMatrix&)> multiply;
  /// counts[v][w] = number of pairs of edges v -> u -> w in the graphs of r, s.
  std::function<std::vector<std::vector<std::size_t>>(const IntMatrix&, const IntMatrix&)>
      path_counts;
  /// Invariant factors of coker(I - A), keyed by IntMatrix::to_string().
  std::map<std::string, std::vector<Integer>> bowen_franks;
};

/// Built-in oracles; the Bowen-Franks table is read from `golden_path`
/// (left empty when the file cannot be read).
Oracles default_oracles(const std::string& golden_path);
/// Location of the bundled golden file.
std::string default_golden_path();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  double tol = 1e-9;
  /// Criteria to run; empty runs all nine.
  std::vector<int> only;
};

std::vector<CriterionResult> run_selftest(const Oracles& oracles,
                                          const SelftestOptions& options = {});

}  // namespace shiftcalc
