#pragma once

// Verification suite: one entry per acceptance criterion, each checking a
// documented quantitative property of the integrator family at a fixed
// tolerance.  Used both by the `verify` CLI subcommand and by the ctest
// acceptance binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace substep::acceptance {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

int criterion_count();
CriterionResult run_criterion(int index);      // 1-based
std::vector<CriterionResult> run_all();

/// Prints one PASS/FAIL line per result; returns true when all passed.
bool print_results(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace substep::acceptance
