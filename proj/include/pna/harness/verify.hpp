#pragma once

#include <string>
#include <vector>

namespace pna::harness {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double wallSeconds = 0;
  double wallBudgetSeconds = 0;     // 0 = no budget
  std::vector<std::string> checks;  // one line per sub-check, prefixed ok/FAIL
  std::string detail() const;
};

// Named batteries: duality, dualset, equivalence, maxent, rates, cmdp,
// bruteforce, complexity. Each returns pass/fail plus per-check lines and is
// deterministic. Throws std::invalid_argument for unknown names.
SuiteResult runSuite(const std::string& name);

std::vector<std::string> allSuiteNames();

}  // namespace pna::harness
