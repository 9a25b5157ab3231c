#pragma once

// Executable invariant suite behind `aniso-emit validate`. Every check draws
// its samples from a generator seeded from ValidationOptions::seed, so two
// runs with the same options produce identical reports.

#include <cstdint>
#include <string>
#include <vector>

namespace aniso {

struct CheckResult {
  std::string name;
  std::size_t samples = 0;
  double worst_defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  std::uint64_t seed = 42;
  bool inject_fault = false;  // corrupts one check; exercises the harness itself
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed = false;
};

ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace aniso
