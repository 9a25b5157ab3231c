#include <doctest.h>

#include "aniso/validation.hpp"

using namespace aniso;

TEST_CASE("validation suite") {
  const ValidationReport report = run_validation({});
  CHECK(report.passed);
  CHECK(report.checks.size() >= 20);
  for (const CheckResult& c : report.checks) {
    INFO(c.name);
    CHECK(c.passed);
    CHECK(c.samples > 0);
    CHECK(c.worst_defect <= c.tolerance);
  }

  const ValidationReport again = run_validation({});
  REQUIRE(again.checks.size() == report.checks.size());
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    CHECK(again.checks[i].name == report.checks[i].name);
    CHECK(again.checks[i].worst_defect == report.checks[i].worst_defect);
  }

  ValidationOptions faulty;
  faulty.inject_fault = true;
  const ValidationReport bad = run_validation(faulty);
  CHECK_FALSE(bad.passed);
  int failures = 0;
  for (const CheckResult& c : bad.checks) failures += c.passed ? 0 : 1;
  CHECK(failures == 1);
}
