// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <iostream>

#include "qdel/analysis.hpp"
#include "qdel/selftest.hpp"

int main() {
  qdel::SelfTestOptions opt;
  opt.quad_nodes = qdel::default_quad_nodes();
  const qdel::SelfTestReport report = qdel::run_selftest(opt);
  std::cout << qdel::format_selftest(report);
  return report.pass() ? 0 : 1;
}
