#pragma once

// End-to-end verification of every headline fidelity claim, run both by
// `qdel selftest` and by the acceptance test binary.

#include <string>
#include <vector>

#include "qdel/analysis.hpp"

namespace qdel {

struct SelfTestOptions {
  int quad_nodes = kDefaultQuadNodes;
  // Fault injection: swap the first two columns of the transformer.
  bool swap_transformer_columns = false;
  // Fault injection: set ⟨B0|C0⟩ = 0.1 in every Gram matrix.
  bool corrupt_gram = false;
};

struct SelfTestCheck {
  std::string id;        // e.g. "4b"
  std::string name;
  std::string anchor;    // the claim being reproduced
  std::string expected;
  std::string observed;
  double tolerance = 0.0;
  bool pass = false;
  bool gating = true;    // report-only rows never fail the suite
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  bool pass() const;
};

SelfTestReport run_selftest(const SelfTestOptions& options = {});

// One line per check plus an overall verdict.
std::string format_selftest(const SelfTestReport& report);

}  // namespace qdel
