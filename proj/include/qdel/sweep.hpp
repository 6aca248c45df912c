#pragma once

// Parameter sweeps and the λ → 1/2 limit study.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdel/analysis.hpp"

namespace qdel {

enum class SweptParam { lambda, alpha2, y, beta_phase };
enum class OutputFormat { csv, json };

const char* swept_param_name(SweptParam p);
std::optional<SweptParam> parse_swept_param(std::string_view name);

struct SweepSpec {
  SweptParam param = SweptParam::lambda;
  double from = 0.0;
  double to = 0.5;
  int steps = 2;
  MachineParams fixed;  // the swept member is overwritten per row
  double alpha2 = 0.5;
  double beta_phase = 0.0;
  bool transformer = false;
  OutputFormat format = OutputFormat::csv;

  // Throws InvalidInput when steps < 2, the range leaves the parameter's legal
  // interval or a fixed value is out of range.
  void validate() const;
  double value_at(int k) const;
};

struct SweepRow {
  double swept_value = 0.0;
  double alpha2 = 0.0;
  double beta_phase = 0.0;
  MachineParams params;
  std::optional<FidelityReport> report;  // empty for infeasible rows
  std::string note;
};

// Rows are evaluated on `threads` workers (0 = hardware concurrency) and
// returned in sweep order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

struct LimitSpec {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double alpha2 = 0.5;
  double beta_phase = 0.0;
  double m1 = 0.70710678118654752;
  cplx m2 = {0.70710678118654752, 0.0};

  // eps strictly decreasing, each in (0, 1/2]. Throws InvalidInput.
  void validate() const;
};

struct LimitRow {
  double eps = 0.0;
  double lambda = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;
};

struct LimitReport {
  LimitSpec spec;
  std::vector<LimitRow> rows;
  double f3_exact = 0.0;   // pipeline at λ = 1/2
  double f4_exact = 0.0;
  double f3_closed = 0.0;  // 3/4 - α²/2 + α(β+β*)/(2√2)
  double f4_closed = 0.0;  // closed F4 at λ = 1/2
  bool f3_monotone = false;
  bool f4_monotone = false;
  bool exact_matches_closed = false;  // within 1e-10

  bool pass() const { return f3_monotone && f4_monotone && exact_matches_closed; }
};

LimitReport run_limit(const LimitSpec& spec);
std::string format_limit(const LimitReport& report);
nlohmann::json to_json(const LimitReport& report);

}  // namespace qdel
