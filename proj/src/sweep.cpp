#include "qdel/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "qdel/errors.hpp"
#include "qdel/report.hpp"

namespace qdel {

const char* swept_param_name(SweptParam p) {
  switch (p) {
    case SweptParam::lambda:
      return "lambda";
    case SweptParam::alpha2:
      return "alpha2";
    case SweptParam::y:
      return "y";
    case SweptParam::beta_phase:
      return "beta_phase";
  }
  return "?";
}

std::optional<SweptParam> parse_swept_param(std::string_view name) {
  for (auto p : {SweptParam::lambda, SweptParam::alpha2, SweptParam::y,
                 SweptParam::beta_phase}) {
    if (name == swept_param_name(p)) return p;
  }
  return std::nullopt;
}

namespace {

struct Interval {
  double lo, hi;
};

Interval legal_interval(SweptParam p) {
  switch (p) {
    case SweptParam::lambda:
      return {0.0, 0.5};
    case SweptParam::alpha2:
      return {0.0, 1.0};
    case SweptParam::y:
      return {0.0, std::numeric_limits<double>::max()};
    case SweptParam::beta_phase:
      return {0.0, 2.0 * std::numbers::pi};
  }
  return {0.0, 0.0};
}

}  // namespace

void SweepSpec::validate() const {
  if (steps < 2) throw InvalidInput(fmt::format("steps must be >= 2, got {}", steps));
  const Interval legal = legal_interval(param);
  for (double v : {from, to}) {
    if (!(v >= legal.lo && v <= legal.hi)) {
      throw InvalidInput(fmt::format("{} range endpoint {} is outside [{}, {}]",
                                     swept_param_name(param), v, legal.lo, legal.hi));
    }
  }
  MachineParams probe = fixed;
  if (param == SweptParam::lambda) probe.lambda = from;
  if (param == SweptParam::y) probe.y = from;
  probe.check_ranges();
  if (param != SweptParam::alpha2 && !(alpha2 >= 0.0 && alpha2 <= 1.0)) {
    throw InvalidInput(fmt::format("alpha2 must lie in [0, 1], got {}", alpha2));
  }
  if (!std::isfinite(beta_phase)) throw InvalidInput("beta phase must be finite");
}

double SweepSpec::value_at(int k) const {
  if (k == steps - 1) return to;
  return from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

namespace {

SweepRow evaluate_row(const SweepSpec& spec, int k) {
  SweepRow row;
  row.swept_value = spec.value_at(k);
  row.params = spec.fixed;
  row.alpha2 = spec.alpha2;
  row.beta_phase = spec.beta_phase;
  switch (spec.param) {
    case SweptParam::lambda:
      row.params.lambda = row.swept_value;
      break;
    case SweptParam::alpha2:
      row.alpha2 = row.swept_value;
      break;
    case SweptParam::y:
      row.params.y = row.swept_value;
      break;
    case SweptParam::beta_phase:
      row.beta_phase = row.swept_value;
      break;
  }
  try {
    const QubitState input = QubitState::from_alpha2(row.alpha2, row.beta_phase);
    row.report = evaluate(row.params, input, spec.transformer);
  } catch (const Infeasible& e) {
    row.note = e.what();
  } catch (const InvalidInput& e) {
    row.note = e.what();
  }
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.steps);
  std::vector<SweepRow> rows(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      rows[k] = evaluate_row(spec, static_cast<int>(k));
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    const MachineParams& p = r.params;
    out += fmt::format("{},{},{},{},{},{},{},{},{},", swept_param_name(spec.param),
                       format_number(r.swept_value), format_number(r.alpha2),
                       format_number(r.beta_phase), format_number(p.lambda),
                       format_number(p.y), format_number(p.m1),
                       format_number(p.m2.real()), format_number(p.m2.imag()));
    if (r.report) {
      const FidelityReport& f = *r.report;
      auto num = [](double v) { return format_number(round_sig(clamp_fidelity(v))); };
      out += fmt::format("{},{},{},{},{},{},", num(f.f1.numeric), num(f.f2.numeric),
                         num(f.f3.numeric), num(f.f4.numeric), num(f.fc.numeric),
                         classification_name(f.classification.kind));
    } else {
      out += ",,,,,,";
    }
    out += csv_escape(r.note);
    out += '\n';
  }
  return out;
}

nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    if (r.report) {
      arr.push_back(to_json(*r.report));
    } else {
      // Infeasible row: inputs echoed, no fidelities.
      arr.push_back({{"inputs", inputs_json(r.alpha2, r.beta_phase, r.params, spec.transformer)},
                     {"error", r.note}});
    }
  }
  return arr;
}

void LimitSpec::validate() const {
  if (eps.empty()) throw InvalidInput("eps sequence is empty");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0 && eps[k] <= 0.5)) {
      throw InvalidInput(fmt::format("eps values must lie in (0, 1/2], got {}", eps[k]));
    }
    if (k > 0 && !(eps[k] < eps[k - 1])) {
      throw InvalidInput("eps sequence must be strictly decreasing");
    }
  }
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) {
    throw InvalidInput(fmt::format("alpha2 must lie in [0, 1], got {}", alpha2));
  }
  MachineParams{0.5, 0.0, m1, m2}.check_ranges();
}

LimitReport run_limit(const LimitSpec& spec) {
  spec.validate();
  const QubitState input = QubitState::from_alpha2(spec.alpha2, spec.beta_phase);

  auto fidelities = [&](double lambda) {
    const DeletionMachine machine(MachineParams{lambda, 0.0, spec.m1, spec.m2});
    const PipelineResult r = machine.run(input, true);
    return std::pair{expectation(r.retained, input.amplitudes()),
                     expectation(r.deleted, machine.standard().sigma_prime)};
  };

  LimitReport rep;
  rep.spec = spec;
  std::tie(rep.f3_exact, rep.f4_exact) = fidelities(0.5);
  for (double e : spec.eps) {
    const auto [f3, f4] = fidelities(0.5 - e);
    rep.rows.push_back({e, 0.5 - e, f3, f4});
  }
  rep.f3_closed = closed_F3(input.alpha(), input.beta());
  rep.f4_closed = closed_F4(spec.alpha2, spec.beta_phase, 0.5,
                            standard_state(spec.m1, spec.m2));

  // Distance to the exact value must not grow as ε shrinks.
  constexpr double slack = 1e-14;
  rep.f3_monotone = rep.f4_monotone = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (std::abs(rep.rows[k].f3 - rep.f3_exact) >
        std::abs(rep.rows[k - 1].f3 - rep.f3_exact) + slack) {
      rep.f3_monotone = false;
    }
    if (std::abs(rep.rows[k].f4 - rep.f4_exact) >
        std::abs(rep.rows[k - 1].f4 - rep.f4_exact) + slack) {
      rep.f4_monotone = false;
    }
  }
  rep.exact_matches_closed = std::abs(rep.f3_exact - rep.f3_closed) <= 1e-10 &&
                             std::abs(rep.f4_exact - rep.f4_closed) <= 1e-10;
  return rep;
}

std::string format_limit(const LimitReport& rep) {
  std::string out = fmt::format("{:<10} {:<16} {:<16} {:<16}\n", "eps", "lambda", "F3", "F4");
  for (const auto& r : rep.rows) {
    out += fmt::format("{:<10} {:<16} {:<16} {:<16}\n", format_number(r.eps),
                       format_number(r.lambda), format_number(round_sig(r.f3)),
                       format_number(round_sig(r.f4)));
  }
  out += fmt::format("{:<10} {:<16} {:<16} {:<16}\n", "exact", "0.5",
                     format_number(round_sig(rep.f3_exact)),
                     format_number(round_sig(rep.f4_exact)));
  out += fmt::format("{:<10} {:<16} {:<16} {:<16}\n", "closed", "0.5",
                     format_number(round_sig(rep.f3_closed)),
                     format_number(round_sig(rep.f4_closed)));
  out += fmt::format("F3 monotone: {}  F4 monotone: {}  exact = closed: {}\n",
                     rep.f3_monotone ? "yes" : "no", rep.f4_monotone ? "yes" : "no",
                     rep.exact_matches_closed ? "yes" : "no");
  return out;
}

nlohmann::json to_json(const LimitReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"eps", round_sig(r.eps)},
                    {"lambda", round_sig(r.lambda)},
                    {"F3", round_sig(r.f3)},
                    {"F4", round_sig(r.f4)}});
  }
  return {{"rows", rows},
          {"exact", {{"F3", round_sig(rep.f3_exact)}, {"F4", round_sig(rep.f4_exact)}}},
          {"closed", {{"F3", round_sig(rep.f3_closed)}, {"F4", round_sig(rep.f4_closed)}}},
          {"F3_monotone", rep.f3_monotone},
          {"F4_monotone", rep.f4_monotone},
          {"exact_matches_closed", rep.exact_matches_closed}};
}

}  // namespace qdel
