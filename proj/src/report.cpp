#include "qdel/report.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace qdel {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  return fmt::format("{:.12g}", x);
}

double round_sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  return std::stod(fmt::format("{:.12g}", x));
}

namespace {

nlohmann::json triple_json(const FidelityTriple& t) {
  return {{"numeric", round_sig(clamp_fidelity(t.numeric))},
          {"closed", round_sig(clamp_fidelity(t.closed))},
          {"diff", round_sig(t.diff())}};
}

}  // namespace

nlohmann::json inputs_json(double alpha2, double beta_phase, const MachineParams& p,
                           bool transformer) {
  return {{"alpha2", round_sig(alpha2)},     {"beta_phase", round_sig(beta_phase)},
          {"lambda", round_sig(p.lambda)},   {"y", round_sig(p.y)},
          {"m1", round_sig(p.m1)},           {"m2re", round_sig(p.m2.real())},
          {"m2im", round_sig(p.m2.imag())},  {"transformer", transformer}};
}

nlohmann::json to_json(const FidelityReport& r) {
  nlohmann::json j;
  j["inputs"] = inputs_json(r.alpha2, r.beta_phase, r.params, r.transformer);
  j["conventional"] = {{"F1", triple_json(r.f1)},
                       {"F2", triple_json(r.f2)},
                       {"Fc", triple_json(r.fc)}};
  j["modified"] = {{"F3", triple_json(r.f3)},
                   {"F4", triple_json(r.f4)},
                   {"Fc", triple_json(r.fc_prime)}};
  j["classification"] = classification_name(r.classification.kind);
  j["optimality"] = r.classification.optimality_note;
  return j;
}

nlohmann::json to_json(const DensityOp& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < rho.matrix().cols(); ++k) {
      row.push_back({round_sig(rho(i, k).real()), round_sig(rho(i, k).imag())});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string format_matrix(std::string_view name, const DensityOp& rho) {
  std::string out = fmt::format("{}:\n", name);
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i) {
    out += "  [";
    for (Eigen::Index k = 0; k < rho.matrix().cols(); ++k) {
      const cplx v = rho(i, k);
      out += fmt::format("{}({}, {})", k == 0 ? "" : ", ",
                         format_number(round_sig(v.real())),
                         format_number(round_sig(v.imag())));
    }
    out += "]\n";
  }
  return out;
}

std::string triple_line(std::string_view name, const FidelityTriple& t) {
  return fmt::format("  {:<3} numeric {:<16} closed {:<16} diff {}\n", name,
                     format_number(round_sig(clamp_fidelity(t.numeric))),
                     format_number(round_sig(clamp_fidelity(t.closed))),
                     format_number(round_sig(t.diff())));
}

}  // namespace

std::string format_report(const FidelityReport& r, const PipelineResult& selected) {
  std::string out;
  out += fmt::format(
      "inputs: alpha2={} beta_phase={} lambda={} y={} m1={} m2=({}, {}) transformer={}\n",
      format_number(r.alpha2), format_number(r.beta_phase), format_number(r.params.lambda),
      format_number(r.params.y), format_number(r.params.m1),
      format_number(r.params.m2.real()), format_number(r.params.m2.imag()),
      r.transformer ? "on" : "off");
  out += "conventional:\n";
  out += triple_line("F1", r.f1);
  out += triple_line("F2", r.f2);
  out += triple_line("Fc", r.fc);
  out += "modified:\n";
  out += triple_line("F3", r.f3);
  out += triple_line("F4", r.f4);
  out += triple_line("Fc", r.fc_prime);
  out += fmt::format("classification: {} ({})\n",
                     classification_name(r.classification.kind),
                     r.classification.optimality_note);
  const char* prime = selected.transformed ? "'" : "";
  out += format_matrix(fmt::format("rho{}1", prime), selected.retained);
  out += format_matrix(fmt::format("rho{}2", prime), selected.deleted);
  out += format_matrix(fmt::format("rho{}3", prime), selected.machine);
  return out;
}

}  // namespace qdel
