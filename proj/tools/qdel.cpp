// qdel: command-line front end for the deletion-machine simulator.
//
//   qdel gram     --lambda <f> --y <f> [--dump <path>]
//   qdel eval     --lambda <f> --alpha2 <f> [machine flags] [--transform] [--json]
//   qdel sweep    --param <name> --from <f> --to <f> --steps <n> [...]
//   qdel limit    [--eps <f>...] [--alpha2 <f>] [machine flags] [--json]
//   qdel selftest [--inject transformer-swap|gram-corrupt]
//
// Every subcommand accepts --config <file> with one `key = value` per line;
// flags given on the command line take precedence.
//
// Exit codes: 0 success, 1 check failure, 2 invalid input.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdel/analysis.hpp"
#include "qdel/deletion.hpp"
#include "qdel/errors.hpp"
#include "qdel/machine.hpp"
#include "qdel/report.hpp"
#include "qdel/selftest.hpp"
#include "qdel/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr double kInvSqrt2 = 0.70710678118654752;
// Tolerance for user-typed standard states such as 0.70710678.
constexpr double kStandardRenormTol = 1e-6;

struct MachineFlags {
  std::optional<double> lambda;
  double y = 0.0;
  double m1 = kInvSqrt2;
  double m2re = kInvSqrt2;
  double m2im = 0.0;
  std::optional<double> alpha2;
  double beta_phase = 0.0;
  bool transform = false;
};

void add_machine_flags(CLI::App* sub, MachineFlags& f, bool with_lambda = true) {
  if (with_lambda) sub->add_option("--lambda", f.lambda, "machine parameter in [0, 1/2]");
  sub->add_option("--y", f.y, "overlap <A|A0> = <A|A1> = <A|D0>")->capture_default_str();
  sub->add_option("--m1", f.m1, "standard state |S> = m1|0> + m2|1>")->capture_default_str();
  sub->add_option("--m2re", f.m2re, "real part of m2")->capture_default_str();
  sub->add_option("--m2im", f.m2im, "imaginary part of m2")->capture_default_str();
  sub->add_option("--alpha2", f.alpha2, "input alpha^2 in [0, 1]");
  sub->add_option("--beta-phase", f.beta_phase, "phase of beta")->capture_default_str();
}

// (m1, m2) renormalized when within 1e-6 of unit norm; otherwise unchanged so
// that validation reports the real deviation.
std::pair<double, qdel::cplx> standard_from(const MachineFlags& f) {
  qdel::cplx m2(f.m2re, f.m2im);
  const double n = f.m1 * f.m1 + std::norm(m2);
  if (std::abs(n - 1.0) <= kStandardRenormTol && n > 0.0) {
    const double s = 1.0 / std::sqrt(n);
    return {f.m1 * s, m2 * s};
  }
  return {f.m1, m2};
}

qdel::MachineParams params_from(const MachineFlags& f) {
  const auto [m1, m2] = standard_from(f);
  return qdel::MachineParams{f.lambda.value_or(0.0), f.y, m1, m2};
}

// Keys outside a [section] belong to the selected subcommand.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto selected = app_->get_subcommands();
    if (selected.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {selected.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

int fail_invalid(const std::string& reason) {
  std::cerr << reason << '\n';
  return kExitInvalid;
}

bool write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return true;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

int cmd_gram(double lambda, double y, const std::optional<std::string>& dump) {
  const qdel::MachineParams p{lambda, y, kInvSqrt2, {kInvSqrt2, 0.0}};
  p.validate();
  const qdel::GramMatrix g = qdel::build_gram(p);
  const qdel::MachineBasis basis = qdel::realize_vectors(g);

  nlohmann::json gram = nlohmann::json::array();
  for (int i = 0; i < 7; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 7; ++k) row.push_back(qdel::round_sig(g.entries(i, k).real()));
    gram.push_back(std::move(row));
  }
  nlohmann::json vectors = nlohmann::json::object();
  for (std::size_t v = 0; v < qdel::kMachineVectorCount; ++v) {
    nlohmann::json comps = nlohmann::json::array();
    for (Eigen::Index k = 0; k < basis.vectors[v].size(); ++k) {
      comps.push_back(qdel::round_sig(basis.vectors[v](k).real()));
    }
    vectors[qdel::machine_vector_name(static_cast<qdel::MachineVector>(v))] = comps;
  }
  const nlohmann::json doc = {{"lambda", qdel::round_sig(lambda)},
                              {"y", qdel::round_sig(y)},
                              {"gram", gram},
                              {"vectors", vectors},
                              {"rank", basis.dim}};
  if (!write_text(dump, doc.dump(2) + "\n")) {
    return fail_invalid(fmt::format("cannot write {}", *dump));
  }
  return kExitOk;
}

int cmd_eval(const MachineFlags& f, bool json) {
  if (!f.lambda) return fail_invalid("--lambda is required");
  if (!f.alpha2) return fail_invalid("--alpha2 is required");
  const qdel::MachineParams p = params_from(f);
  const qdel::QubitState input = qdel::QubitState::from_alpha2(*f.alpha2, f.beta_phase);
  const qdel::DeletionMachine machine(p);
  const qdel::FidelityReport report = qdel::evaluate(machine, input, f.transform);
  const qdel::PipelineResult selected = machine.run(input, f.transform);
  if (json) {
    nlohmann::json doc = qdel::to_json(report);
    doc["reduced"] = {{"rho1", qdel::to_json(selected.retained)},
                      {"rho2", qdel::to_json(selected.deleted)},
                      {"rho3", qdel::to_json(selected.machine)}};
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << qdel::format_report(report, selected);
  }
  return kExitOk;
}

int cmd_sweep(const MachineFlags& f, const std::string& param, double from, double to,
              int steps, const std::string& format, const std::optional<std::string>& out) {
  const auto swept = qdel::parse_swept_param(param);
  if (!swept) return fail_invalid(fmt::format("unknown sweep parameter '{}'", param));
  if (*swept != qdel::SweptParam::lambda && !f.lambda) {
    return fail_invalid("--lambda is required unless lambda is swept");
  }
  if (*swept != qdel::SweptParam::alpha2 && !f.alpha2) {
    return fail_invalid("--alpha2 is required unless alpha2 is swept");
  }
  qdel::SweepSpec spec;
  spec.param = *swept;
  spec.from = from;
  spec.to = to;
  spec.steps = steps;
  spec.fixed = params_from(f);
  if (*swept == qdel::SweptParam::lambda) spec.fixed.lambda = from;
  spec.alpha2 = f.alpha2.value_or(from);
  spec.beta_phase = f.beta_phase;
  spec.transformer = f.transform;
  spec.format = format == "json" ? qdel::OutputFormat::json : qdel::OutputFormat::csv;

  spec.validate();
  if (out) {
    std::ofstream probe(*out, std::ios::binary | std::ios::trunc);
    if (!probe) return fail_invalid(fmt::format("cannot write {}", *out));
  }
  const auto rows = qdel::run_sweep(spec);
  const std::string text = spec.format == qdel::OutputFormat::json
                               ? qdel::sweep_json(spec, rows).dump(2) + "\n"
                               : qdel::sweep_csv(spec, rows);
  if (!write_text(out, text)) return fail_invalid(fmt::format("cannot write {}", *out));
  return kExitOk;
}

int cmd_limit(const MachineFlags& f, const std::vector<double>& eps, bool json) {
  qdel::LimitSpec spec;
  if (!eps.empty()) spec.eps = eps;
  spec.alpha2 = f.alpha2.value_or(0.5);
  spec.beta_phase = f.beta_phase;
  std::tie(spec.m1, spec.m2) = standard_from(f);
  const qdel::LimitReport rep = qdel::run_limit(spec);
  if (json) {
    std::cout << qdel::to_json(rep).dump(2) << '\n';
  } else {
    std::cout << qdel::format_limit(rep);
  }
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_selftest(const std::string& inject) {
  qdel::SelfTestOptions opt;
  opt.quad_nodes = qdel::default_quad_nodes();
  if (inject == "transformer-swap") {
    opt.swap_transformer_columns = true;
  } else if (inject == "gram-corrupt") {
    opt.corrupt_gram = true;
  } else if (inject != "none") {
    return fail_invalid(fmt::format("unknown fault '{}'", inject));
  }
  const qdel::SelfTestReport rep = qdel::run_selftest(opt);
  std::cout << qdel::format_selftest(rep);
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for universal quantum deletion machines"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file supplying any flag");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));

  double gram_lambda = 0.0, gram_y = 0.0;
  std::optional<std::string> gram_dump;
  auto* gram = app.add_subcommand("gram", "Gram matrix and realized machine vectors as JSON");
  gram->add_option("--lambda", gram_lambda, "machine parameter in [0, 1/2]")->required();
  gram->add_option("--y", gram_y, "overlap of |A> with A0, A1, D0")->capture_default_str();
  gram->add_option("--dump", gram_dump, "output file (stdout when omitted)");

  MachineFlags eval_flags;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "Fidelity report at one parameter point");
  add_machine_flags(eval, eval_flags);
  eval->add_flag("--transform", eval_flags.transform, "show the modified machine");
  eval->add_flag("--json", eval_json, "JSON output");

  MachineFlags sweep_flags;
  std::string sweep_param, sweep_format = "csv";
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  std::optional<std::string> sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Fidelity table over one swept parameter");
  add_machine_flags(sweep, sweep_flags);
  sweep->add_option("--param", sweep_param, "lambda | alpha2 | y | beta_phase")->required();
  sweep->add_option("--from", sweep_from, "first value")->required();
  sweep->add_option("--to", sweep_to, "last value")->required();
  sweep->add_option("--steps", sweep_steps, "number of rows (>= 2)")->required();
  sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "output file (stdout when omitted)");
  sweep->add_flag("--transform", sweep_flags.transform, "classify the modified machine");

  MachineFlags limit_flags;
  std::vector<double> limit_eps;
  bool limit_json = false;
  auto* limit = app.add_subcommand("limit", "F3 and F4 as lambda approaches 1/2");
  add_machine_flags(limit, limit_flags, false);
  limit->add_option("--eps", limit_eps, "decreasing offsets (default 1e-2 1e-3 1e-4)");
  limit->add_flag("--json", limit_json, "JSON output");

  std::string inject = "none";
  auto* selftest = app.add_subcommand("selftest", "Run the full verification suite");
  selftest->add_option("--inject", inject, "fault injection: none | transformer-swap | gram-corrupt")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*gram) return cmd_gram(gram_lambda, gram_y, gram_dump);
    if (*eval) return cmd_eval(eval_flags, eval_json);
    if (*sweep) {
      return cmd_sweep(sweep_flags, sweep_param, sweep_from, sweep_to, sweep_steps,
                       sweep_format, sweep_out);
    }
    if (*limit) return cmd_limit(limit_flags, limit_eps, limit_json);
    if (*selftest) return cmd_selftest(inject);
  } catch (const qdel::Infeasible& e) {
    return fail_invalid(e.what());
  } catch (const qdel::InvalidInput& e) {
    return fail_invalid(e.what());
  }
  return kExitInvalid;
}
