#include "qdel/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>

#include "qdel/deletion.hpp"
#include "qdel/errors.hpp"

namespace qdel {

bool SelfTestReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SelfTestCheck& c) { return c.pass || !c.gating; });
}

namespace {

using enum MachineVector;
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752;

constexpr std::array<double, 6> kLambdas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
constexpr std::array<double, 5> kAlpha2 = {0.0, 0.25, 0.5, 0.75, 1.0};
constexpr std::array<double, 4> kPhases = {0.0, kPi / 2, kPi, 3 * kPi / 2};

struct Standard {
  double m1;
  cplx m2;
};
const std::array<Standard, 3> kStandards = {
    Standard{1.0, {0.0, 0.0}}, Standard{kInvSqrt2, {kInvSqrt2, 0.0}},
    Standard{0.6, {0.0, 0.8}}};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  v.back() = hi;
  return v;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string sci(double x) { return fmt::format("{:.3e}", x); }

class Suite {
 public:
  explicit Suite(const SelfTestOptions& options) : opt_(options) {}

  DeletionMachine machine(const MachineParams& p) const {
    if (!opt_.swap_transformer_columns && !opt_.corrupt_gram) return DeletionMachine(p);
    p.validate();
    GramMatrix g = build_gram(p);
    if (opt_.corrupt_gram) g.set(B0, C0, 0.1);
    TransformerGate t = build_transformer();
    if (opt_.swap_transformer_columns) t.matrix.col(0).swap(t.matrix.col(1));
    return DeletionMachine(p, realize_vectors(g), standard_state(p.m1, p.m2), t);
  }

  PipelineResult run(const DeletionMachine& m, const QubitState& in, bool transform) {
    PipelineResult r = m.run(in, transform);
    audit(r);
    return r;
  }

  void audit(const PipelineResult& r) {
    for (const DensityOp* op : {&r.retained, &r.deleted, &r.machine}) {
      const DensityDiagnostics d = validate_density(*op);
      ++audited_;
      if (!d.pass()) ++audit_failures_;
      worst_herm_ = std::max(worst_herm_, d.hermiticity_deviation);
      worst_trace_ = std::max(worst_trace_, d.trace_deviation);
      min_eig_ = std::min(min_eig_, d.min_eigenvalue);
    }
  }

  PipelineObserver observer() {
    return [this](const PipelineResult& r) { audit(r); };
  }

  // Runs `body`; an exception marks the check failed with the message.
  void check(SelfTestCheck c, const std::function<void(SelfTestCheck&)>& body) {
    try {
      body(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.observed = fmt::format("error: {}", e.what());
    }
    report_.checks.push_back(std::move(c));
  }

  const SelfTestOptions& options() const { return opt_; }
  SelfTestReport& report() { return report_; }

  std::size_t audited_ = 0;
  std::size_t audit_failures_ = 0;
  double worst_herm_ = 0.0;
  double worst_trace_ = 0.0;
  double min_eig_ = 1.0;

 private:
  SelfTestOptions opt_;
  SelfTestReport report_;
};

double fidelity_a(const PipelineResult& r, const QubitState& in) {
  return expectation(r.retained, in.amplitudes());
}

double fidelity_b(const PipelineResult& r, const DeletionMachine& m) {
  return expectation(r.deleted, m.standard().sigma_prime);
}

void set_result(SelfTestCheck& c, double observed_dev) {
  c.observed = fmt::format("max dev {}", sci(observed_dev));
  c.pass = observed_dev <= c.tolerance;
}

}  // namespace

SelfTestReport run_selftest(const SelfTestOptions& options) {
  Suite s(options);
  const MachineParams headline{0.5, 0.0, kInvSqrt2, {kInvSqrt2, 0.0}};

  // 1. F2 = 1/2 everywhere.
  s.check({"1", "deletion fidelity universality", "F2 = 1/2", "0.5", "", 1e-10},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for (double lam : kLambdas) {
              for (const auto& st : kStandards) {
                const DeletionMachine m = s.machine({lam, 0.0, st.m1, st.m2});
                for (double a2 : kAlpha2) {
                  for (double ph : kPhases) {
                    const auto r = s.run(m, QubitState::from_alpha2(a2, ph), false);
                    worst = std::max(worst, std::abs(fidelity_b(r, m) - 0.5));
                  }
                }
              }
            }
            set_result(c, worst);
          });

  // 2. Average retained fidelity of the conventional machine.
  auto avg_f1 = [&](double lam) {
    const DeletionMachine m = s.machine({lam, 0.0, kInvSqrt2, {kInvSqrt2, 0.0}});
    return average_fidelity(
        [&](double a2) {
          const QubitState in = QubitState::from_alpha2(a2, 0.0);
          return fidelity_a(s.run(m, in, false), in);
        },
        options.quad_nodes);
  };
  s.check({"2a", "average retained fidelity, conventional (lambda=0)", "avg F1 -> 2/3",
           "0.666666666667", "", 1e-6},
          [&](SelfTestCheck& c) {
            const double v = avg_f1(0.0);
            c.observed = fmt::format("{:.12f}", v);
            c.pass = std::abs(v - 2.0 / 3.0) <= c.tolerance;
          });
  s.check({"2b", "average F1 vs (1-l)+(2l-1)/3, l in {0,0.25,0.5}", "avg F1 analytic",
           "analytic", "", 1e-9},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for (double lam : {0.0, 0.25, 0.5}) {
              const double analytic = (1.0 - lam) + (2.0 * lam - 1.0) / 3.0;
              worst = std::max(worst, std::abs(avg_f1(lam) - analytic));
            }
            set_result(c, worst);
          });

  // 3. Machine overlap ⟨A|ρ3|A⟩ = Y².
  {
    double worst_value = 0.0, worst_spread = 0.0, worst_prepost = 0.0;
    std::string error;
    try {
      for (double y : {0.0, 0.1, 0.2}) {
        const DeletionMachine m = s.machine({0.25, y, kInvSqrt2, {kInvSqrt2, 0.0}});
        double lo = 1e300, hi = -1e300;
        for (double a2 : linspace(0.0, 1.0, 11)) {
          for (double ph : kPhases) {
            const QubitState in = QubitState::from_alpha2(a2, ph);
            const auto conv = s.run(m, in, false);
            const auto mod = s.run(m, in, true);
            const double ov = machine_overlap(conv.machine, m.basis()[A], y).value;
            const double ov_mod = machine_overlap(mod.machine, m.basis()[A], y).value;
            worst_value = std::max(worst_value, std::abs(ov - y * y));
            lo = std::min(lo, ov);
            hi = std::max(hi, ov);
            worst_prepost = std::max({worst_prepost, std::abs(ov - ov_mod),
                                      max_abs(conv.machine.matrix() - mod.machine.matrix())});
          }
        }
        worst_spread = std::max(worst_spread, hi - lo);
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto fill = [&](SelfTestCheck& c, double dev) {
      if (!error.empty()) throw std::runtime_error(error);
      set_result(c, dev);
    };
    s.check({"3a", "machine overlap equals Y^2 (Y in {0,0.1,0.2}, lambda=0.25)",
             "<A|rho3|A> = Y^2", "Y^2", "", 1e-10},
            [&](SelfTestCheck& c) { fill(c, worst_value); });
    s.check({"3b", "machine overlap independent of the input", "<A|rho3|A> = Y^2",
             "spread 0", "", 1e-10},
            [&](SelfTestCheck& c) { fill(c, worst_spread); });
    s.check({"3c", "machine state unchanged by the transformer", "rho'3 = rho3",
             "identical", "", 1e-12},
            [&](SelfTestCheck& c) { fill(c, worst_prepost); });
  }

  // 4. Modified machine deletes with fidelity 3/4.
  auto worst_f4 = [&](double lam) {
    MachineParams p = headline;
    p.lambda = lam;
    const DeletionMachine m = s.machine(p);
    double worst = 0.0;
    for (double a2 : linspace(0.0, 1.0, 11)) {
      for (double ph : kPhases) {
        const auto r = s.run(m, QubitState::from_alpha2(a2, ph), true);
        worst = std::max(worst, std::abs(fidelity_b(r, m) - 0.75));
      }
    }
    return worst;
  };
  s.check({"4a", "modified deletion fidelity at lambda=1/2", "F4 -> 3/4", "0.75", "", 1e-10},
          [&](SelfTestCheck& c) { set_result(c, worst_f4(0.5)); });
  s.check({"4b", "modified deletion fidelity at lambda=1/2-1e-4", "F4 -> 3/4", "0.75", "",
           1e-3},
          [&](SelfTestCheck& c) { set_result(c, worst_f4(0.5 - 1e-4)); });

  // 5. Modified machine retained fidelity.
  s.check({"5a", "retained fidelity at lambda=1/2 vs 3/4 - a^2/2 + a(b+b*)/(2 sqrt2)",
           "F3 limit", "closed form", "", 1e-12},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for (const auto& st : kStandards) {
              const DeletionMachine m = s.machine({0.5, 0.0, st.m1, st.m2});
              for (double a2 : linspace(0.0, 1.0, 11)) {
                for (double ph : kPhases) {
                  const QubitState in = QubitState::from_alpha2(a2, ph);
                  const double f3 = fidelity_a(s.run(m, in, true), in);
                  worst = std::max(worst, std::abs(f3 - closed_F3(in.alpha(), in.beta())));
                }
              }
            }
            set_result(c, worst);
          });
  s.check({"5b", "average retained fidelity, modified (beta real)",
           "avg F3 -> 1/2 + pi/(8 sqrt2)", fmt::format("{:.12f}", 0.5 + kPi / (8 * std::sqrt(2.0))),
           "", 1e-6},
          [&](SelfTestCheck& c) {
            const DeletionMachine m = s.machine(headline);
            const double v = average_fidelity(
                [&](double a2) {
                  const QubitState in = QubitState::from_alpha2(a2, 0.0);
                  return fidelity_a(s.run(m, in, true), in);
                },
                options.quad_nodes);
            c.observed = fmt::format("{:.12f}", v);
            c.pass = std::abs(v - (0.5 + kPi / (8 * std::sqrt(2.0)))) <= c.tolerance;
          });

  // 6. Isometry and unitarity.
  s.check({"6a", "deleter isometry over the feasible grid", "U isometric", "0", "", 1e-12},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            int points = 0;
            for (double lam : kLambdas) {
              for (double y : {0.0, 0.1, 0.2, 0.3}) {
                for (const auto& st : kStandards) {
                  const MachineParams p{lam, y, st.m1, st.m2};
                  if (!p.analytic_feasible()) continue;
                  const DeletionMachine m = s.machine(p);
                  worst = std::max(worst, verify_isometry(m.deleter()).max_residual);
                  ++points;
                }
              }
            }
            c.observed = fmt::format("max residual {} over {} points", sci(worst), points);
            c.pass = worst < c.tolerance;
          });
  s.check({"6b", "transformer unitarity", "T unitary", "T^dagger T = I", "", 1e-14},
          [&](SelfTestCheck& c) {
            const DeletionMachine m = s.machine(headline);
            set_result(c, unitarity_residual(m.transformer()));
          });
  s.check({"6c", "deleter output norm", "U isometric", "1", "", 1e-12},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for (double lam : {0.0, 0.25, 0.5}) {
              const DeletionMachine m = s.machine({lam, 0.0, kInvSqrt2, {kInvSqrt2, 0.0}});
              for (double a2 : linspace(0.0, 1.0, 21)) {
                for (double ph : kPhases) {
                  const double n = m.output_state(QubitState::from_alpha2(a2, ph)).norm();
                  worst = std::max(worst, std::abs(n - 1.0));
                }
              }
            }
            set_result(c, worst);
          });

  // 7. Closed-form reduced states against the pipeline.
  auto for_full_grid = [&](const std::function<void(const DeletionMachine&,
                                                     const QubitState&)>& visit) {
    for (double lam : kLambdas) {
      for (double y : {0.0, 0.2}) {
        for (const auto& st : kStandards) {
          const MachineParams p{lam, y, st.m1, st.m2};
          if (!p.analytic_feasible()) continue;
          const DeletionMachine m = s.machine(p);
          for (double a2 : kAlpha2) {
            for (double ph : kPhases) visit(m, QubitState::from_alpha2(a2, ph));
          }
        }
      }
    }
  };
  s.check({"7a", "conventional retained state vs closed form", "rho1 closed form",
           "entrywise", "", 1e-10},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for_full_grid([&](const DeletionMachine& m, const QubitState& in) {
              const auto r = s.run(m, in, false);
              const auto cf = closed_rho1(in.alpha2(), m.params().lambda);
              worst = std::max(worst, max_abs(r.retained.matrix() - cf.matrix()));
            });
            set_result(c, worst);
          });
  s.check({"7b", "conventional deleted state vs closed form", "rho2 closed form",
           "entrywise", "", 1e-10},
          [&](SelfTestCheck& c) {
            double worst = 0.0;
            for_full_grid([&](const DeletionMachine& m, const QubitState& in) {
              const auto r = s.run(m, in, false);
              const auto cf = closed_rho2(in.alpha2(), m.params().lambda, m.standard());
              worst = std::max(worst, max_abs(r.deleted.matrix() - cf.matrix()));
            });
            set_result(c, worst);
          });

  // Worst entrywise gap of the primed closed forms at one λ over α², β phase
  // and the three standard states.
  auto primed_gap = [&](double lam) {
    std::pair<double, double> worst{0.0, 0.0};
    for (const auto& st : kStandards) {
      const DeletionMachine m = s.machine({lam, 0.0, st.m1, st.m2});
      for (double a2 : kAlpha2) {
        for (double ph : kPhases) {
          const auto r = s.run(m, QubitState::from_alpha2(a2, ph), true);
          const auto c1 = closed_rho1_prime(a2, ph, lam, m.standard());
          const auto c2 = closed_rho2_prime(a2, ph, lam, m.standard());
          worst.first = std::max(worst.first, max_abs(r.retained.matrix() - c1.matrix()));
          worst.second = std::max(worst.second, max_abs(r.deleted.matrix() - c2.matrix()));
        }
      }
    }
    return worst;
  };
  s.check({"7c", "modified retained state vs closed form at lambda=1/2", "rho'1 closed form",
           "entrywise", "", 1e-10},
          [&](SelfTestCheck& c) { set_result(c, primed_gap(0.5).first); });
  s.check({"7d", "modified deleted state vs closed form at lambda=1/2", "rho'2 closed form",
           "entrywise", "", 1e-10},
          [&](SelfTestCheck& c) { set_result(c, primed_gap(0.5).second); });
  s.check({"7e", "modified closed forms at lambda=1/2-1e-4", "rho'1, rho'2 closed forms",
           "entrywise", "", 1e-3},
          [&](SelfTestCheck& c) {
            const auto [g1, g2] = primed_gap(0.5 - 1e-4);
            set_result(c, std::max(g1, g2));
          });
  s.check({"7f", "modified closed forms at general lambda (report only)",
           "rho'1, rho'2 closed forms", "pipeline is authoritative", "", 1e-10},
          [&](SelfTestCheck& c) {
            c.gating = false;
            double g1 = 0.0, g2 = 0.0;
            for (double lam : {0.0, 0.1, 0.2, 0.3, 0.4}) {
              const auto [a, b] = primed_gap(lam);
              g1 = std::max(g1, a);
              g2 = std::max(g2, b);
            }
            c.observed = fmt::format("max gap rho'1 {}, rho'2 {}", sci(g1), sci(g2));
            c.pass = std::max(g1, g2) <= c.tolerance;
          });

  // 8. Classification.
  auto classify_check = [&](std::string id, std::string label, double lam, bool transform,
                            Classification want) {
    s.check({std::move(id), std::move(label), "machine classification",
             classification_name(want), "", 1e-9},
            [&](SelfTestCheck& c) {
              MachineParams p = headline;
              p.lambda = lam;
              const MachineClass mc = classify_machine(s.machine(p), transform, s.observer());
              c.observed = fmt::format("{} (spreads Fa {}, Fb {}, Fc {})",
                                       classification_name(mc.kind), sci(mc.spread_a),
                                       sci(mc.spread_b), sci(mc.spread_c));
              c.pass = mc.kind == want;
            });
  };
  classify_check("8a", "conventional machine at lambda=1/2", 0.5, false, Classification::ideal);
  classify_check("8b", "conventional machine at lambda=0.2", 0.2, false,
                 Classification::universal);
  classify_check("8c", "modified machine at lambda=1/2-1e-6", 0.5 - 1e-6, true,
                 Classification::universal);

  // 9. Feasibility boundary.
  s.check({"9", "eigenvalue feasibility agrees with 3Y^2 <= 1-2lambda (50x50 grid)",
           "Gram PSD", "0 disagreements", "", 1e-12},
          [&](SelfTestCheck& c) {
            int disagree = 0, feasible = 0;
            for (double lam : linspace(0.0, 0.5, 50)) {
              for (double y : linspace(0.0, 0.6, 50)) {
                GramMatrix g = build_gram({lam, y, kInvSqrt2, {kInvSqrt2, 0.0}});
                if (options.corrupt_gram) g.set(B0, C0, 0.1);
                const FeasibilityRecord rec = check_feasible(g);
                if (!rec.agree()) ++disagree;
                if (rec.feasible) ++feasible;
              }
            }
            c.observed = fmt::format("{} disagreements ({} feasible of 2500)", disagree, feasible);
            c.pass = disagree == 0;
          });

  // 10. Every reduced operator seen above is a valid density operator.
  s.check({"10", "density validity of every reduced operator", "rho valid",
           "trace 1, Hermitian, PSD", "", 1e-10},
          [&](SelfTestCheck& c) {
            c.observed = fmt::format(
                "{} operators, {} invalid; worst herm {}, trace {}, min eig {}", s.audited_,
                s.audit_failures_, sci(s.worst_herm_), sci(s.worst_trace_), sci(s.min_eig_));
            c.pass = s.audited_ > 0 && s.audit_failures_ == 0;
          });

  return std::move(s.report());
}

std::string format_selftest(const SelfTestReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    const char* status = !c.gating ? "INFO" : (c.pass ? "PASS" : "FAIL");
    out += fmt::format("[{}] {:<3} {} | {} | expected {} (tol {}) | observed {}\n", status,
                       c.id, c.name, c.anchor, c.expected, sci(c.tolerance), c.observed);
  }
  out += fmt::format("overall: {}\n", report.pass() ? "PASS" : "FAIL");
  return out;
}

}  // namespace qdel
