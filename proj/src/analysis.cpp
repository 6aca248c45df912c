#include "qdel/analysis.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string_view>

#include <fmt/format.h>

#include "qdel/errors.hpp"

namespace qdel {

namespace {

using enum MachineVector;

void check_alpha2(double alpha2) {
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) {
    throw InvalidInput(fmt::format("alpha2 must lie in [0, 1], got {}", alpha2));
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 0.5)) {
    throw InvalidInput(fmt::format("lambda must lie in [0, 1/2], got {}", lambda));
  }
}

DensityOp qubit_op(const CMatrix& m, Mode mode) { return DensityOp(m, {2}, {mode}); }

// Polynomial weights shared by the primed closed forms.
struct Moments {
  double a4, ab, b4, c;
};

Moments moments(double alpha2, double lambda) {
  const double b2 = 1.0 - alpha2;
  return {alpha2 * alpha2, alpha2 * b2, b2 * b2, 1.0 - 2.0 * lambda};
}

constexpr std::array<double, 11> kProbeAlpha2 = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                                 0.6, 0.7, 0.8, 0.9, 1.0};
constexpr std::array<double, 4> kProbePhases = {0.0, std::numbers::pi / 2,
                                                std::numbers::pi,
                                                3 * std::numbers::pi / 2};

}  // namespace

double clamp_fidelity(double f) {
  if (f < 0.0 && f >= -kFidelityClampTol) return 0.0;
  if (f > 1.0 && f <= 1.0 + kFidelityClampTol) return 1.0;
  return f;
}

double closed_F1(double alpha2, double lambda) {
  check_alpha2(alpha2);
  check_lambda(lambda);
  return (1.0 - lambda) + 2.0 * alpha2 * (1.0 - alpha2) * (2.0 * lambda - 1.0);
}

DensityOp closed_rho1(double alpha2, double lambda) {
  check_alpha2(alpha2);
  check_lambda(lambda);
  const double b2 = 1.0 - alpha2;
  const double a4 = alpha2 * alpha2, ab = alpha2 * b2, b4 = b2 * b2;
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a4 * (1.0 - lambda) + ab + b4 * lambda;
  m(1, 1) = a4 * lambda + ab + b4 * (1.0 - lambda);
  return qubit_op(m, Mode::retained);
}

DensityOp closed_rho2(double alpha2, double lambda, const StandardState& s) {
  check_alpha2(alpha2);
  check_lambda(lambda);
  const double b2 = 1.0 - alpha2;
  const double a4 = alpha2 * alpha2, ab = alpha2 * b2, b4 = b2 * b2;
  const double diag = a4 * lambda + 2.0 * ab * lambda + b4 * lambda;
  CMatrix m = diag * CMatrix::Identity(2, 2);
  m += alpha2 * (1.0 - 2.0 * lambda) * s.sigma * s.sigma.adjoint();
  m += b2 * (1.0 - 2.0 * lambda) * s.sigma_perp * s.sigma_perp.adjoint();
  return qubit_op(m, Mode::deleted);
}

KSum closed_K(const StandardState& s) {
  // ⟨Σ|0⟩ = ⟨Σ⊥|1⟩ = m1, ⟨Σ|1⟩ = m2*, ⟨Σ⊥|0⟩ = -m2
  const cplx sig0 = s.m1, sig1 = std::conj(s.m2);
  const cplx perp0 = -s.m2, perp1 = s.m1;
  KSum k;
  k.k1 = std::norm(sig0) + std::norm(sig1) + sig0 * std::conj(perp0) +
         sig1 * std::conj(perp1);
  k.k2 = std::norm(perp0) + std::norm(perp1) + perp0 * std::conj(sig0) +
         perp1 * std::conj(sig1);
  return k;
}

double closed_F2(double lambda, const StandardState& s) {
  check_lambda(lambda);
  return 0.5 * ((1.0 - 2.0 * lambda) + closed_K(s).sum().real() * lambda);
}

OverlapCheck machine_overlap(const DensityOp& rho3, const CVector& a, double y) {
  if (a.size() != rho3.matrix().rows()) {
    throw InvalidInput("machine_overlap: dimension mismatch");
  }
  return OverlapCheck{sandwich(rho3.matrix(), a).real(), y * y};
}

DensityOp closed_rho1_prime(double alpha2, double /*beta_phase*/, double lambda,
                            const StandardState& s) {
  check_alpha2(alpha2);
  check_lambda(lambda);
  const auto [a4, ab, b4, c] = moments(alpha2, lambda);
  const double m1 = s.m1, m1s = m1 * m1;
  const cplx m2 = s.m2, m2c = std::conj(m2);
  const double p = std::norm(m2);
  const double sr = (m1 * (m2 + m2c)).real();
  const double r2 = 1.0 / std::sqrt(2.0);

  CMatrix m(2, 2);
  m(0, 0) = 0.5 * (a4 * (m1s * c + lambda) + ab * ((3 * p - sr + m1s) * c + 2 * lambda) +
                   b4 * ((p + 2 * m1s) * c + lambda));
  m(0, 1) = r2 * (a4 * (m1 * m2c * c + lambda) +
                  ab * (2 * lambda + (m1s - m2 * m2 - sr) * c) +
                  b4 * (lambda + m1 * m2 * c));
  m(1, 0) = r2 * (a4 * (m1 * m2 * c + lambda) +
                  ab * (2 * lambda + (m1s - m2c * m2c - sr) * c) +
                  b4 * (lambda + m1 * m2c * c));
  m(1, 1) = 0.5 * (a4 * ((m1s + 2 * p) * c + 3 * lambda) +
                   ab * ((p + sr + 3 * m1s) * c + 6 * lambda) + b4 * (p * c + 3 * lambda));
  return qubit_op(m, Mode::retained);
}

double closed_F3(double alpha, cplx beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidInput(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  return 0.75 - 0.5 * alpha * alpha +
         alpha * (beta + std::conj(beta)).real() / (2.0 * std::sqrt(2.0));
}

DensityOp closed_rho2_prime(double alpha2, double /*beta_phase*/, double lambda,
                            const StandardState& s) {
  check_alpha2(alpha2);
  check_lambda(lambda);
  const auto [a4, ab, b4, c] = moments(alpha2, lambda);
  const double m1 = s.m1, m1s = m1 * m1;
  const cplx m2 = s.m2, m2c = std::conj(m2);
  const double p = std::norm(m2);
  const double sr = (m1 * (m2 + m2c)).real();
  const double r2 = 1.0 / std::sqrt(2.0);

  CMatrix m(2, 2);
  m(0, 0) = 0.5 * (a4 * (m1s * c + lambda) + ab * ((3 * p + sr + m1s) * c + 2 * lambda) +
                   b4 * ((p + 2 * m1s) * c + lambda));
  m(0, 1) = r2 * (a4 * (m1 * m2c * c - lambda) -
                  ab * ((m1s + m2 * m2 + m1 * (m2c - m2)) * c + 2 * lambda) -
                  b4 * (lambda + m1 * m2 * c));
  m(1, 0) = r2 * (a4 * (m1 * m2 * c - lambda) -
                  ab * ((m1s + m2c * m2c + m1 * (m2 - m2c)) * c + 2 * lambda) -
                  b4 * (lambda + m1 * m2c * c));
  m(1, 1) = 0.5 * (a4 * ((m1s + 2 * p) * c + 3 * lambda) +
                   ab * ((p - sr + 3 * m1s) * c + 6 * lambda) + b4 * (p * c + 3 * lambda));
  return qubit_op(m, Mode::deleted);
}

RTerms closed_R(double alpha2, double beta_phase, double lambda, const StandardState& s) {
  const DensityOp rho = closed_rho2_prime(alpha2, beta_phase, lambda, s);
  return RTerms{rho(0, 0), rho(1, 1), rho(0, 1), rho(1, 0)};
}

double closed_F4(double alpha2, double beta_phase, double lambda, const StandardState& s) {
  const RTerms r = closed_R(alpha2, beta_phase, lambda, s);
  const cplx m1 = s.m1, m2 = s.m2, m2c = std::conj(s.m2);
  const cplx f = 0.5 * (r.r1 * (m1 - m2) * (m1 - m2c) + r.r2 * (m1 + m2) * (m1 + m2c) +
                        r.r3 * (m1 - m2) * (m1 + m2) + r.r4 * (m1 - m2c) * (m1 + m2c));
  return f.real();
}

int default_quad_nodes() {
  const char* env = std::getenv("QDEL_QUAD_NODES");
  if (env == nullptr) return kDefaultQuadNodes;
  const std::string_view text(env);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 3 ||
      value % 2 == 0) {
    return kDefaultQuadNodes;
  }
  return value;
}

double average_fidelity(const std::function<double(double)>& f, int nodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw InvalidInput(fmt::format("quadrature needs an odd node count >= 3, got {}", nodes));
  }
  const int intervals = nodes - 1;
  const double h = 1.0 / intervals;
  double acc = 0.0, norm = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double t = i * h;
    // dα²/dt = (π/2) sin(πt); the common factor cancels under normalization
    const double w = simpson * std::sin(std::numbers::pi * t);
    if (w == 0.0) continue;
    const double x = std::clamp(0.5 * (1.0 - std::cos(std::numbers::pi * t)), 0.0, 1.0);
    acc += w * f(x);
    norm += w;
  }
  return acc / norm;
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::state_dependent:
      return "state-dependent";
    case Classification::universal:
      return "universal";
    case Classification::ideal:
      return "ideal";
  }
  return "?";
}

namespace {

struct PointFidelities {
  double fa, fb, fc;
};

PointFidelities point_fidelities(const DeletionMachine& machine, const QubitState& input,
                                 bool with_transformer,
                                 const PipelineObserver& observer = {}) {
  const PipelineResult r = machine.run(input, with_transformer);
  if (observer) observer(r);
  return {expectation(r.retained, input.amplitudes()),
          expectation(r.deleted, machine.standard().sigma_prime),
          sandwich(r.machine.matrix(), machine.basis()[A]).real()};
}

}  // namespace

FidelityReport evaluate(const DeletionMachine& machine, const QubitState& input,
                        bool with_transformer) {
  const MachineParams& p = machine.params();
  const StandardState& s = machine.standard();
  const double a2 = input.alpha2();
  const double phase = input.beta_phase();

  FidelityReport rep;
  rep.alpha2 = a2;
  rep.beta_phase = phase;
  rep.params = p;
  rep.transformer = with_transformer;

  const PointFidelities conv = point_fidelities(machine, input, false);
  const PointFidelities mod = point_fidelities(machine, input, true);

  rep.f1 = {conv.fa, closed_F1(a2, p.lambda)};
  rep.f2 = {conv.fb, closed_F2(p.lambda, s)};
  rep.fc = {conv.fc, p.y * p.y};
  rep.f3 = {mod.fa, expectation(closed_rho1_prime(a2, phase, p.lambda, s),
                                input.amplitudes())};
  rep.f4 = {mod.fb, closed_F4(a2, phase, p.lambda, s)};
  rep.fc_prime = {mod.fc, p.y * p.y};
  rep.classification = classify_machine(machine, with_transformer);
  return rep;
}

FidelityReport evaluate(const MachineParams& params, const QubitState& input,
                        bool with_transformer) {
  return evaluate(DeletionMachine(params), input, with_transformer);
}

MachineClass classify_machine(const DeletionMachine& machine, bool with_transformer,
                              const PipelineObserver& observer) {
  double lo[3] = {1e300, 1e300, 1e300};
  double hi[3] = {-1e300, -1e300, -1e300};
  double sum_a = 0.0, sum_b = 0.0;
  int count = 0;
  for (double a2 : kProbeAlpha2) {
    for (double phase : kProbePhases) {
      const PointFidelities f =
          point_fidelities(machine, QubitState::from_alpha2(a2, phase), with_transformer,
                           observer);
      const double vals[3] = {f.fa, f.fb, f.fc};
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], vals[k]);
        hi[k] = std::max(hi[k], vals[k]);
      }
      sum_a += f.fa;
      sum_b += f.fb;
      ++count;
    }
  }
  MachineClass mc;
  mc.spread_a = hi[0] - lo[0];
  mc.spread_b = hi[1] - lo[1];
  mc.spread_c = hi[2] - lo[2];
  mc.mean_a = sum_a / count;
  mc.mean_b = sum_b / count;
  const bool const_a = mc.spread_a < kConstancyTol;
  const bool const_b = mc.spread_b < kConstancyTol;
  const bool const_c = mc.spread_c < kConstancyTol;
  if (const_a && const_b && const_c) {
    mc.kind = Classification::ideal;
  } else if (const_b && const_c) {
    mc.kind = Classification::universal;
  } else {
    mc.kind = Classification::state_dependent;
  }
  if (std::abs(mc.mean_b - 0.75) <= 1e-3) {
    mc.optimality_note = fmt::format("F_b = {:.6f} reaches the 3/4 deletion bound", mc.mean_b);
  } else {
    mc.optimality_note =
        fmt::format("F_b = {:.6f} is below the 3/4 deletion bound; not optimal", mc.mean_b);
  }
  return mc;
}

MachineClass classify_machine(const MachineParams& params, bool with_transformer) {
  return classify_machine(DeletionMachine(params), with_transformer);
}

}  // namespace qdel
