#pragma once

// Closed-form reduced states and fidelities, average-fidelity quadrature,
// numeric-vs-closed-form reports and machine classification.

#include <functional>
#include <string>

#include "qdel/deletion.hpp"
#include "qdel/machine.hpp"
#include "qdel/tensor.hpp"

namespace qdel {

inline constexpr int kDefaultQuadNodes = 2001;
inline constexpr double kConstancyTol = 1e-9;
inline constexpr double kFidelityClampTol = 1e-10;

// ---- conventional machine -------------------------------------------------

// (1-λ) + 2α²(1-α²)(2λ-1)
double closed_F1(double alpha2, double lambda);

// Diagonal reduced state of the retained qubit.
DensityOp closed_rho1(double alpha2, double lambda);

// λ·I + α²(1-2λ)|Σ⟩⟨Σ| + |β|²(1-2λ)|Σ⊥⟩⟨Σ⊥|
DensityOp closed_rho2(double alpha2, double lambda, const StandardState& s);

struct KSum {
  cplx k1;
  cplx k2;
  cplx sum() const { return k1 + k2; }
};

// K1, K2 with the squared overlaps taken as |⟨Σ|k⟩|².
KSum closed_K(const StandardState& s);

// (1/2)[(1-2λ) + (K1+K2)λ]; equals 1/2 for every standard state.
double closed_F2(double lambda, const StandardState& s);

struct OverlapCheck {
  double value = 0.0;     // ⟨A|ρ3|A⟩
  double expected = 0.0;  // Y²
  double diff() const { return std::abs(value - expected); }
};

OverlapCheck machine_overlap(const DensityOp& rho3, const CVector& a, double y);

// ---- modified machine -------------------------------------------------------

// Retained-qubit state after the transformer, evaluated term by term.
// beta_phase does not enter: the expression only involves |β|².
DensityOp closed_rho1_prime(double alpha2, double beta_phase, double lambda,
                            const StandardState& s);

// λ → 1/2 limit of ⟨ψ|ρ'1|ψ⟩: 3/4 - α²/2 + α(β+β*)/(2√2).
double closed_F3(double alpha, cplx beta);

DensityOp closed_rho2_prime(double alpha2, double beta_phase, double lambda,
                            const StandardState& s);

// R1..R4 are the (00, 11, 01, 10) entries of closed_rho2_prime.
struct RTerms {
  cplx r1, r2, r3, r4;
};
RTerms closed_R(double alpha2, double beta_phase, double lambda, const StandardState& s);

double closed_F4(double alpha2, double beta_phase, double lambda, const StandardState& s);

// ---- quadrature ------------------------------------------------------------

// QDEL_QUAD_NODES when set to a valid odd integer ≥ 3, otherwise 2001.
int default_quad_nodes();

// ∫₀¹ f(α²) dα² by composite Simpson in t, with α² = (1 - cos πt)/2.
// The weights are normalized so that constants integrate exactly.
// Throws InvalidInput when nodes < 3 or nodes is even.
double average_fidelity(const std::function<double(double)>& f,
                        int nodes = kDefaultQuadNodes);

// ---- reports -----------------------------------------------------------------

struct FidelityTriple {
  double numeric = 0.0;
  double closed = 0.0;
  double diff() const { return std::abs(numeric - closed); }
};

enum class Classification { state_dependent, universal, ideal };

const char* classification_name(Classification c);

struct MachineClass {
  Classification kind = Classification::state_dependent;
  double spread_a = 0.0;  // max - min of F_a over the probe grid
  double spread_b = 0.0;
  double spread_c = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::string optimality_note;
};

struct FidelityReport {
  double alpha2 = 0.0;
  double beta_phase = 0.0;
  MachineParams params;
  bool transformer = false;

  FidelityTriple f1, f2, fc;        // conventional
  FidelityTriple f3, f4, fc_prime;  // modified
  MachineClass classification;
};

// Both pipelines at one point. Classification refers to the machine selected
// by `with_transformer`.
FidelityReport evaluate(const DeletionMachine& machine, const QubitState& input,
                        bool with_transformer);
FidelityReport evaluate(const MachineParams& params, const QubitState& input,
                        bool with_transformer);

// Called with every pipeline result a probe produces.
using PipelineObserver = std::function<void(const PipelineResult&)>;

// Probes F_a, F_b, F_c over 11 values of α² × 4 phases of β.
MachineClass classify_machine(const DeletionMachine& machine, bool with_transformer,
                              const PipelineObserver& observer = {});
MachineClass classify_machine(const MachineParams& params, bool with_transformer);

// Clamps values within 1e-10 of [0, 1] onto the interval.
double clamp_fidelity(double f);

}  // namespace qdel
