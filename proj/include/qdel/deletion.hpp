#pragma once

// The deleter isometry and the two-qubit transformer gate, plus the
// conventional (deleter only) and modified (deleter then transformer)
// pipelines.

#include <array>
#include <cstddef>

#include "qdel/machine.hpp"
#include "qdel/tensor.hpp"

namespace qdel {

inline constexpr double kIsometryTol = 1e-12;
inline constexpr double kUnitarityTol = 1e-14;

// Computational-basis inputs of modes (retained, deleted): 00, 01, 10, 11.
inline constexpr std::array<const char*, 4> kInputLabels = {"00", "01", "10", "11"};

struct DeleterMap {
  // Images of |ij⟩|A⟩ in dims (2, 2, d), indexed 2i + j.
  std::array<StateVector, 4> images;
  std::size_t machine_dim = 0;
};

struct IsometryResidual {
  double max_residual = 0.0;  // max |⟨image_i|image_j⟩ - δ_ij|
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  bool pass() const { return max_residual < kIsometryTol; }
};

struct TransformerGate {
  Eigen::Matrix4cd matrix;
};

struct PipelineResult {
  DensityOp joint;     // ρ123 or ρ'123
  DensityOp retained;  // mode 1
  DensityOp deleted;   // mode 2
  DensityOp machine;   // mode 3
  bool transformed = false;
};

DeleterMap build_deleter(const MachineBasis& basis, const StandardState& std_state);

IsometryResidual verify_isometry(const DeleterMap& map);

// U(|ψ⟩|ψ⟩|A⟩) by linear extension with coefficients α², αβ, αβ, β².
StateVector apply_deleter(const QubitState& input, const DeleterMap& map);

// Columns in input order 00, 01, 10, 11: |ψ+⟩, |11⟩, |ψ-⟩, |00⟩.
TransformerGate build_transformer();

// max |T†T - I| entrywise.
double unitarity_residual(const TransformerGate& gate);

// (T on modes 1, 2) ⊗ I on the machine mode.
DensityOp apply_transformer(const DensityOp& rho, const TransformerGate& gate);

// A fully constructed machine instance. The component constructor exists so
// that tests and the self-test can run the pipeline on deliberately broken
// parts.
class DeletionMachine {
 public:
  // Validates params (throws InvalidInput / Infeasible) and builds every part.
  explicit DeletionMachine(const MachineParams& params);
  DeletionMachine(const MachineParams& params, MachineBasis basis,
                  StandardState std_state, TransformerGate gate);

  const MachineParams& params() const { return params_; }
  const MachineBasis& basis() const { return basis_; }
  const StandardState& standard() const { return std_state_; }
  const DeleterMap& deleter() const { return deleter_; }
  const TransformerGate& transformer() const { return gate_; }

  StateVector output_state(const QubitState& input) const;
  PipelineResult run(const QubitState& input, bool with_transformer) const;

 private:
  MachineParams params_;
  MachineBasis basis_;
  StandardState std_state_;
  TransformerGate gate_;
  DeleterMap deleter_;
};

PipelineResult run_pipeline(const QubitState& input, const MachineParams& params,
                            bool with_transformer);

}  // namespace qdel
