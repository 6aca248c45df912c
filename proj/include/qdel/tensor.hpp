#pragma once

// Dense complex linear algebra over small labeled tensor-product spaces.
//
// Modes are ordered globally as (retained, deleted, machine) and every
// flattening is row-major over that order: the last listed factor varies
// fastest.

#include <complex>
#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdel {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = -1e-10;

enum class Mode : int { retained = 1, deleted = 2, machine = 3 };

const char* mode_name(Mode m);

// α|0⟩ + β|1⟩ with α real, β = |β| e^{iφ}.
class QubitState {
 public:
  // The phase is reduced into [0, 2π).
  QubitState(double alpha, double beta_modulus, double beta_phase);

  // α = √alpha2, |β| = √(1 - alpha2).
  static QubitState from_alpha2(double alpha2, double beta_phase = 0.0);

  double alpha() const { return alpha_; }
  double alpha2() const { return alpha_ * alpha_; }
  double beta_modulus() const { return beta_modulus_; }
  double beta_phase() const { return beta_phase_; }
  cplx beta() const { return std::polar(beta_modulus_, beta_phase_); }
  CVector amplitudes() const;

 private:
  double alpha_;
  double beta_modulus_;
  double beta_phase_;
};

class StateVector {
 public:
  StateVector(CVector amplitudes, std::vector<std::size_t> dims,
              std::vector<Mode> modes);

  static StateVector basis(std::size_t dim, std::size_t index, Mode mode);
  static StateVector qubit(const QubitState& q, Mode mode);
  static StateVector single(CVector amplitudes, Mode mode);

  const CVector& amplitudes() const { return amplitudes_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized() const;

 private:
  CVector amplitudes_;
  std::vector<std::size_t> dims_;
  std::vector<Mode> modes_;
};

class DensityOp {
 public:
  DensityOp(CMatrix matrix, std::vector<std::size_t> dims,
            std::vector<Mode> modes);

  const CMatrix& matrix() const { return matrix_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<Mode>& modes() const { return modes_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }
  cplx trace() const { return matrix_.trace(); }

 private:
  CMatrix matrix_;
  std::vector<std::size_t> dims_;
  std::vector<Mode> modes_;
};

struct DensityDiagnostics {
  double hermiticity_deviation = 0.0;  // max |ρ - ρ†| entrywise
  double trace_deviation = 0.0;        // |tr ρ - 1|
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool pass() const { return hermitian && unit_trace && positive; }
};

// Kronecker product in factor order. Mode labels must be distinct.
StateVector tensor_product(std::span<const StateVector> factors);
DensityOp tensor_product(const DensityOp& lhs, const DensityOp& rhs);

CMatrix kron(const CMatrix& lhs, const CMatrix& rhs);

// |s⟩⟨s| for a normalized state.
DensityOp density_of(const StateVector& state);

// Traces out every mode not in `keep`. Kept modes stay in their original order.
DensityOp partial_trace(const DensityOp& rho, const std::set<Mode>& keep);

// ⟨φ|ρ|φ⟩ without discarding the imaginary part.
cplx sandwich(const CMatrix& rho, const CVector& phi);

// Real part of ⟨φ|ρ|φ⟩; φ must be normalized and match ρ's dimensions.
double expectation(const DensityOp& rho, const StateVector& phi);
double expectation(const DensityOp& rho, const CVector& phi);

DensityDiagnostics validate_density(const CMatrix& rho);
DensityDiagnostics validate_density(const DensityOp& rho);

}  // namespace qdel
