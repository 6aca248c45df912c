#include "qdel/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qdel/errors.hpp"

namespace qdel {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void check_labels(const std::vector<std::size_t>& dims,
                  const std::vector<Mode>& modes) {
  if (dims.size() != modes.size()) {
    throw InvalidInput("dims and mode labels differ in length");
  }
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; })) {
    throw InvalidInput("factor dimension must be at least 1");
  }
  std::vector<Mode> sorted = modes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("duplicate mode label");
  }
}

// Row-major digits of `flat` over `dims`.
std::vector<std::size_t> digits_of(std::size_t flat,
                                   const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = flat % dims[k];
    flat /= dims[k];
  }
  return out;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::retained:
      return "retained";
    case Mode::deleted:
      return "deleted";
    case Mode::machine:
      return "machine";
  }
  return "?";
}

QubitState::QubitState(double alpha, double beta_modulus, double beta_phase)
    : alpha_(alpha), beta_modulus_(beta_modulus) {
  if (!(alpha >= 0.0 && alpha <= 1.0) ||
      !(beta_modulus >= 0.0 && beta_modulus <= 1.0)) {
    throw InvalidInput("qubit amplitudes must lie in [0, 1]");
  }
  if (std::abs(alpha * alpha + beta_modulus * beta_modulus - 1.0) > kNormTol) {
    throw InvalidInput("qubit state is not normalized: alpha^2 + |beta|^2 = " +
                       std::to_string(alpha * alpha + beta_modulus * beta_modulus));
  }
  if (!std::isfinite(beta_phase)) {
    throw InvalidInput("beta phase must be finite");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(beta_phase, two_pi);
  if (phase < 0.0) phase += two_pi;
  if (phase >= two_pi) phase = 0.0;
  beta_phase_ = phase;
}

QubitState QubitState::from_alpha2(double alpha2, double beta_phase) {
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) {
    throw InvalidInput("alpha2 must lie in [0, 1]");
  }
  return QubitState(std::sqrt(alpha2), std::sqrt(1.0 - alpha2), beta_phase);
}

CVector QubitState::amplitudes() const {
  CVector v(2);
  v << cplx(alpha_, 0.0), beta();
  return v;
}

StateVector::StateVector(CVector amplitudes, std::vector<std::size_t> dims,
                         std::vector<Mode> modes)
    : amplitudes_(std::move(amplitudes)),
      dims_(std::move(dims)),
      modes_(std::move(modes)) {
  check_labels(dims_, modes_);
  if (static_cast<std::size_t>(amplitudes_.size()) != product(dims_)) {
    throw InvalidInput("amplitude count does not match product of dims");
  }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index, Mode mode) {
  if (index >= dim) throw InvalidInput("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v), {dim}, {mode});
}

StateVector StateVector::qubit(const QubitState& q, Mode mode) {
  return StateVector(q.amplitudes(), {2}, {mode});
}

StateVector StateVector::single(CVector amplitudes, Mode mode) {
  const auto dim = static_cast<std::size_t>(amplitudes.size());
  return StateVector(std::move(amplitudes), {dim}, {mode});
}

bool StateVector::is_normalized() const {
  return std::abs(amplitudes_.squaredNorm() - 1.0) <= kNormTol;
}

DensityOp::DensityOp(CMatrix matrix, std::vector<std::size_t> dims,
                     std::vector<Mode> modes)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), modes_(std::move(modes)) {
  check_labels(dims_, modes_);
  const auto n = static_cast<Eigen::Index>(product(dims_));
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw InvalidInput("density matrix shape does not match product of dims");
  }
}

CMatrix kron(const CMatrix& lhs, const CMatrix& rhs) {
  CMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) =
          lhs(i, j) * rhs;
    }
  }
  return out;
}

StateVector tensor_product(std::span<const StateVector> factors) {
  if (factors.empty()) throw InvalidInput("tensor_product of an empty factor list");
  CMatrix acc = factors.front().amplitudes();
  std::vector<std::size_t> dims = factors.front().dims();
  std::vector<Mode> modes = factors.front().modes();
  for (const auto& f : factors.subspan(1)) {
    acc = kron(acc, f.amplitudes());
    dims.insert(dims.end(), f.dims().begin(), f.dims().end());
    modes.insert(modes.end(), f.modes().begin(), f.modes().end());
  }
  return StateVector(acc.col(0), std::move(dims), std::move(modes));
}

DensityOp tensor_product(const DensityOp& lhs, const DensityOp& rhs) {
  std::vector<std::size_t> dims = lhs.dims();
  dims.insert(dims.end(), rhs.dims().begin(), rhs.dims().end());
  std::vector<Mode> modes = lhs.modes();
  modes.insert(modes.end(), rhs.modes().begin(), rhs.modes().end());
  return DensityOp(kron(lhs.matrix(), rhs.matrix()), std::move(dims),
                   std::move(modes));
}

DensityOp density_of(const StateVector& state) {
  if (!state.is_normalized()) {
    throw InvalidInput("density_of requires a normalized state (norm^2 = " +
                       std::to_string(state.amplitudes().squaredNorm()) + ")");
  }
  const CVector& s = state.amplitudes();
  return DensityOp(s * s.adjoint(), state.dims(), state.modes());
}

DensityOp partial_trace(const DensityOp& rho, const std::set<Mode>& keep) {
  if (keep.empty()) throw InvalidInput("partial_trace must keep at least one mode");
  const auto& modes = rho.modes();
  const auto& dims = rho.dims();
  for (Mode m : keep) {
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) {
      throw InvalidInput(std::string("partial_trace: mode '") + mode_name(m) +
                         "' is not present");
    }
  }
  if (keep.size() == modes.size()) return rho;

  std::vector<std::size_t> kept_dims, traced_dims;
  std::vector<Mode> kept_modes;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (keep.contains(modes[k])) {
      kept_dims.push_back(dims[k]);
      kept_modes.push_back(modes[k]);
    } else {
      traced_dims.push_back(dims[k]);
    }
  }

  // Split each flat index into (kept, traced) sub-indices.
  const std::size_t n = product(dims);
  std::vector<std::size_t> kept_index(n), traced_index(n);
  for (std::size_t f = 0; f < n; ++f) {
    const auto digits = digits_of(f, dims);
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      if (keep.contains(modes[k])) {
        ki = ki * dims[k] + digits[k];
      } else {
        ti = ti * dims[k] + digits[k];
      }
    }
    kept_index[f] = ki;
    traced_index[f] = ti;
  }

  const auto nk = static_cast<Eigen::Index>(product(kept_dims));
  CMatrix out = CMatrix::Zero(nk, nk);
  const CMatrix& m = rho.matrix();
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = 0; g < n; ++g) {
      if (traced_index[f] != traced_index[g]) continue;
      out(static_cast<Eigen::Index>(kept_index[f]),
          static_cast<Eigen::Index>(kept_index[g])) +=
          m(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g));
    }
  }
  return DensityOp(std::move(out), std::move(kept_dims), std::move(kept_modes));
}

cplx sandwich(const CMatrix& rho, const CVector& phi) {
  return phi.dot(rho * phi);  // Eigen's dot conjugates the left operand
}

double expectation(const DensityOp& rho, const CVector& phi) {
  if (phi.size() != rho.matrix().rows()) {
    throw InvalidInput("expectation: dimension mismatch (" +
                       std::to_string(phi.size()) + " vs " +
                       std::to_string(rho.matrix().rows()) + ")");
  }
  if (std::abs(phi.squaredNorm() - 1.0) > kNormTol) {
    throw InvalidInput("expectation: probe state is not normalized");
  }
  return sandwich(rho.matrix(), phi).real();
}

double expectation(const DensityOp& rho, const StateVector& phi) {
  if (phi.dims() != rho.dims()) {
    throw InvalidInput("expectation: factor dimensions differ");
  }
  return expectation(rho, phi.amplitudes());
}

DensityDiagnostics validate_density(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw InvalidInput("validate_density requires a non-empty square matrix");
  }
  DensityDiagnostics d;
  d.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_deviation = std::abs(rho.trace() - cplx(1.0, 0.0));
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.max_eigenvalue = es.eigenvalues().maxCoeff();
  d.hermitian = d.hermiticity_deviation <= kHermitianTol;
  d.unit_trace = d.trace_deviation <= kTraceTol;
  d.positive = d.min_eigenvalue >= kPsdTol;
  return d;
}

DensityDiagnostics validate_density(const DensityOp& rho) {
  return validate_density(rho.matrix());
}

}  // namespace qdel
