#include "qdel/deletion.hpp"

#include <cmath>
#include <utility>

#include "qdel/errors.hpp"

namespace qdel {

namespace {

using enum MachineVector;

CVector ket(int bit) {
  CVector v = CVector::Zero(2);
  v(bit) = 1.0;
  return v;
}

// |a⟩_1 ⊗ |b⟩_2 ⊗ |m⟩_3 as a flat vector.
CVector triple(const CVector& a, const CVector& b, const CVector& m) {
  return kron(kron(a, b), m).col(0);
}

StateVector image(CVector amplitudes, std::size_t d) {
  return StateVector(std::move(amplitudes), {2, 2, d},
                     {Mode::retained, Mode::deleted, Mode::machine});
}

DeleterMap make_map(const MachineBasis& basis, const StandardState& s) {
  const std::size_t d = basis.dim;
  for (const auto& v : basis.vectors) {
    if (static_cast<std::size_t>(v.size()) != d) {
      throw InvalidInput("machine vectors do not share the basis dimension");
    }
  }
  if (s.sigma.size() != 2 || s.sigma_perp.size() != 2) {
    throw InvalidInput("standard state must be a qubit");
  }
  const CVector k0 = ket(0), k1 = ket(1);
  const CVector& sig = s.sigma;
  const CVector& perp = s.sigma_perp;

  // |0⟩|Σ⟩|A0⟩ + (|01⟩ + |10⟩)|B0⟩
  CVector i00 = triple(k0, sig, basis[A0]) + triple(k0, k1, basis[B0]) +
                triple(k1, k0, basis[B0]);
  // |0⟩|Σ⊥⟩|D0⟩ + |10⟩|C0⟩
  CVector i01 = triple(k0, perp, basis[D0]) + triple(k1, k0, basis[C0]);
  // |1⟩|Σ⟩|D0⟩ + |01⟩|C0⟩
  CVector i10 = triple(k1, sig, basis[D0]) + triple(k0, k1, basis[C0]);
  // |1⟩|Σ⊥⟩|A1⟩ + (|01⟩ + |10⟩)|B1⟩
  CVector i11 = triple(k1, perp, basis[A1]) + triple(k0, k1, basis[B1]) +
                triple(k1, k0, basis[B1]);

  return DeleterMap{{image(std::move(i00), d), image(std::move(i01), d),
                     image(std::move(i10), d), image(std::move(i11), d)},
                    d};
}

}  // namespace

DeleterMap build_deleter(const MachineBasis& basis, const StandardState& std_state) {
  return make_map(basis, std_state);
}

IsometryResidual verify_isometry(const DeleterMap& map) {
  IsometryResidual r;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      const cplx ip = map.images[i].amplitudes().dot(map.images[j].amplitudes());
      const double dev = std::abs(ip - (i == j ? cplx(1.0) : cplx(0.0)));
      if (dev > r.max_residual) {
        r.max_residual = dev;
        r.worst_i = i;
        r.worst_j = j;
      }
    }
  }
  return r;
}

StateVector apply_deleter(const QubitState& input, const DeleterMap& map) {
  const cplx a(input.alpha(), 0.0);
  const cplx b = input.beta();
  const std::array<cplx, 4> coeff = {a * a, a * b, a * b, b * b};
  CVector out = CVector::Zero(map.images[0].amplitudes().size());
  for (std::size_t k = 0; k < 4; ++k) out += coeff[k] * map.images[k].amplitudes();
  return StateVector(std::move(out), map.images[0].dims(), map.images[0].modes());
}

TransformerGate build_transformer() {
  const double h = 1.0 / std::sqrt(2.0);
  TransformerGate t;
  t.matrix.setZero();
  // T|00⟩ = |ψ+⟩
  t.matrix(1, 0) = h;
  t.matrix(2, 0) = h;
  // T|01⟩ = |11⟩
  t.matrix(3, 1) = 1.0;
  // T|10⟩ = |ψ-⟩
  t.matrix(1, 2) = h;
  t.matrix(2, 2) = -h;
  // T|11⟩ = |00⟩
  t.matrix(0, 3) = 1.0;
  return t;
}

double unitarity_residual(const TransformerGate& gate) {
  return (gate.matrix.adjoint() * gate.matrix - Eigen::Matrix4cd::Identity())
      .cwiseAbs()
      .maxCoeff();
}

DensityOp apply_transformer(const DensityOp& rho, const TransformerGate& gate) {
  const auto& dims = rho.dims();
  const auto& modes = rho.modes();
  if (dims.size() != 3 || modes[0] != Mode::retained || modes[1] != Mode::deleted ||
      modes[2] != Mode::machine || dims[0] != 2 || dims[1] != 2) {
    throw InvalidInput("apply_transformer expects an operator on modes (1, 2, 3)");
  }
  const auto d = static_cast<Eigen::Index>(dims[2]);
  if (rho.matrix().rows() != 4 * d) {
    throw InvalidInput("apply_transformer: machine dimension mismatch");
  }
  const CMatrix u = kron(gate.matrix, CMatrix::Identity(d, d));
  return DensityOp(u * rho.matrix() * u.adjoint(), dims, modes);
}

DeletionMachine::DeletionMachine(const MachineParams& params)
    : params_(params),
      basis_((params.validate(), realize_vectors(build_gram(params)))),
      std_state_(standard_state(params.m1, params.m2)),
      gate_(build_transformer()),
      deleter_(build_deleter(basis_, std_state_)) {}

DeletionMachine::DeletionMachine(const MachineParams& params, MachineBasis basis,
                                 StandardState std_state, TransformerGate gate)
    : params_(params),
      basis_(std::move(basis)),
      std_state_(std::move(std_state)),
      gate_(std::move(gate)),
      deleter_(build_deleter(basis_, std_state_)) {}

StateVector DeletionMachine::output_state(const QubitState& input) const {
  return apply_deleter(input, deleter_);
}

PipelineResult DeletionMachine::run(const QubitState& input,
                                    bool with_transformer) const {
  DensityOp joint = density_of(output_state(input));
  if (with_transformer) joint = apply_transformer(joint, gate_);
  DensityOp r1 = partial_trace(joint, {Mode::retained});
  DensityOp r2 = partial_trace(joint, {Mode::deleted});
  DensityOp r3 = partial_trace(joint, {Mode::machine});
  return PipelineResult{std::move(joint), std::move(r1), std::move(r2),
                        std::move(r3), with_transformer};
}

PipelineResult run_pipeline(const QubitState& input, const MachineParams& params,
                            bool with_transformer) {
  return DeletionMachine(params).run(input, with_transformer);
}

}  // namespace qdel
