#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qdel/errors.hpp"
#include "qdel/tensor.hpp"

namespace {

using qdel::cplx;
using qdel::CMatrix;
using qdel::CVector;
using qdel::DensityOp;
using qdel::Mode;
using qdel::QubitState;
using qdel::StateVector;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CVector vec(std::initializer_list<cplx> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (cplx x : xs) v(k++) = x;
  return v;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Random normalized state from a fixed seed.
CVector random_unit(Eigen::Index n, unsigned seed) {
  std::srand(seed);
  CVector v = CVector::Random(n);
  return v / v.norm();
}

TEST(QubitState, ValidatesNormalization) {
  EXPECT_NO_THROW(QubitState(0.6, 0.8, 0.0));
  EXPECT_THROW(QubitState(0.6, 0.6, 0.0), qdel::InvalidInput);
  EXPECT_THROW(QubitState(-0.6, 0.8, 0.0), qdel::InvalidInput);
  EXPECT_THROW(QubitState::from_alpha2(1.5), qdel::InvalidInput);
}

TEST(QubitState, PhaseReducedIntoPeriod) {
  const QubitState q(0.6, 0.8, -M_PI / 2);
  EXPECT_NEAR(q.beta_phase(), 3 * M_PI / 2, 1e-15);
  EXPECT_NEAR(std::abs(q.beta() - cplx(0, -0.8)), 0.0, 1e-15);
}

TEST(TensorProduct, BasisProduct) {
  const std::vector<StateVector> f = {StateVector::basis(2, 0, Mode::retained),
                                      StateVector::basis(2, 0, Mode::deleted)};
  const StateVector s = qdel::tensor_product(f);
  EXPECT_EQ(s.amplitudes(), vec({1, 0, 0, 0}));
  EXPECT_EQ(s.dims(), (std::vector<std::size_t>{2, 2}));
}

TEST(TensorProduct, IdentityEmbedding) {
  const CVector v = random_unit(3, 7);
  const std::vector<StateVector> f = {
      StateVector::qubit(QubitState(1.0, 0.0, 0.0), Mode::retained),
      StateVector::single(v, Mode::machine)};
  const CVector s = qdel::tensor_product(f).amplitudes();
  EXPECT_LT((s.head(3) - v).norm(), 1e-15);
  EXPECT_EQ(s.tail(3).norm(), 0.0);
}

TEST(TensorProduct, DirectMultiplication) {
  const QubitState q(0.6, 0.8, 0.0);
  const std::vector<StateVector> f = {StateVector::qubit(q, Mode::retained),
                                      StateVector::qubit(q, Mode::deleted)};
  const CVector s = qdel::tensor_product(f).amplitudes();
  const CVector want = vec({9.0 / 25, 12.0 / 25, 12.0 / 25, 16.0 / 25});
  EXPECT_LT((s - want).norm(), 1e-15);
}

TEST(TensorProduct, NormIsProductOfNorms) {
  const CVector a = 2.0 * random_unit(2, 1);
  const CVector b = 0.5 * random_unit(3, 2);
  const std::vector<StateVector> f = {StateVector::single(a, Mode::retained),
                                      StateVector::single(b, Mode::machine)};
  EXPECT_NEAR(qdel::tensor_product(f).norm(), 1.0, 1e-14);
}

TEST(TensorProduct, Associative) {
  const auto a = StateVector::single(random_unit(2, 3), Mode::retained);
  const auto b = StateVector::single(random_unit(2, 4), Mode::deleted);
  const auto c = StateVector::single(random_unit(3, 5), Mode::machine);
  const std::vector<StateVector> ab = {a, b};
  const std::vector<StateVector> ab_c = {qdel::tensor_product(ab), c};
  const std::vector<StateVector> bc = {b, c};
  const std::vector<StateVector> a_bc = {a, qdel::tensor_product(bc)};
  const CVector lhs = qdel::tensor_product(ab_c).amplitudes();
  const CVector rhs = qdel::tensor_product(a_bc).amplitudes();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TensorProduct, Errors) {
  EXPECT_THROW(qdel::tensor_product(std::span<const StateVector>{}), qdel::InvalidInput);
  const std::vector<StateVector> dup = {StateVector::basis(2, 0, Mode::retained),
                                        StateVector::basis(2, 1, Mode::retained)};
  EXPECT_THROW(qdel::tensor_product(dup), qdel::InvalidInput);
}

TEST(DensityOf, Examples) {
  const DensityOp z = qdel::density_of(StateVector::basis(2, 0, Mode::retained));
  EXPECT_EQ(z.matrix(), (CMatrix(2, 2) << 1, 0, 0, 0).finished());

  const DensityOp p =
      qdel::density_of(StateVector::single(vec({kInvSqrt2, kInvSqrt2}), Mode::retained));
  EXPECT_LT(max_abs(p.matrix() - CMatrix::Constant(2, 2, 0.5)), 1e-15);

  const DensityOp r = qdel::density_of(StateVector::single(random_unit(5, 9), Mode::machine));
  const auto diag = qdel::validate_density(r);
  EXPECT_TRUE(diag.pass());
  EXPECT_NEAR(diag.min_eigenvalue, 0.0, 1e-14);
  EXPECT_NEAR(diag.max_eigenvalue, 1.0, 1e-14);
}

TEST(DensityOf, RejectsUnnormalized) {
  EXPECT_THROW(qdel::density_of(StateVector::single(vec({1, 1}), Mode::retained)),
               qdel::InvalidInput);
}

DensityOp bell() {
  return qdel::density_of(StateVector(vec({kInvSqrt2, 0, 0, kInvSqrt2}), {2, 2},
                                      {Mode::retained, Mode::deleted}));
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  const DensityOp r = qdel::partial_trace(bell(), {Mode::retained});
  EXPECT_LT(max_abs(r.matrix() - 0.5 * CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_EQ(r.modes(), std::vector<Mode>{Mode::retained});
}

TEST(PartialTrace, ProductFactorization) {
  const DensityOp a =
      qdel::density_of(StateVector::single(random_unit(2, 11), Mode::retained));
  const DensityOp b =
      qdel::density_of(StateVector::single(random_unit(3, 12), Mode::machine));
  const DensityOp ab = qdel::tensor_product(a, b);
  EXPECT_LT(max_abs(qdel::partial_trace(ab, {Mode::retained}).matrix() - a.matrix()), 1e-15);
  EXPECT_LT(max_abs(qdel::partial_trace(ab, {Mode::machine}).matrix() - b.matrix()), 1e-15);
}

DensityOp random_tripartite(unsigned seed) {
  return qdel::density_of(StateVector(random_unit(12, seed), {2, 2, 3},
                                      {Mode::retained, Mode::deleted, Mode::machine}));
}

TEST(PartialTrace, AllKeptIsIdentity) {
  const DensityOp rho = random_tripartite(21);
  const DensityOp same =
      qdel::partial_trace(rho, {Mode::retained, Mode::deleted, Mode::machine});
  EXPECT_EQ(same.matrix(), rho.matrix());
}

TEST(PartialTrace, TracePreserved) {
  const DensityOp rho = random_tripartite(22);
  const std::vector<std::set<Mode>> keeps = {
      {Mode::retained}, {Mode::deleted}, {Mode::machine},
      {Mode::retained, Mode::deleted}, {Mode::retained, Mode::machine},
      {Mode::deleted, Mode::machine}};
  for (const auto& k : keeps) {
    const DensityOp r = qdel::partial_trace(rho, k);
    EXPECT_NEAR(std::abs(r.trace() - rho.trace()), 0.0, 1e-12);
    EXPECT_LT(max_abs(r.matrix() - r.matrix().adjoint()), 1e-15);
  }
}

TEST(PartialTrace, TwoStepsEqualJoint) {
  const DensityOp rho = random_tripartite(23);
  const DensityOp joint = qdel::partial_trace(rho, {Mode::retained});
  const DensityOp step =
      qdel::partial_trace(qdel::partial_trace(rho, {Mode::retained, Mode::deleted}),
                          {Mode::retained});
  EXPECT_LT(max_abs(joint.matrix() - step.matrix()), 1e-12);

  const DensityOp mid = qdel::partial_trace(rho, {Mode::deleted, Mode::machine});
  EXPECT_LT(max_abs(qdel::partial_trace(mid, {Mode::machine}).matrix() -
                    qdel::partial_trace(rho, {Mode::machine}).matrix()),
            1e-12);
}

TEST(PartialTrace, OrderIndependentOracle) {
  // Explicit index sum for Tr_{1,3} on dims (2, 2, 3).
  const DensityOp rho = random_tripartite(24);
  CMatrix want = CMatrix::Zero(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int jp = 0; jp < 2; ++jp)
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 3; ++k)
          want(j, jp) += rho.matrix()(i * 6 + j * 3 + k, i * 6 + jp * 3 + k);
  EXPECT_LT(max_abs(qdel::partial_trace(rho, {Mode::deleted}).matrix() - want), 1e-15);
}

TEST(PartialTrace, Errors) {
  EXPECT_THROW(qdel::partial_trace(bell(), {}), qdel::InvalidInput);
  EXPECT_THROW(qdel::partial_trace(bell(), {Mode::machine}), qdel::InvalidInput);
}

TEST(Expectation, Examples) {
  const DensityOp zero = qdel::density_of(StateVector::basis(2, 0, Mode::retained));
  EXPECT_DOUBLE_EQ(qdel::expectation(zero, StateVector::basis(2, 0, Mode::retained)), 1.0);

  const DensityOp mixed(0.5 * CMatrix::Identity(2, 2), {2}, {Mode::retained});
  EXPECT_NEAR(qdel::expectation(mixed, random_unit(2, 31)), 0.5, 1e-15);

  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  const DensityOp r((CMatrix(2, 2) << 0.25, c, c, 0.75).finished(), {2}, {Mode::retained});
  EXPECT_NEAR(qdel::expectation(r, StateVector::basis(2, 0, Mode::retained)), 0.25, 1e-15);
}

TEST(Expectation, RealForHermitian) {
  const DensityOp rho = random_tripartite(32);
  const CVector phi = random_unit(12, 33);
  EXPECT_LT(std::abs(qdel::sandwich(rho.matrix(), phi).imag()), 1e-12);
}

TEST(Expectation, Errors) {
  const DensityOp mixed(0.5 * CMatrix::Identity(2, 2), {2}, {Mode::retained});
  EXPECT_THROW(qdel::expectation(mixed, random_unit(3, 1)), qdel::InvalidInput);
  EXPECT_THROW(qdel::expectation(mixed, vec({1, 1})), qdel::InvalidInput);
}

TEST(ValidateDensity, Examples) {
  const auto ok = qdel::validate_density(CMatrix(0.5 * CMatrix::Identity(2, 2)));
  EXPECT_TRUE(ok.pass());
  EXPECT_NEAR(ok.min_eigenvalue, 0.5, 1e-15);

  const auto bad = qdel::validate_density((CMatrix(2, 2) << 1, 1, 0, 0).finished());
  EXPECT_FALSE(bad.hermitian);
  EXPECT_FALSE(bad.pass());

  const auto neg = qdel::validate_density((CMatrix(2, 2) << 1.5, 0, 0, -0.5).finished());
  EXPECT_TRUE(neg.hermitian);
  EXPECT_TRUE(neg.unit_trace);
  EXPECT_FALSE(neg.positive);
}

TEST(DensityOp, RejectsShapeMismatch) {
  EXPECT_THROW(DensityOp(CMatrix::Identity(3, 3), {2}, {Mode::retained}), qdel::InvalidInput);
  EXPECT_THROW(StateVector(vec({1, 0, 0}), {2}, {Mode::retained}), qdel::InvalidInput);
}

}  // namespace
