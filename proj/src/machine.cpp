#include "qdel/machine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "qdel/errors.hpp"

namespace qdel {

using enum MachineVector;

const char* machine_vector_name(MachineVector v) {
  static constexpr std::array<const char*, kMachineVectorCount> names = {
      "A", "A0", "A1", "B0", "B1", "C0", "D0"};
  return names[static_cast<std::size_t>(v)];
}

void MachineParams::check_ranges() const {
  if (!(lambda >= 0.0 && lambda <= 0.5)) {
    throw InvalidInput(fmt::format("lambda must lie in [0, 1/2], got {}", lambda));
  }
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw InvalidInput(fmt::format("Y must be non-negative, got {}", y));
  }
  const double n = m1 * m1 + std::norm(m2);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTol) {
    throw InvalidInput(fmt::format("standard state not normalized: m1^2 + |m2|^2 = {}", n));
  }
}

bool MachineParams::analytic_feasible() const {
  return 3.0 * y * y <= (1.0 - 2.0 * lambda) + kFeasibilityTol;
}

void MachineParams::validate() const {
  check_ranges();
  if (!analytic_feasible()) {
    throw Infeasible(fmt::format("infeasible: 3Y² > 1−2λ ({:.12g} > {:.12g})",
                                 3.0 * y * y, 1.0 - 2.0 * lambda));
  }
}

void GramMatrix::set(MachineVector i, MachineVector j, cplx value) {
  entries(static_cast<int>(i), static_cast<int>(j)) = value;
  entries(static_cast<int>(j), static_cast<int>(i)) = std::conj(value);
}

std::string FeasibilityRecord::reason() const {
  if (feasible) return "feasible";
  return fmt::format("infeasible: Gram matrix has eigenvalue {:.3e}", min_eigenvalue);
}

double MachineBasis::reconstruction_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < kMachineVectorCount; ++i) {
    for (std::size_t j = 0; j < kMachineVectorCount; ++j) {
      const cplx ip = vectors[i].dot(vectors[j]);
      worst = std::max(worst, std::abs(ip - gram.entries(static_cast<int>(i),
                                                         static_cast<int>(j))));
    }
  }
  return worst;
}

GramMatrix build_gram(const MachineParams& params) {
  params.check_ranges();
  const double lam = params.lambda;
  GramMatrix g;
  g.lambda = lam;
  g.y = params.y;
  g.entries.setZero();
  g.set(A, A, 1.0);
  g.set(A0, A0, 1.0 - 2.0 * lam);
  g.set(A1, A1, 1.0 - 2.0 * lam);
  g.set(D0, D0, 1.0 - 2.0 * lam);
  g.set(B0, B0, lam);
  g.set(B1, B1, lam);
  g.set(C0, C0, 2.0 * lam);
  g.set(A, A0, params.y);
  g.set(A, A1, params.y);
  g.set(A, D0, params.y);
  return g;
}

FeasibilityRecord check_feasible(const GramMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<GramEntries> es(gram.entries, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  FeasibilityRecord rec;
  rec.min_eigenvalue = ev.minCoeff();
  rec.rank = static_cast<std::size_t>((ev.array() > kRankTol).count());
  rec.feasible = rec.min_eigenvalue >= -kFeasibilityTol;
  rec.analytic_feasible =
      3.0 * gram.y * gram.y <= (1.0 - 2.0 * gram.lambda) + kFeasibilityTol;
  return rec;
}

MachineBasis realize_vectors(const GramMatrix& gram) {
  const FeasibilityRecord rec = check_feasible(gram);
  if (!rec.feasible) throw Infeasible(rec.reason());

  Eigen::SelfAdjointEigenSolver<GramEntries> es(gram.entries);
  const auto& ev = es.eigenvalues();
  const auto& q = es.eigenvectors();

  std::vector<int> order(kMachineVectorCount);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ev(a) > ev(b); });

  std::vector<int> kept;
  for (int k : order) {
    if (ev(k) > kRankTol) kept.push_back(k);
  }
  const auto d = static_cast<Eigen::Index>(kept.size());

  // Row r of the factor is √λ_r · q_r†; column j of the factor is vector j.
  CMatrix factor(d, static_cast<Eigen::Index>(kMachineVectorCount));
  for (Eigen::Index r = 0; r < d; ++r) {
    Eigen::Matrix<cplx, 7, 1> col = q.col(kept[static_cast<std::size_t>(r)]);
    Eigen::Index pivot = 0;
    col.cwiseAbs().maxCoeff(&pivot);
    col *= std::polar(1.0, -std::arg(col(pivot)));
    factor.row(r) = std::sqrt(ev(kept[static_cast<std::size_t>(r)])) * col.adjoint();
  }

  MachineBasis basis;
  basis.dim = static_cast<std::size_t>(d);
  basis.gram = gram;
  for (std::size_t j = 0; j < kMachineVectorCount; ++j) {
    basis.vectors[j] = factor.col(static_cast<Eigen::Index>(j));
  }
  return basis;
}

StandardState standard_state(double m1, cplx m2) {
  const double n = m1 * m1 + std::norm(m2);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTol) {
    throw InvalidInput(fmt::format("standard state not normalized: m1^2 + |m2|^2 = {}", n));
  }
  StandardState s;
  s.m1 = m1;
  s.m2 = m2;
  s.sigma = CVector(2);
  s.sigma << cplx(m1, 0.0), m2;
  s.sigma_perp = CVector(2);
  s.sigma_perp << -std::conj(m2), cplx(m1, 0.0);
  s.sigma_prime = (s.sigma + s.sigma_perp) / std::sqrt(2.0);
  return s;
}

}  // namespace qdel
