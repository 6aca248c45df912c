#pragma once

// Machine (ancilla) vectors of the deleter, realized from their prescribed
// inner products.

#include <array>
#include <cstddef>
#include <string>

#include "qdel/tensor.hpp"

namespace qdel {

inline constexpr double kFeasibilityTol = 1e-12;
inline constexpr double kRankTol = 1e-12;

// Order of the seven machine vectors in the Gram matrix and in MachineBasis.
enum class MachineVector : int { A = 0, A0, A1, B0, B1, C0, D0 };
inline constexpr std::size_t kMachineVectorCount = 7;

const char* machine_vector_name(MachineVector v);

struct MachineParams {
  double lambda = 0.0;
  double y = 0.0;
  double m1 = 0.70710678118654752;
  cplx m2 = {0.70710678118654752, 0.0};

  // Range checks only (λ ∈ [0, 1/2], Y ≥ 0, m1² + |m2|² = 1). Throws InvalidInput.
  void check_ranges() const;
  // 3Y² ≤ 1 - 2λ, the condition for the Gram matrix to be PSD.
  bool analytic_feasible() const;
  // check_ranges() plus analytic_feasible(); throws Infeasible for the latter.
  void validate() const;
};

using GramEntries = Eigen::Matrix<cplx, 7, 7>;

struct GramMatrix {
  GramEntries entries;
  double lambda = 0.0;
  double y = 0.0;

  cplx operator()(MachineVector i, MachineVector j) const {
    return entries(static_cast<int>(i), static_cast<int>(j));
  }
  // Sets ⟨i|j⟩ and its conjugate partner.
  void set(MachineVector i, MachineVector j, cplx value);
};

struct FeasibilityRecord {
  double min_eigenvalue = 0.0;
  std::size_t rank = 0;
  bool feasible = false;           // min eigenvalue ≥ -1e-12
  bool analytic_feasible = false;  // 3Y² ≤ 1 - 2λ (+1e-12)
  bool agree() const { return feasible == analytic_feasible; }
  std::string reason() const;
};

struct MachineBasis {
  std::array<CVector, kMachineVectorCount> vectors;
  std::size_t dim = 0;
  GramMatrix gram;

  const CVector& operator[](MachineVector v) const {
    return vectors[static_cast<std::size_t>(v)];
  }
  // max |V†V - G| entrywise.
  double reconstruction_residual() const;
};

struct StandardState {
  double m1 = 1.0;
  cplx m2 = 0.0;
  CVector sigma;        // m1|0⟩ + m2|1⟩
  CVector sigma_perp;   // -m2*|0⟩ + m1|1⟩
  CVector sigma_prime;  // (Σ + Σ⊥)/√2
};

GramMatrix build_gram(const MachineParams& params);

FeasibilityRecord check_feasible(const GramMatrix& gram);

// Spectral factorization G = QΛQ†; the vectors are the columns of
// √Λ_+ Q_+† over the eigenvalues above the rank threshold, sorted descending.
// Each eigenvector's largest-magnitude entry is rotated to be real positive.
// Throws Infeasible when the Gram matrix is not PSD.
MachineBasis realize_vectors(const GramMatrix& gram);

StandardState standard_state(double m1, cplx m2);

}  // namespace qdel
