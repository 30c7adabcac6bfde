#pragma once

#include <vector>

#include "tsopt/linalg.hpp"

// Completely positive maps between finite-dimensional systems, stored as
// Kraus operator lists. The Choi matrix of a map A -> B lives on A ⊗ B with
// A as the slow factor: choi = Σ_α vec(K_α) vec(K_α)†, and the map acts as
// M(ρ) = Tr_A[(ρᵀ ⊗ 1_B) choi].

namespace tsopt {

class CPMap {
 public:
  // Kraus operators must all be dim_out x dim_in. An empty list is the zero
  // map (dimensions still required).
  CPMap(std::vector<Matrix> kraus, Index dim_in, Index dim_out);

  // Convenience: infers dimensions from a non-empty list.
  explicit CPMap(std::vector<Matrix> kraus);

  static CPMap zero(Index dim_in, Index dim_out);
  static CPMap identity(Index dim);
  static CPMap from_unitary(const Matrix& u);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& rho) const;

  // Action of the adjoint (Heisenberg-picture) map: Σ_α K_α† X K_α.
  Matrix apply_adjoint(const Matrix& x) const;

  Matrix choi() const;

  // Tr(M(1/d_in)): the operation weight used by normalization. Equals
  // Σ_α ‖K_α‖²_F / d_in, never negative.
  double weight() const;

  bool is_zero(double tol = kNullScale) const;
  bool is_trace_preserving(double tol = kProbabilityTol) const;

  // this ∘ inner (inner acts first). Kraus count is capped by canonicalizing
  // whenever the raw product list would exceed dim_in*dim_out.
  CPMap compose(const CPMap& inner) const;

  // Parallel composition, first factor slowest.
  CPMap tensor(const CPMap& other) const;

  CPMap scaled(double factor) const;

  // Minimal deterministic Kraus list recomputed from the Choi matrix; see
  // choi_to_kraus for the ordering rules.
  CPMap canonicalized(double tol = kPsdTol) const;

 private:
  std::vector<Matrix> kraus_;
  Index dim_in_;
  Index dim_out_;
};

Matrix kraus_to_choi(const std::vector<Matrix>& kraus, Index dim_in, Index dim_out);

// Eigendecomposition of the Choi matrix. Eigenvalues at or below `tol` are
// dropped; the rest yield Kraus operators √λ·unvec(v) ordered by descending
// eigenvalue, ties broken lexicographically on the real parts of the
// (phase-fixed) eigenvectors. Each eigenvector's first component of modulus
// above 1e-12 is rotated to the positive real axis, making the output
// deterministic. Throws DomainError if the Choi matrix is not PSD within tol.
std::vector<Matrix> choi_to_kraus(const Matrix& choi, Index dim_in, Index dim_out,
                                  double tol = kPsdTol);

}  // namespace tsopt
