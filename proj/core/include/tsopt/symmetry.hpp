#pragma once

#include <map>
#include <variant>
#include <vector>

#include "tsopt/circuit.hpp"
#include "tsopt/operation.hpp"

// Symmetry transformations of states and effects, generated by an invertible
// matrix S per system dimension. Type I transformations map states to states
// and effects to effects; Type II transformations exchange the two sets and
// underlie time reversal. Each kind comes in a plain and a transpose branch;
// the transposition basis defaults to the computational one and can be
// overridden per dimension.
//
// With τ the (possibly trivial) transposition, d the dimension, and N(·) the
// normalizer that restores Tr ρ̄' = 1 or Tr Ē' = d:
//
//   Type I:  (ρ;ρ̄) → N(S τ(ρ) S†),      (E;Ē) → N(S⁻¹† τ(E) S⁻¹)
//   Type II: (ρ;ρ̄) → N(S τ(ρ) S†) read as an effect,
//            (E;Ē) → N(S⁻¹† τ(E) S⁻¹) read as a state
//
// At the Kraus level a Type II transformation sends an operation with Kraus
// operators {K_α} from A to B to the reversed operation from B to A with
// Kraus operators (S_B τ(K_α) S_A⁻¹)†/λ, with τ entrywise conjugation in the
// transpose branch and λ > 0 restoring the weight normalization.

namespace tsopt {

enum class SymmetryKind { TypeI, TypeII };

// Transpose of a square operator in the orthonormal basis given by the
// columns of b.
Matrix transpose_in_basis(const Matrix& m, const Matrix& b);

// Entrywise conjugation of a (possibly rectangular) operator in the bases
// given by the columns of b_out (rows) and b_in (columns).
Matrix conjugate_in_basis(const Matrix& m, const Matrix& b_out, const Matrix& b_in);

class SymmetryTransform {
 public:
  // S matrices are stored per system dimension. Each must be square,
  // invertible, and match its key. Basis entries are optional and must be
  // unitary. Dimensions without an entry are rejected unless
  // `default_identity` is set, in which case S (and the basis) fall back to
  // the identity.
  SymmetryTransform(SymmetryKind kind, bool transpose, std::map<Index, Matrix> s,
                    std::map<Index, Matrix> basis = {}, bool default_identity = false);

  static SymmetryTransform identity_transform(SymmetryKind kind, bool transpose);

  SymmetryKind kind() const { return kind_; }
  bool transpose() const { return transpose_; }
  bool is_type_two() const { return kind_ == SymmetryKind::TypeII; }

  const std::map<Index, Matrix>& s_table() const { return s_; }

  Matrix s_for(Index dim) const;
  Matrix basis_for(Index dim) const;
  // Kronecker products over a factor list, first factor slowest.
  Matrix s_for_dims(const std::vector<Index>& dims) const;
  Matrix basis_for_dims(const std::vector<Index>& dims) const;

  // True when every stored S matrix is unitary within tol. Non-unitary
  // transformations are allowed; reports carry this flag.
  bool all_unitary(double tol = kProbabilityTol) const;

 private:
  SymmetryKind kind_;
  bool transpose_;
  std::map<Index, Matrix> s_;
  std::map<Index, Matrix> basis_;
  bool default_identity_;
};

using PairImage = std::variant<StatePair, EffectPair>;

// Image of a state: a state for Type I, an effect for Type II.
PairImage apply_to_state(const SymmetryTransform& t, const StatePair& s);
// Image of an effect: an effect for Type I, a state for Type II.
PairImage apply_to_effect(const SymmetryTransform& t, const EffectPair& e);

// Probability deviation |p(s, e) - p(images)| for one pair, with the images
// paired the right way around for either kind.
double pairing_deviation(const SymmetryTransform& t, const StatePair& s, const EffectPair& e);

struct InvarianceReport {
  double max_deviation = 0.0;
  int n_samples = 0;
  bool s_unitary = true;
};

// Max pairing deviation over an explicit sample; empty sample gives 0.
double verify_invariance(const SymmetryTransform& t,
                         const std::vector<std::pair<StatePair, EffectPair>>& sample);

// Checks probability preservation on `n_samples` random state/effect pairs
// for every dimension in the transform's table (or `dims` when given).
InvarianceReport verify_invariance(const SymmetryTransform& t, int n_samples,
                                   unsigned long long seed = kDefaultSeed,
                                   std::vector<Index> dims = {});

enum class InvolutionParity { None, Bosonic, Fermionic };

struct InvolutionReport {
  bool involution = false;
  InvolutionParity parity = InvolutionParity::None;
  double algebraic_deviation = 0.0;   // residual of the branch's S-constraint
  double functional_deviation = 0.0;  // worst double-application mismatch
  bool s_unitary = true;
};

// Tests whether applying the transformation twice is the identity. The
// algebraic constraint depends on the branch: Type I plain needs S² ∝ 1,
// Type I transpose S τ(S) ∝ 1 (with τ the basis conjugation), Type II plain
// S ∝ S†, Type II transpose S = ±Sᵀ, where + reports bosonic and - fermionic
// parity. The functional check double-applies the transformation to random
// pairs in every tabled dimension.
InvolutionReport check_involution(const SymmetryTransform& t,
                                  unsigned long long seed = kDefaultSeed, int n_samples = 16,
                                  double tol = kProbabilityTol);

struct ReversedTransformation {
  TransformationPair pair;
  double lambda = 1.0;
};

// Kraus-level reversal of a transformation from A to B under a Type II
// transformation: output maps run from B to A. in_dims/out_dims give the
// tensor factorization of A and B for the per-system S matrices; empty lists
// mean a single factor.
ReversedTransformation reverse_transformation(const TransformationPair& tp,
                                              const SymmetryTransform& t,
                                              std::vector<Index> in_dims = {},
                                              std::vector<Index> out_dims = {});

struct ReversedOperation {
  GeneralizedOperation op;
  double lambda = 1.0;
};

// Reversal of a whole operation: every outcome map is reversed with the
// common λ fixed by the coarse-grained map, so outcome labels carry over.
ReversedOperation reverse_operation(const GeneralizedOperation& op, const SymmetryTransform& t,
                                    std::vector<Index> in_dims = {},
                                    std::vector<Index> out_dims = {});

// Time reversal of a closed circuit: wiring is reversed, inputs and outputs
// swap roles, and every node's operation is reversed. Node names and outcome
// labels are preserved, so distributions of the original and the reversed
// circuit are comparable node by node.
Circuit reverse_circuit(const Circuit& c, const SymmetryTransform& t);

}  // namespace tsopt
