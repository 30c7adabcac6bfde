#pragma once

#include <utility>

#include "tsopt/operation.hpp"

// Classical operational theory as the diagonal restriction: operations whose
// CP maps are diagonal in the fixed computational basis. The classic bit
// pipeline lives here: two-outcome bit preparations, distinguishing
// measurements with a free strength parameter q, the closed-form joint and
// bit-value distributions, and the three-outcome refinement whose subset
// update reproduces Bayesian conditioning.

namespace tsopt {

// True when every outcome map has a diagonal Choi matrix, i.e. the operation
// commutes with computational-basis dephasing.
bool is_diagonal(const GeneralizedOperation& op, double tol = kTightTol);

// Wrapper certifying diagonality at construction.
class ClassicalOperation {
 public:
  explicit ClassicalOperation(GeneralizedOperation op);

  const GeneralizedOperation& op() const { return op_; }

 private:
  GeneralizedOperation op_;
};

// Two-outcome preparation {p|0⟩⟨0|, (1-p)|1⟩⟨1|}; p in [0,1].
ClassicalOperation bit_preparation(double p);

// Two-outcome measurement {q|0⟩⟨0|, (2-q)|1⟩⟨1|}; q in the open interval
// (0,2). Endpoints are rejected: there the measurement stops distinguishing
// the two bit values.
ClassicalOperation distinguishing_measurement(double q);

// Three-outcome refinement of the distinguishing measurement:
//   E'_0 = (q/2)|0⟩⟨0|, E'_1 = ((2-q)/2)|1⟩⟨1|,
//   E'_2 = ((2-q)/2)|0⟩⟨0| + (q/2)|1⟩⟨1|.
// Outcomes 0 and 1 still distinguish the bit; outcome 2 is the inconclusive
// rest.
ClassicalOperation refined_distinguishing_measurement(double q);

// Closed-form bit-value distribution
//   p(X=0) = pq / (pq + (1-p)(2-q)),  p(X=1) = 1 - p(X=0),
// computed directly from the scalars so that q=1 gives exactly (p, 1-p).
std::pair<double, double> bit_distribution(double p, double q);

// End-to-end Bayes-update scenario: evaluate the 2x3 joint table of the bit
// preparation against the refined measurement, discard outcome 2 with a
// subset update kernel (common acceptance weight), and compare the result
// with the two-outcome measurement and its closed-form joint table. The
// coarse-grained preparation is a local object and must come through the
// update untouched.
struct BayesUpdateReport {
  RealMatrix joint3;           // engine 2x3 table
  RealMatrix joint3_formula;   // closed-form six entries
  RealMatrix updated_joint;    // engine 2x2 table after the subset update
  RealMatrix expected_joint;   // closed-form two-outcome table
  double acceptance = 1.0;     // kernel weight on the kept outcomes
  double max_table_deviation = 0.0;     // worst entry mismatch across tables
  double measurement_deviation = 0.0;   // updated vs distinguishing effects
  double state_deviation = 0.0;         // coarse preparation state drift
  double tolerance = kTightTol;
  bool consistent = false;
};

BayesUpdateReport bayes_update_scenario(double p, double q, double acceptance = 0.5);

}  // namespace tsopt
