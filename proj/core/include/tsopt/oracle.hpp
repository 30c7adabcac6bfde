#pragma once

#include <string>
#include <vector>

#include "tsopt/circuit.hpp"

// Brute-force reference implementations for differential testing. Nothing
// here calls the operation/circuit evaluation machinery: the circuit oracle
// re-derives every outcome tuple's numerator from raw Kraus products over
// its own topological order, and the classical oracle is plain scalar
// arithmetic. Deliberately naive; used to certify the engine.

namespace tsopt {

struct OracleDistribution {
  std::vector<double> probabilities;  // declaration-order row-major, last node fastest
  bool null = false;
  Index n_tuples = 0;
  std::string method = "enumeration";
};

// Exhaustive tuple enumeration with raw-trace normalization: every numerator
// is computed independently and divided by their sum. Refuses circuits with
// more than 10^6 outcome tuples (DomainError carrying the count).
OracleDistribution enumerate_circuit(const Circuit& c);

struct ClassicalFormulaTable {
  RealMatrix joint;          // 2x2 distinguishing-measurement table
  double bit_p0 = 0.0;       // p(X=0) = pq / (pq + (1-p)(2-q))
  double bit_p1 = 0.0;
  RealMatrix refined_joint;  // 2x3 three-outcome table
  std::string method = "direct-formula";
};

// The classical bit tables transcribed as scalar formulas, independent of
// the operator machinery.
ClassicalFormulaTable classical_formulas(double p, double q);

// True when the two maps act identically (within tol) on all d^2 matrix
// units; decides Kraus-representation equivalence.
bool map_action_equal(const CPMap& m1, const CPMap& m2, double tol = kProbabilityTol);

}  // namespace tsopt
