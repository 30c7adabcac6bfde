#pragma once

#include <stdexcept>
#include <string>

namespace tsopt {

// Numerical tolerances used across the library. Functions that compare
// against a tolerance take it as a defaulted parameter so callers can
// tighten or relax individual checks without recompiling.
inline constexpr double kHermitianTol = 1e-10;  // max-norm deviation from M = M†
inline constexpr double kPsdTol = 1e-9;         // most negative admissible eigenvalue
inline constexpr double kProbabilityTol = 1e-9; // probability and map-action comparisons
inline constexpr double kTightTol = 1e-12;      // algebraic identities (associativity etc.)

// Scale factor for deciding that a denominator is zero. A pairing or a
// composite map counts as null when its weight is at most
// kNullScale * (product of the dimensions involved).
inline constexpr double kNullScale = 1e-12;

// Soft cap on the dimension of any composite system built during circuit
// evaluation. Overridable per call and via TSOPT_MAX_DIM in the CLI.
inline constexpr int kDefaultMaxDim = 64;

// Seed used by every deterministic sampling routine unless the caller
// passes one explicitly.
inline constexpr unsigned long long kDefaultSeed = 0x7450u;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape, wiring, or representation problems: wrong matrix dimensions,
// non-Hermitian input where Hermitian is required, malformed kernels.
struct StructuralError : Error {
  using Error::Error;
};

// Value problems on structurally sound input: negative eigenvalues where
// PSD is required, singular matrices that must be inverted, parameters
// outside their admissible interval.
struct DomainError : Error {
  using Error::Error;
};

// Raised when an operation would have zero total weight, i.e. every
// constituent map is zero. Composition APIs return a null variant instead
// of throwing; this error is for direct construction only.
struct NullOperationError : Error {
  using Error::Error;
};

}  // namespace tsopt
