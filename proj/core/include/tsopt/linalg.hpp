#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsopt/common.hpp"

// Matrix conventions used throughout the library:
//
//  * Composite systems order their tensor factors first-is-slowest, matching
//    the Kronecker product: (A ⊗ B) indexes as a*dim(B) + b.
//  * vec() stacks columns (Eigen's native layout), so vec(K)[i + rows*j] = K(i,j).
//  * All operators are square complex matrices; Hermiticity is always checked
//    in the max norm against kHermitianTol.

namespace tsopt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// A named system with a fixed Hilbert-space dimension. Names identify wires
// in circuit documents; equality is by name and dimension together.
struct SystemLabel {
  std::string name;
  Index dim = 0;

  friend bool operator==(const SystemLabel&, const SystemLabel&) = default;
};

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
void require_hermitian(const Matrix& m, double tol = kHermitianTol);

// Eigenvalue test on the Hermitian part; throws StructuralError if the input
// is not Hermitian within kHermitianTol.
bool is_psd(const Matrix& m, double tol = kPsdTol);

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

// Kronecker product, first factor slowest.
Matrix tensor(const Matrix& a, const Matrix& b);

enum class Keep { First, Second };

// Partial trace of an operator on A ⊗ B. dim_a * dim_b must match the size.
Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Keep keep);

// Partial trace over an arbitrary factor list; keeps the factors whose
// indices appear in `keep`, in their original relative order.
Matrix partial_trace(const Matrix& m, const std::vector<Index>& dims,
                     const std::vector<int>& keep);

Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index rows, Index cols);

// Permutation matrix P reordering tensor factors: for factors x_0,...,x_{k-1}
// with dimensions dims, P * (x_0 ⊗ ... ⊗ x_{k-1}) = x_{order[0]} ⊗ ... ⊗ x_{order[k-1]}.
Matrix factor_permutation(const std::vector<Index>& dims, const std::vector<int>& order);

// Hermitian square root and pseudo-inverse square root. Eigenvalues below
// `cut` are treated as zero in the pseudo-inverse.
Matrix sqrt_psd(const Matrix& m, double tol = kPsdTol);
Matrix pinv_sqrt_psd(const Matrix& m, double cut = kPsdTol);

// Orthogonal projector onto the support (range) of a PSD matrix; eigenvalues
// at or below `cut` count as zero.
Matrix support_projector(const Matrix& m, double cut = kPsdTol);

// Largest eigenvalue-magnitude ratio of a PSD matrix, +inf if singular.
double psd_condition(const Matrix& m, double cut = kPsdTol);

// Sorted complex spectrum of a general square matrix, ordered by real part
// then imaginary part. Used for spectrum-preservation comparisons.
std::vector<Complex> sorted_spectrum(const Matrix& m);

}  // namespace tsopt
