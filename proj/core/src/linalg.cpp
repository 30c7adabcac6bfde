#include "tsopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace tsopt {

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw StructuralError("matrix is not square: " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw StructuralError("matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
  }
}

bool is_psd(const Matrix& m, double tol) {
  require_hermitian(m);
  if (m.rows() == 0) return true;
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  require_hermitian(m);
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Keep keep) {
  if (m.rows() != m.cols() || m.rows() != dim_a * dim_b) {
    throw StructuralError("partial_trace: size mismatch");
  }
  if (keep == Keep::First) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_b; ++i)
    for (Index j = 0; j < dim_b; ++j)
      for (Index k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

namespace {

// Decomposes a composite index into per-factor digits, slowest factor first.
void to_digits(Index idx, const std::vector<Index>& dims, std::vector<Index>& digits) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = idx % dims[k];
    idx /= dims[k];
  }
}

Index from_digits(const std::vector<Index>& digits, const std::vector<Index>& dims) {
  Index idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

Matrix partial_trace(const Matrix& m, const std::vector<Index>& dims,
                     const std::vector<int>& keep) {
  Index total = 1;
  for (Index d : dims) total *= d;
  if (m.rows() != m.cols() || m.rows() != total) {
    throw StructuralError("partial_trace: size mismatch");
  }
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size())) {
      throw StructuralError("partial_trace: factor index out of range");
    }
    kept[static_cast<std::size_t>(k)] = true;
  }

  std::vector<Index> keep_dims, trace_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    (kept[k] ? keep_dims : trace_dims).push_back(dims[k]);
  }
  Index keep_total = 1, trace_total = 1;
  for (Index d : keep_dims) keep_total *= d;
  for (Index d : trace_dims) trace_total *= d;

  Matrix out = Matrix::Zero(keep_total, keep_total);
  std::vector<Index> row(dims.size()), col(dims.size());
  std::vector<Index> krow(keep_dims.size()), kcol(keep_dims.size());
  std::vector<Index> tdig(trace_dims.size());
  for (Index r = 0; r < keep_total; ++r) {
    to_digits(r, keep_dims, krow);
    for (Index c = 0; c < keep_total; ++c) {
      to_digits(c, keep_dims, kcol);
      Complex acc = 0.0;
      for (Index t = 0; t < trace_total; ++t) {
        to_digits(t, trace_dims, tdig);
        std::size_t ik = 0, it = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
          if (kept[k]) {
            row[k] = krow[ik];
            col[k] = kcol[ik];
            ++ik;
          } else {
            row[k] = tdig[it];
            col[k] = tdig[it];
            ++it;
          }
        }
        acc += m(from_digits(row, dims), from_digits(col, dims));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw StructuralError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix factor_permutation(const std::vector<Index>& dims, const std::vector<int>& order) {
  const std::size_t k = dims.size();
  if (order.size() != k) throw StructuralError("factor_permutation: order size mismatch");
  std::vector<bool> seen(k, false);
  for (int o : order) {
    if (o < 0 || o >= static_cast<int>(k) || seen[static_cast<std::size_t>(o)]) {
      throw StructuralError("factor_permutation: invalid permutation");
    }
    seen[static_cast<std::size_t>(o)] = true;
  }
  Index total = 1;
  for (Index d : dims) total *= d;

  std::vector<Index> new_dims(k);
  for (std::size_t j = 0; j < k; ++j) new_dims[j] = dims[static_cast<std::size_t>(order[j])];

  Matrix p = Matrix::Zero(total, total);
  std::vector<Index> old_digits(k), new_digits(k);
  for (Index idx = 0; idx < total; ++idx) {
    to_digits(idx, dims, old_digits);
    for (std::size_t j = 0; j < k; ++j) new_digits[j] = old_digits[static_cast<std::size_t>(order[j])];
    p(from_digits(new_digits, new_dims), idx) = 1.0;
  }
  return p;
}

Matrix sqrt_psd(const Matrix& m, double tol) {
  require_hermitian(m);
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -tol) {
    throw DomainError("sqrt_psd: matrix is not positive semidefinite");
  }
  Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix pinv_sqrt_psd(const Matrix& m, double cut) {
  require_hermitian(m);
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -cut) {
    throw DomainError("pinv_sqrt_psd: matrix is not positive semidefinite");
  }
  Eigen::VectorXd inv_root(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    inv_root(i) = ev(i) > cut ? 1.0 / std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix support_projector(const Matrix& m, double cut) {
  require_hermitian(m);
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd mask(ev.size());
  for (Index i = 0; i < ev.size(); ++i) mask(i) = ev(i) > cut ? 1.0 : 0.0;
  return es.eigenvectors() * mask.asDiagonal() * es.eigenvectors().adjoint();
}

double psd_condition(const Matrix& m, double cut) {
  Eigen::VectorXd ev = hermitian_eigenvalues(m);
  const double hi = ev.maxCoeff();
  const double lo = ev.minCoeff();
  if (lo <= cut) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::vector<Complex> sorted_spectrum(const Matrix& m) {
  if (m.rows() != m.cols()) throw StructuralError("sorted_spectrum: matrix is not square");
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

}  // namespace tsopt
