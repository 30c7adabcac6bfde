#include "tsopt/cpmap.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

namespace tsopt {

CPMap::CPMap(std::vector<Matrix> kraus, Index dim_in, Index dim_out)
    : kraus_(std::move(kraus)), dim_in_(dim_in), dim_out_(dim_out) {
  if (dim_in_ <= 0 || dim_out_ <= 0) throw StructuralError("CPMap: dimensions must be positive");
  for (const Matrix& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      throw StructuralError("CPMap: Kraus operator shape mismatch");
    }
  }
}

CPMap::CPMap(std::vector<Matrix> kraus) : kraus_(std::move(kraus)), dim_in_(0), dim_out_(0) {
  if (kraus_.empty()) throw StructuralError("CPMap: cannot infer dimensions from empty list");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  for (const Matrix& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      throw StructuralError("CPMap: Kraus operator shape mismatch");
    }
  }
  if (dim_in_ <= 0 || dim_out_ <= 0) throw StructuralError("CPMap: dimensions must be positive");
}

CPMap CPMap::zero(Index dim_in, Index dim_out) {
  return CPMap(std::vector<Matrix>{}, dim_in, dim_out);
}

CPMap CPMap::identity(Index dim) {
  return CPMap({Matrix::Identity(dim, dim)}, dim, dim);
}

CPMap CPMap::from_unitary(const Matrix& u) {
  if (u.rows() != u.cols()) throw StructuralError("from_unitary: matrix is not square");
  const Matrix gram = u.adjoint() * u;
  if ((gram - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > kProbabilityTol) {
    throw DomainError("from_unitary: matrix is not unitary");
  }
  return CPMap({u}, u.cols(), u.rows());
}

Matrix CPMap::apply(const Matrix& rho) const {
  if (rho.rows() != dim_in_ || rho.cols() != dim_in_) {
    throw StructuralError("CPMap::apply: operator dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim_out_, dim_out_);
  for (const Matrix& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

Matrix CPMap::apply_adjoint(const Matrix& x) const {
  if (x.rows() != dim_out_ || x.cols() != dim_out_) {
    throw StructuralError("CPMap::apply_adjoint: operator dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) out += k.adjoint() * x * k;
  return out;
}

Matrix CPMap::choi() const {
  return kraus_to_choi(kraus_, dim_in_, dim_out_);
}

double CPMap::weight() const {
  double w = 0.0;
  for (const Matrix& k : kraus_) w += k.squaredNorm();
  return w / static_cast<double>(dim_in_);
}

bool CPMap::is_zero(double tol) const {
  return weight() <= tol * static_cast<double>(dim_in_ * dim_out_);
}

bool CPMap::is_trace_preserving(double tol) const {
  Matrix acc = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) acc += k.adjoint() * k;
  return (acc - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff() <= tol;
}

CPMap CPMap::compose(const CPMap& inner) const {
  if (inner.dim_out_ != dim_in_) {
    throw StructuralError("CPMap::compose: intermediate dimension mismatch");
  }
  std::vector<Matrix> prod;
  prod.reserve(kraus_.size() * inner.kraus_.size());
  for (const Matrix& k : kraus_)
    for (const Matrix& j : inner.kraus_) prod.push_back(k * j);
  CPMap out(std::move(prod), inner.dim_in_, dim_out_);
  if (static_cast<Index>(out.kraus_.size()) > out.dim_in_ * out.dim_out_) {
    return out.canonicalized();
  }
  return out;
}

CPMap CPMap::tensor(const CPMap& other) const {
  std::vector<Matrix> prod;
  if (!kraus_.empty() && !other.kraus_.empty()) {
    prod.reserve(kraus_.size() * other.kraus_.size());
    for (const Matrix& k : kraus_)
      for (const Matrix& j : other.kraus_) prod.push_back(tsopt::tensor(k, j));
  }
  return CPMap(std::move(prod), dim_in_ * other.dim_in_, dim_out_ * other.dim_out_);
}

CPMap CPMap::scaled(double factor) const {
  if (factor < 0.0) throw DomainError("CPMap::scaled: negative factor");
  const double root = std::sqrt(factor);
  std::vector<Matrix> scaled_kraus;
  scaled_kraus.reserve(kraus_.size());
  for (const Matrix& k : kraus_) scaled_kraus.push_back(root * k);
  return CPMap(std::move(scaled_kraus), dim_in_, dim_out_);
}

CPMap CPMap::canonicalized(double tol) const {
  return CPMap(choi_to_kraus(choi(), dim_in_, dim_out_, tol), dim_in_, dim_out_);
}

Matrix kraus_to_choi(const std::vector<Matrix>& kraus, Index dim_in, Index dim_out) {
  Matrix choi = Matrix::Zero(dim_in * dim_out, dim_in * dim_out);
  for (const Matrix& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in) {
      throw StructuralError("kraus_to_choi: Kraus operator shape mismatch");
    }
    const Vector v = vec(k);
    choi += v * v.adjoint();
  }
  return choi;
}

namespace {

// Rotates the first component of modulus above 1e-12 onto the positive real
// axis. Leaves (numerically) zero vectors untouched.
void fix_phase(Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

bool lex_less_real(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
  }
  return false;
}

}  // namespace

std::vector<Matrix> choi_to_kraus(const Matrix& choi, Index dim_in, Index dim_out, double tol) {
  if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out) {
    throw StructuralError("choi_to_kraus: Choi matrix size mismatch");
  }
  require_hermitian(choi);
  const Matrix h = (choi + choi.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -tol) {
    throw DomainError("choi_to_kraus: Choi matrix is not positive semidefinite");
  }

  struct Term {
    double value;
    Vector vector;
  };
  std::vector<Term> terms;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol) {
      Vector v = es.eigenvectors().col(i);
      fix_phase(v);
      terms.push_back({ev(i), std::move(v)});
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.value != b.value) return a.value > b.value;
    return lex_less_real(a.vector, b.vector);
  });

  std::vector<Matrix> kraus;
  kraus.reserve(terms.size());
  for (const Term& t : terms) {
    kraus.push_back(std::sqrt(t.value) * unvec(t.vector, dim_out, dim_in));
  }
  return kraus;
}

}  // namespace tsopt
