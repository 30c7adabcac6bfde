#include "tsopt/random.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace tsopt {

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

Matrix random_unitary(Index dim, Rng& rng) {
  const Matrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    q.col(i) *= mag > 0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

Matrix random_psd(Index dim, Rng& rng) {
  const Matrix g = random_gaussian(dim, dim, rng);
  return g * g.adjoint();
}

Matrix random_density(Index dim, Rng& rng) {
  Matrix p = random_psd(dim, rng);
  return p / p.trace().real();
}

Matrix random_psd_conditioned(Index dim, double max_condition, double trace, Rng& rng) {
  if (max_condition < 1.0) throw DomainError("random_psd_conditioned: condition must be >= 1");
  std::uniform_real_distribution<double> uni(1.0, max_condition);
  Eigen::VectorXd ev(dim);
  for (Index i = 0; i < dim; ++i) ev(i) = uni(rng);
  const Matrix u = random_unitary(dim, rng);
  Matrix m = u * ev.asDiagonal() * u.adjoint();
  return m * (trace / m.trace().real());
}

Matrix random_projector(Index dim, Index rank, Rng& rng) {
  if (rank < 0 || rank > dim) throw StructuralError("random_projector: rank out of range");
  const Matrix u = random_unitary(dim, rng);
  const Matrix cols = u.leftCols(rank);
  return cols * cols.adjoint();
}

CPMap random_channel(Index dim_in, Index dim_out, Index n_kraus, Rng& rng) {
  if (n_kraus < 1) throw StructuralError("random_channel: need at least one Kraus operator");
  std::vector<Matrix> kraus;
  kraus.reserve(n_kraus);
  for (Index a = 0; a < n_kraus; ++a) kraus.push_back(random_gaussian(dim_out, dim_in, rng));
  Matrix gram = Matrix::Zero(dim_in, dim_in);
  for (const Matrix& k : kraus) gram += k.adjoint() * k;
  const Matrix white = pinv_sqrt_psd(gram, 1e-14);
  for (Matrix& k : kraus) k = k * white;
  return CPMap(std::move(kraus), dim_in, dim_out);
}

std::vector<Matrix> random_povm(Index dim, Index n, Rng& rng) {
  if (n < 1) throw StructuralError("random_povm: need at least one element");
  std::vector<Matrix> raw;
  raw.reserve(n);
  Matrix total = Matrix::Zero(dim, dim);
  for (Index j = 0; j < n; ++j) {
    raw.push_back(random_psd(dim, rng));
    total += raw.back();
  }
  const Matrix white = pinv_sqrt_psd(total, 1e-14);
  for (Matrix& e : raw) e = white * e * white;
  return raw;
}

Matrix random_contraction(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd ev(dim);
  for (Index i = 0; i < dim; ++i) ev(i) = uni(rng);
  const Matrix u = random_unitary(dim, rng);
  return u * ev.asDiagonal() * u.adjoint();
}

StatePair random_state_pair(Index dim, Rng& rng) {
  const Matrix rho_bar = random_density(dim, rng);
  const Matrix root = sqrt_psd(rho_bar);
  const Matrix rho = root * random_contraction(dim, rng) * root;
  return StatePair(rho, rho_bar);
}

EffectPair random_effect_pair(Index dim, Rng& rng) {
  Matrix e_bar = random_psd(dim, rng);
  e_bar *= static_cast<double>(dim) / e_bar.trace().real();
  const Matrix root = sqrt_psd(e_bar);
  const Matrix e = root * random_contraction(dim, rng) * root;
  return EffectPair(e, e_bar);
}

Matrix random_invertible(Index dim, Rng& rng, double max_condition) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Matrix g = random_gaussian(dim, dim, rng);
    Eigen::JacobiSVD<Matrix> svd(g);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin > 0 && smax / smin <= max_condition) return g;
  }
  throw DomainError("random_invertible: failed to draw a well-conditioned matrix");
}

}  // namespace tsopt
