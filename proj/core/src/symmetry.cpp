#include "tsopt/symmetry.hpp"

#include <cmath>
#include <utility>

#include <Eigen/LU>

#include "tsopt/random.hpp"

namespace tsopt {
namespace {

Index dims_product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

Matrix inverse_of(const Matrix& s) {
  Eigen::FullPivLU<Matrix> lu(s);
  if (!lu.isInvertible()) throw DomainError("symmetry: S matrix is singular");
  return lu.inverse();
}

// Per-operation data for Kraus-level reversal of a map from A to B.
struct ReversalFrame {
  Matrix s_in_inv;  // S_A^{-1}
  Matrix s_out;     // S_B
  Matrix b_in;      // transposition basis on A
  Matrix b_out;     // transposition basis on B
};

ReversalFrame make_frame(const SymmetryTransform& t, Index dim_in, Index dim_out,
                         std::vector<Index> in_dims, std::vector<Index> out_dims) {
  if (!t.is_type_two()) throw DomainError("reverse: reversal requires a Type II transformation");
  if (in_dims.empty()) in_dims = {dim_in};
  if (out_dims.empty()) out_dims = {dim_out};
  if (dims_product(in_dims) != dim_in || dims_product(out_dims) != dim_out)
    throw StructuralError("reverse: factor dimensions do not match the map");
  ReversalFrame f;
  f.s_in_inv = inverse_of(t.s_for_dims(in_dims));
  f.s_out = t.s_for_dims(out_dims);
  f.b_in = t.basis_for_dims(in_dims);
  f.b_out = t.basis_for_dims(out_dims);
  return f;
}

// (S_B τ(K) S_A^{-1})†, before the common λ normalization.
Matrix reversed_kraus(const ReversalFrame& f, bool transpose, const Matrix& k) {
  const Matrix tk = transpose ? conjugate_in_basis(k, f.b_out, f.b_in) : k;
  return (f.s_out * tk * f.s_in_inv).adjoint();
}

}  // namespace

Matrix transpose_in_basis(const Matrix& m, const Matrix& b) {
  return b * (b.adjoint() * m * b).transpose() * b.adjoint();
}

Matrix conjugate_in_basis(const Matrix& m, const Matrix& b_out, const Matrix& b_in) {
  return b_out * (b_out.adjoint() * m * b_in).conjugate() * b_in.adjoint();
}

SymmetryTransform::SymmetryTransform(SymmetryKind kind, bool transpose, std::map<Index, Matrix> s,
                                     std::map<Index, Matrix> basis, bool default_identity)
    : kind_(kind),
      transpose_(transpose),
      s_(std::move(s)),
      basis_(std::move(basis)),
      default_identity_(default_identity) {
  for (const auto& [dim, mat] : s_) {
    if (dim < 1) throw StructuralError("symmetry: dimension keys must be positive");
    if (mat.rows() != dim || mat.cols() != dim)
      throw StructuralError("symmetry: S matrix shape does not match its dimension key");
    Eigen::FullPivLU<Matrix> lu(mat);
    if (!lu.isInvertible()) throw DomainError("symmetry: S matrix is singular");
  }
  for (const auto& [dim, mat] : basis_) {
    if (dim < 1) throw StructuralError("symmetry: dimension keys must be positive");
    if (mat.rows() != dim || mat.cols() != dim)
      throw StructuralError("symmetry: basis shape does not match its dimension key");
    const double dev =
        (mat.adjoint() * mat - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > kProbabilityTol) throw DomainError("symmetry: transposition basis must be unitary");
  }
}

SymmetryTransform SymmetryTransform::identity_transform(SymmetryKind kind, bool transpose) {
  return SymmetryTransform(kind, transpose, {}, {}, true);
}

Matrix SymmetryTransform::s_for(Index dim) const {
  const auto it = s_.find(dim);
  if (it != s_.end()) return it->second;
  // A scalar S only rescales, so the trivial system never needs an entry.
  if (dim == 1 || default_identity_) return Matrix::Identity(dim, dim);
  throw DomainError("symmetry: no S matrix for dimension " + std::to_string(dim));
}

Matrix SymmetryTransform::basis_for(Index dim) const {
  const auto it = basis_.find(dim);
  if (it != basis_.end()) return it->second;
  return Matrix::Identity(dim, dim);
}

Matrix SymmetryTransform::s_for_dims(const std::vector<Index>& dims) const {
  if (dims.empty()) throw StructuralError("symmetry: empty dimension list");
  Matrix acc = s_for(dims.front());
  for (std::size_t i = 1; i < dims.size(); ++i) acc = tensor(acc, s_for(dims[i]));
  return acc;
}

Matrix SymmetryTransform::basis_for_dims(const std::vector<Index>& dims) const {
  if (dims.empty()) throw StructuralError("symmetry: empty dimension list");
  Matrix acc = basis_for(dims.front());
  for (std::size_t i = 1; i < dims.size(); ++i) acc = tensor(acc, basis_for(dims[i]));
  return acc;
}

bool SymmetryTransform::all_unitary(double tol) const {
  for (const auto& [dim, mat] : s_) {
    const double dev =
        (mat.adjoint() * mat - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > tol) return false;
  }
  return true;
}

PairImage apply_to_state(const SymmetryTransform& t, const StatePair& s) {
  const Index d = s.dim();
  const Matrix smat = t.s_for(d);
  const Matrix b = t.basis_for(d);
  const Matrix x = t.transpose() ? transpose_in_basis(s.rho, b) : s.rho;
  const Matrix x_bar = t.transpose() ? transpose_in_basis(s.rho_bar, b) : s.rho_bar;
  const Matrix img = smat * x * smat.adjoint();
  const Matrix img_bar = smat * x_bar * smat.adjoint();
  const double norm = img_bar.trace().real();
  if (norm <= 0) throw DomainError("symmetry: coarse image has no weight");
  if (t.is_type_two()) {
    const double scale = static_cast<double>(d) / norm;
    return EffectPair(img * scale, img_bar * scale);
  }
  return StatePair(img / norm, img_bar / norm);
}

PairImage apply_to_effect(const SymmetryTransform& t, const EffectPair& e) {
  const Index d = e.dim();
  const Matrix sinv = inverse_of(t.s_for(d));
  const Matrix b = t.basis_for(d);
  const Matrix x = t.transpose() ? transpose_in_basis(e.effect, b) : e.effect;
  const Matrix x_bar = t.transpose() ? transpose_in_basis(e.effect_bar, b) : e.effect_bar;
  const Matrix img = sinv.adjoint() * x * sinv;
  const Matrix img_bar = sinv.adjoint() * x_bar * sinv;
  const double norm = img_bar.trace().real();
  if (norm <= 0) throw DomainError("symmetry: coarse image has no weight");
  if (t.is_type_two()) return StatePair(img / norm, img_bar / norm);
  const double scale = static_cast<double>(d) / norm;
  return EffectPair(img * scale, img_bar * scale);
}

double pairing_deviation(const SymmetryTransform& t, const StatePair& s, const EffectPair& e) {
  const double p = probability(s, e);
  double p_image = 0.0;
  if (t.is_type_two()) {
    // States and effects trade places, so the transformed effect is paired
    // with the transformed state in the opposite roles.
    p_image = probability(std::get<StatePair>(apply_to_effect(t, e)),
                          std::get<EffectPair>(apply_to_state(t, s)));
  } else {
    p_image = probability(std::get<StatePair>(apply_to_state(t, s)),
                          std::get<EffectPair>(apply_to_effect(t, e)));
  }
  return std::abs(p - p_image);
}

double verify_invariance(const SymmetryTransform& t,
                         const std::vector<std::pair<StatePair, EffectPair>>& sample) {
  double worst = 0.0;
  for (const auto& [s, e] : sample) worst = std::max(worst, pairing_deviation(t, s, e));
  return worst;
}

InvarianceReport verify_invariance(const SymmetryTransform& t, int n_samples,
                                   unsigned long long seed, std::vector<Index> dims) {
  if (n_samples < 1) throw StructuralError("verify_invariance: need at least one sample");
  if (dims.empty()) {
    for (const auto& [dim, mat] : t.s_table())
      if (dim > 1) dims.push_back(dim);
    if (dims.empty()) dims = {2, 3};
  }
  Rng rng(seed);
  InvarianceReport report;
  report.s_unitary = t.all_unitary();
  for (Index d : dims) {
    for (int k = 0; k < n_samples; ++k) {
      const StatePair s = random_state_pair(d, rng);
      const EffectPair e = random_effect_pair(d, rng);
      report.max_deviation = std::max(report.max_deviation, pairing_deviation(t, s, e));
      ++report.n_samples;
    }
  }
  return report;
}

InvolutionReport check_involution(const SymmetryTransform& t, unsigned long long seed,
                                  int n_samples, double tol) {
  InvolutionReport report;
  report.s_unitary = t.all_unitary();

  std::vector<Index> dims;
  for (const auto& [dim, mat] : t.s_table())
    if (dim > 1) dims.push_back(dim);
  if (dims.empty()) dims = {2};

  // Double application conjugates states by a single matrix M built from S
  // and the transposition unitary Q = B Bᵀ; it is the identity map exactly
  // when M ∝ 1. For the Type II transpose branch the constant is forced to
  // ±1 and fixes the parity.
  bool parity_seen = false;
  bool parity_mixed = false;
  InvolutionParity parity = InvolutionParity::None;
  for (Index d : dims) {
    const Matrix s = t.s_for(d);
    const Matrix b = t.basis_for(d);
    const Matrix q = b * b.transpose();
    Matrix m;
    if (!t.is_type_two()) {
      m = t.transpose() ? Matrix(s * q * s.conjugate() * q.conjugate()) : Matrix(s * s);
    } else {
      const Matrix sinv_adj = inverse_of(s).adjoint();
      m = t.transpose() ? Matrix(sinv_adj * q * s.conjugate() * q.conjugate())
                        : Matrix(sinv_adj * s);
    }
    const Complex c = m.trace() / static_cast<double>(d);
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0e-300);
    const double dev = (m - c * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() / scale;
    report.algebraic_deviation = std::max(report.algebraic_deviation, dev);
    if (t.is_type_two() && t.transpose() && dev <= tol) {
      InvolutionParity here = InvolutionParity::None;
      if (std::abs(c - 1.0) <= tol) here = InvolutionParity::Bosonic;
      else if (std::abs(c + 1.0) <= tol) here = InvolutionParity::Fermionic;
      if (!parity_seen) {
        parity = here;
        parity_seen = true;
      } else if (here != parity) {
        parity_mixed = true;
      }
    }
  }
  if (parity_mixed) parity = InvolutionParity::None;

  Rng rng(seed);
  for (Index d : dims) {
    for (int k = 0; k < n_samples; ++k) {
      const StatePair s = random_state_pair(d, rng);
      const PairImage once_s = apply_to_state(t, s);
      const StatePair s2 = t.is_type_two()
                               ? std::get<StatePair>(apply_to_effect(t, std::get<EffectPair>(once_s)))
                               : std::get<StatePair>(apply_to_state(t, std::get<StatePair>(once_s)));
      double dev = (s2.rho - s.rho).cwiseAbs().maxCoeff();
      dev = std::max(dev, (s2.rho_bar - s.rho_bar).cwiseAbs().maxCoeff());

      const EffectPair e = random_effect_pair(d, rng);
      const PairImage once_e = apply_to_effect(t, e);
      const EffectPair e2 = t.is_type_two()
                                ? std::get<EffectPair>(apply_to_state(t, std::get<StatePair>(once_e)))
                                : std::get<EffectPair>(apply_to_effect(t, std::get<EffectPair>(once_e)));
      dev = std::max(dev, (e2.effect - e.effect).cwiseAbs().maxCoeff());
      dev = std::max(dev, (e2.effect_bar - e.effect_bar).cwiseAbs().maxCoeff());
      report.functional_deviation = std::max(report.functional_deviation, dev);
    }
  }

  report.involution =
      report.algebraic_deviation <= tol && report.functional_deviation <= tol;
  if (t.is_type_two() && t.transpose() && report.involution &&
      parity == InvolutionParity::None)
    report.involution = false;
  report.parity = report.involution ? parity : InvolutionParity::None;
  return report;
}

ReversedTransformation reverse_transformation(const TransformationPair& tp,
                                              const SymmetryTransform& t,
                                              std::vector<Index> in_dims,
                                              std::vector<Index> out_dims) {
  const Index d_a = tp.map.dim_in();
  const Index d_b = tp.map.dim_out();
  const ReversalFrame f = make_frame(t, d_a, d_b, std::move(in_dims), std::move(out_dims));

  auto reverse_all = [&](const CPMap& m) {
    std::vector<Matrix> out;
    out.reserve(m.kraus().size());
    for (const Matrix& k : m.kraus()) out.push_back(reversed_kraus(f, t.transpose(), k));
    return out;
  };
  std::vector<Matrix> fine = reverse_all(tp.map);
  std::vector<Matrix> coarse = reverse_all(tp.map_bar);

  double total = 0.0;
  for (const Matrix& k : coarse) total += k.squaredNorm();
  total /= static_cast<double>(d_b);
  if (total <= 0) throw DomainError("reverse: reversed map has no weight");
  const double lambda = std::sqrt(total);
  for (Matrix& k : fine) k /= lambda;
  for (Matrix& k : coarse) k /= lambda;
  return {TransformationPair(CPMap(std::move(fine), d_b, d_a), CPMap(std::move(coarse), d_b, d_a)),
          lambda};
}

ReversedOperation reverse_operation(const GeneralizedOperation& op, const SymmetryTransform& t,
                                    std::vector<Index> in_dims, std::vector<Index> out_dims) {
  const Index d_a = op.dim_in();
  const Index d_b = op.dim_out();
  const ReversalFrame f = make_frame(t, d_a, d_b, std::move(in_dims), std::move(out_dims));

  std::vector<std::vector<Matrix>> raw;
  raw.reserve(static_cast<std::size_t>(op.n_outcomes()));
  double total = 0.0;
  for (const CPMap& m : op.maps()) {
    std::vector<Matrix> rev;
    rev.reserve(m.kraus().size());
    for (const Matrix& k : m.kraus()) {
      rev.push_back(reversed_kraus(f, t.transpose(), k));
      total += rev.back().squaredNorm();
    }
    raw.push_back(std::move(rev));
  }
  total /= static_cast<double>(d_b);
  if (total <= 0) throw DomainError("reverse: reversed operation has no weight");
  const double lambda = std::sqrt(total);

  std::vector<CPMap> maps;
  maps.reserve(raw.size());
  for (std::vector<Matrix>& rev : raw) {
    for (Matrix& k : rev) k /= lambda;
    maps.emplace_back(std::move(rev), d_b, d_a);
  }
  return {GeneralizedOperation(std::move(maps), op.labels()), lambda};
}

Circuit reverse_circuit(const Circuit& c, const SymmetryTransform& t) {
  c.validate();
  if (!t.is_type_two()) throw DomainError("reverse: circuit reversal requires a Type II transformation");

  std::vector<CircuitNode> nodes;
  nodes.reserve(c.nodes().size());
  for (const CircuitNode& n : c.nodes()) {
    std::vector<Index> in_dims;
    std::vector<Index> out_dims;
    in_dims.reserve(n.input_systems.size());
    out_dims.reserve(n.output_systems.size());
    for (const std::string& sys : n.input_systems) in_dims.push_back(c.system_dim(sys));
    for (const std::string& sys : n.output_systems) out_dims.push_back(c.system_dim(sys));
    GeneralizedOperation rev = reverse_operation(n.op, t, in_dims, out_dims).op;
    nodes.push_back(CircuitNode{n.name, n.output_systems, n.input_systems, std::move(rev)});
  }

  std::vector<CircuitWire> wires;
  wires.reserve(c.wires().size());
  for (const CircuitWire& w : c.wires())
    wires.push_back(CircuitWire{w.to_node, w.to_port, w.from_node, w.from_port});

  return Circuit(c.systems(), std::move(nodes), std::move(wires));
}

}  // namespace tsopt
