#include "tsopt/operation.hpp"

#include <cmath>
#include <utility>

#include "tsopt/random.hpp"

namespace tsopt {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

double null_threshold(Index dim_in, Index dim_out) {
  return kNullScale * static_cast<double>(dim_in * dim_out);
}

void require_psd_operator(const Matrix& m, const char* what) {
  if (!is_psd(m)) throw DomainError(std::string(what) + ": operator is not PSD");
}

}  // namespace

GeneralizedOperation::GeneralizedOperation(std::vector<CPMap> maps,
                                           std::vector<std::string> labels)
    : maps_(std::move(maps)), labels_(std::move(labels)) {
  if (maps_.empty()) throw StructuralError("operation: needs at least one outcome");
  dim_in_ = maps_.front().dim_in();
  dim_out_ = maps_.front().dim_out();
  for (const CPMap& m : maps_) {
    if (m.dim_in() != dim_in_ || m.dim_out() != dim_out_) {
      throw StructuralError("operation: outcome maps have inconsistent dimensions");
    }
  }
  if (labels_.empty()) {
    labels_ = default_labels(maps_.size());
  } else if (labels_.size() != maps_.size()) {
    throw StructuralError("operation: label count does not match outcome count");
  }

  double total = 0.0;
  for (const CPMap& m : maps_) total += m.weight();
  if (total <= null_threshold(dim_in_, dim_out_)) {
    throw NullOperationError("operation: total weight is zero");
  }
  if (total != 1.0) {
    for (CPMap& m : maps_) m = m.scaled(1.0 / total);
  }
}

CPMap GeneralizedOperation::coarse() const {
  std::vector<Matrix> all;
  for (const CPMap& m : maps_) {
    all.insert(all.end(), m.kraus().begin(), m.kraus().end());
  }
  CPMap out(std::move(all), dim_in_, dim_out_);
  if (static_cast<Index>(out.kraus().size()) > dim_in_ * dim_out_) return out.canonicalized();
  return out;
}

Matrix GeneralizedOperation::state_operator(Index i) const {
  if (!is_preparation()) throw StructuralError("state_operator: operation is not a preparation");
  return map(i).apply(Matrix::Identity(1, 1));
}

Matrix GeneralizedOperation::effect_operator(Index j) const {
  if (!is_measurement()) throw StructuralError("effect_operator: operation is not a measurement");
  return map(j).apply_adjoint(Matrix::Identity(1, 1));
}

GeneralizedOperation make_operation(std::vector<CPMap> maps, std::vector<std::string> labels) {
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

GeneralizedOperation make_preparation(const std::vector<Matrix>& states,
                                      std::vector<std::string> labels) {
  if (states.empty()) throw StructuralError("make_preparation: needs at least one outcome");
  const Index d = states.front().rows();
  std::vector<CPMap> maps;
  maps.reserve(states.size());
  for (const Matrix& rho : states) {
    if (rho.rows() != d || rho.cols() != d) {
      throw StructuralError("make_preparation: inconsistent operator dimensions");
    }
    require_psd_operator(rho, "make_preparation");
    // The Choi matrix of a map from the trivial system is the output operator.
    maps.emplace_back(choi_to_kraus(rho, 1, d), 1, d);
  }
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

GeneralizedOperation make_measurement(const std::vector<Matrix>& effects,
                                      std::vector<std::string> labels) {
  if (effects.empty()) throw StructuralError("make_measurement: needs at least one outcome");
  const Index d = effects.front().rows();
  std::vector<CPMap> maps;
  maps.reserve(effects.size());
  for (const Matrix& e : effects) {
    if (e.rows() != d || e.cols() != d) {
      throw StructuralError("make_measurement: inconsistent operator dimensions");
    }
    require_psd_operator(e, "make_measurement");
    // A map into the trivial system with effect operator E has Choi Eᵀ.
    maps.emplace_back(choi_to_kraus(e.transpose(), d, 1), d, 1);
  }
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

bool is_standard(const GeneralizedOperation& op, double tol) {
  const Matrix marginal = partial_trace(op.coarse().choi(), op.dim_in(), op.dim_out(), Keep::First);
  return (marginal - Matrix::Identity(op.dim_in(), op.dim_in())).cwiseAbs().maxCoeff() <= tol;
}

StatePair::StatePair(Matrix rho_in, Matrix rho_bar_in)
    : rho(std::move(rho_in)), rho_bar(std::move(rho_bar_in)) {
  if (rho.rows() != rho_bar.rows() || rho.cols() != rho_bar.cols()) {
    throw StructuralError("StatePair: dimension mismatch");
  }
  require_psd_operator(rho, "StatePair");
  require_psd_operator(rho_bar, "StatePair");
  if (std::abs(rho_bar.trace().real() - 1.0) > kProbabilityTol) {
    throw DomainError("StatePair: coarse state must have unit trace");
  }
  if (!is_psd(rho_bar - rho)) {
    throw DomainError("StatePair: conditioned state is not dominated by the coarse state");
  }
}

StatePair StatePair::deterministic(const Matrix& density) {
  return StatePair(density, density);
}

EffectPair::EffectPair(Matrix effect_in, Matrix effect_bar_in)
    : effect(std::move(effect_in)), effect_bar(std::move(effect_bar_in)) {
  if (effect.rows() != effect_bar.rows() || effect.cols() != effect_bar.cols()) {
    throw StructuralError("EffectPair: dimension mismatch");
  }
  require_psd_operator(effect, "EffectPair");
  require_psd_operator(effect_bar, "EffectPair");
  const double d = static_cast<double>(effect.rows());
  if (std::abs(effect_bar.trace().real() - d) > kProbabilityTol * d) {
    throw DomainError("EffectPair: coarse effect must have trace equal to the dimension");
  }
  if (!is_psd(effect_bar - effect)) {
    throw DomainError("EffectPair: effect is not dominated by the coarse effect");
  }
}

EffectPair EffectPair::povm_element(const Matrix& e) {
  return EffectPair(e, Matrix::Identity(e.rows(), e.cols()));
}

TransformationPair::TransformationPair(CPMap map_in, CPMap map_bar_in)
    : map(std::move(map_in)), map_bar(std::move(map_bar_in)) {
  if (map.dim_in() != map_bar.dim_in() || map.dim_out() != map_bar.dim_out()) {
    throw StructuralError("TransformationPair: dimension mismatch");
  }
  if (std::abs(map_bar.weight() - 1.0) > kProbabilityTol) {
    throw DomainError("TransformationPair: coarse map must have unit weight");
  }
  const Matrix gap = map_bar.choi() - map.choi();
  if (!is_psd(gap)) {
    throw DomainError("TransformationPair: map is not dominated by the coarse map");
  }
}

double probability(const StatePair& state, const EffectPair& effect) {
  if (state.dim() != effect.dim()) throw StructuralError("probability: dimension mismatch");
  const double denom = (state.rho_bar * effect.effect_bar).trace().real();
  if (denom <= kNullScale * static_cast<double>(state.dim())) return 0.0;
  return (state.rho * effect.effect).trace().real() / denom;
}

JointDistribution joint_distribution(const GeneralizedOperation& prep,
                                     const GeneralizedOperation& meas) {
  if (!prep.is_preparation()) throw StructuralError("joint_distribution: first argument must be a preparation");
  if (!meas.is_measurement()) throw StructuralError("joint_distribution: second argument must be a measurement");
  if (prep.dim_out() != meas.dim_in()) throw StructuralError("joint_distribution: dimension mismatch");

  const Index d = prep.dim_out();
  Matrix rho_bar = Matrix::Zero(d, d);
  for (Index i = 0; i < prep.n_outcomes(); ++i) rho_bar += prep.state_operator(i);
  Matrix e_bar = Matrix::Zero(d, d);
  for (Index j = 0; j < meas.n_outcomes(); ++j) e_bar += meas.effect_operator(j);

  JointDistribution out;
  out.table = RealMatrix::Zero(prep.n_outcomes(), meas.n_outcomes());
  const double denom = (rho_bar * e_bar).trace().real();
  if (denom <= kNullScale * static_cast<double>(d)) {
    out.null = true;
    return out;
  }
  for (Index i = 0; i < prep.n_outcomes(); ++i) {
    const Matrix rho = prep.state_operator(i);
    for (Index j = 0; j < meas.n_outcomes(); ++j) {
      out.table(i, j) = (rho * meas.effect_operator(j)).trace().real() / denom;
    }
  }
  return out;
}

ConditionalDistribution conditional_distribution(const Matrix& rho_bar,
                                                 const GeneralizedOperation& meas) {
  if (!meas.is_measurement()) {
    throw StructuralError("conditional_distribution: operation is not a measurement");
  }
  if (rho_bar.rows() != meas.dim_in()) {
    throw StructuralError("conditional_distribution: dimension mismatch");
  }
  ConditionalDistribution out;
  out.p.assign(static_cast<std::size_t>(meas.n_outcomes()), 0.0);
  Matrix e_bar = Matrix::Zero(meas.dim_in(), meas.dim_in());
  for (Index j = 0; j < meas.n_outcomes(); ++j) e_bar += meas.effect_operator(j);
  const double denom = (rho_bar * e_bar).trace().real();
  if (denom <= kNullScale * static_cast<double>(meas.dim_in())) {
    out.null = true;
    return out;
  }
  for (Index j = 0; j < meas.n_outcomes(); ++j) {
    out.p[static_cast<std::size_t>(j)] =
        (rho_bar * meas.effect_operator(j)).trace().real() / denom;
  }
  return out;
}

std::optional<GeneralizedOperation> compose_sequential(const GeneralizedOperation& first,
                                                       const GeneralizedOperation& second) {
  if (first.dim_out() != second.dim_in()) {
    throw StructuralError("compose_sequential: intermediate dimension mismatch");
  }
  std::vector<CPMap> maps;
  std::vector<std::string> labels;
  maps.reserve(static_cast<std::size_t>(first.n_outcomes() * second.n_outcomes()));
  double total = 0.0;
  for (Index i = 0; i < first.n_outcomes(); ++i) {
    for (Index j = 0; j < second.n_outcomes(); ++j) {
      maps.push_back(second.map(j).compose(first.map(i)));
      labels.push_back(first.labels()[static_cast<std::size_t>(i)] + "," +
                       second.labels()[static_cast<std::size_t>(j)]);
      total += maps.back().weight();
    }
  }
  if (total <= null_threshold(first.dim_in(), second.dim_out())) return std::nullopt;
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

GeneralizedOperation compose_parallel(const GeneralizedOperation& first,
                                      const GeneralizedOperation& second) {
  std::vector<CPMap> maps;
  std::vector<std::string> labels;
  maps.reserve(static_cast<std::size_t>(first.n_outcomes() * second.n_outcomes()));
  for (Index i = 0; i < first.n_outcomes(); ++i) {
    for (Index j = 0; j < second.n_outcomes(); ++j) {
      maps.push_back(first.map(i).tensor(second.map(j)));
      labels.push_back(first.labels()[static_cast<std::size_t>(i)] + "," +
                       second.labels()[static_cast<std::size_t>(j)]);
    }
  }
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

UpdateKernel::UpdateKernel(RealMatrix t_in) : t(std::move(t_in)) {
  if (t.rows() < 1 || t.cols() < 1) throw StructuralError("UpdateKernel: empty kernel");
  for (Index i = 0; i < t.cols(); ++i) {
    double col = 0.0;
    for (Index j = 0; j < t.rows(); ++j) {
      if (t(j, i) < 0.0) throw StructuralError("UpdateKernel: negative entry");
      col += t(j, i);
    }
    if (col > 1.0 + kTightTol) {
      throw StructuralError("UpdateKernel: column sum exceeds one");
    }
  }
}

UpdateKernel UpdateKernel::coarse_grain(Index n_outcomes) {
  return UpdateKernel(RealMatrix::Ones(1, n_outcomes));
}

UpdateKernel UpdateKernel::select(Index n_outcomes, const std::vector<Index>& kept,
                                  double acceptance) {
  if (acceptance <= 0.0 || acceptance > 1.0) {
    throw DomainError("UpdateKernel::select: acceptance must be in (0, 1]");
  }
  RealMatrix t = RealMatrix::Zero(static_cast<Index>(kept.size()), n_outcomes);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (kept[j] < 0 || kept[j] >= n_outcomes) {
      throw StructuralError("UpdateKernel::select: outcome index out of range");
    }
    t(static_cast<Index>(j), kept[j]) = acceptance;
  }
  return UpdateKernel(std::move(t));
}

std::optional<GeneralizedOperation> update(const GeneralizedOperation& op,
                                           const UpdateKernel& kernel) {
  if (kernel.t.cols() != op.n_outcomes()) {
    throw StructuralError("update: kernel column count does not match outcome count");
  }
  const Index cap = op.dim_in() * op.dim_out();
  std::vector<CPMap> maps;
  maps.reserve(static_cast<std::size_t>(kernel.t.rows()));
  double total = 0.0;
  for (Index j = 0; j < kernel.t.rows(); ++j) {
    std::vector<Matrix> kraus;
    for (Index i = 0; i < op.n_outcomes(); ++i) {
      const double w = kernel.t(j, i);
      if (w == 0.0) continue;
      const double root = std::sqrt(w);
      for (const Matrix& k : op.map(i).kraus()) kraus.push_back(root * k);
    }
    CPMap m(std::move(kraus), op.dim_in(), op.dim_out());
    if (static_cast<Index>(m.kraus().size()) > cap) m = m.canonicalized();
    total += m.weight();
    maps.push_back(std::move(m));
  }
  if (total <= null_threshold(op.dim_in(), op.dim_out())) return std::nullopt;
  return GeneralizedOperation(std::move(maps));
}

GeneralizedOperation retrodictive_map(const GeneralizedOperation& boundary) {
  const double d = static_cast<double>(boundary.is_preparation() ? boundary.dim_out()
                                                                 : boundary.dim_in());
  if (boundary.is_preparation()) {
    std::vector<Matrix> effects;
    for (Index i = 0; i < boundary.n_outcomes(); ++i) {
      effects.push_back(d * boundary.state_operator(i));
    }
    return make_measurement(effects, boundary.labels());
  }
  if (boundary.is_measurement()) {
    std::vector<Matrix> states;
    for (Index j = 0; j < boundary.n_outcomes(); ++j) {
      states.push_back(boundary.effect_operator(j) / d);
    }
    return make_preparation(states, boundary.labels());
  }
  throw StructuralError("retrodictive_map: operation is neither a preparation nor a measurement");
}

StandardizedPair standardize(const GeneralizedOperation& prep, const GeneralizedOperation& meas) {
  if (!prep.is_preparation() || !meas.is_measurement() || prep.dim_out() != meas.dim_in()) {
    throw StructuralError("standardize: expected a preparation/measurement pair on one system");
  }
  const Index d = prep.dim_out();
  Matrix e_bar = Matrix::Zero(d, d);
  for (Index j = 0; j < meas.n_outcomes(); ++j) e_bar += meas.effect_operator(j);
  const Eigen::VectorXd ev = hermitian_eigenvalues(e_bar);
  if (ev.minCoeff() <= kPsdTol) {
    throw DomainError("standardize: coarse effect is singular");
  }
  const Matrix root = sqrt_psd(e_bar);
  const Matrix inv_root = pinv_sqrt_psd(e_bar);

  std::vector<Matrix> states;
  for (Index i = 0; i < prep.n_outcomes(); ++i) {
    states.push_back(root * prep.state_operator(i) * root);
  }
  std::vector<Matrix> effects;
  for (Index j = 0; j < meas.n_outcomes(); ++j) {
    effects.push_back(inv_root * meas.effect_operator(j) * inv_root);
  }
  return {make_preparation(states, prep.labels()), make_measurement(effects, meas.labels())};
}

ConvexityWitness convexity_witness(const StatePair& s1, const StatePair& s2, double q,
                                   unsigned long long seed, int n_samples) {
  if (s1.dim() != s2.dim()) throw StructuralError("convexity_witness: dimension mismatch");
  if (q < 0.0 || q > 1.0) throw DomainError("convexity_witness: weight must be in [0, 1]");
  const Index d = s1.dim();

  const StatePair mix = StatePair::deterministic(q * s1.rho_bar + (1.0 - q) * s2.rho_bar);
  ConvexityWitness best{0.0, EffectPair::povm_element(Matrix::Identity(d, d))};
  if ((s1.rho_bar - s2.rho_bar).cwiseAbs().maxCoeff() <= kTightTol) return best;

  Rng rng(seed);
  std::uniform_int_distribution<Index> rank_dist(1, d > 1 ? d - 1 : 1);
  for (int n = 0; n < n_samples; ++n) {
    const Matrix e_bar = random_psd_conditioned(d, 10.0, static_cast<double>(d), rng);
    const Matrix root = sqrt_psd(e_bar);
    const Matrix proj = random_projector(d, rank_dist(rng), rng);
    const Matrix e = root * proj * root;
    EffectPair eff(e, e_bar);
    const double p_mix = probability(mix, eff);
    const double p1 = probability(StatePair::deterministic(s1.rho_bar), eff);
    const double p2 = probability(StatePair::deterministic(s2.rho_bar), eff);
    const double gap = std::abs(p_mix - q * p1 - (1.0 - q) * p2);
    if (gap > best.gap) best = {gap, eff};
  }
  return best;
}

}  // namespace tsopt
