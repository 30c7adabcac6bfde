#include "tsopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

#include "tsopt/random.hpp"

namespace tsopt {
namespace {

constexpr int kRestarts = 64;
constexpr int kIterations = 500;
constexpr double kMinStep = 1e-8;

Matrix hermitized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Eigenvalue clamp of a hermitian matrix into [lo, hi].
Matrix clipped(const Matrix& m, double lo, double hi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitized(m));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = std::clamp(ev(i), lo, hi);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Pairing value Tr(x a)/Tr(x_bar a_bar) with the null branch mapped to 0.
double ratio(const Matrix& x, const Matrix& x_bar, const Matrix& a, const Matrix& a_bar) {
  const double den = (x_bar * a_bar).trace().real();
  if (den <= kNullScale * static_cast<double>(a.rows())) return 0.0;
  return (x * a).trace().real() / den;
}

// Feasible point for the shared ascent: x_bar PSD with the target trace and
// 0 <= x <= x_bar.
void project_pair(Matrix& x, Matrix& x_bar, double trace_target) {
  const Index d = x_bar.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitized(x_bar));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  double total = ev.sum();
  if (total <= 0) {
    x_bar = Matrix::Identity(d, d) * (trace_target / static_cast<double>(d));
  } else {
    ev *= trace_target / total;
    x_bar = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }

  // Whiten, clamp into [0,1], color back; components in x_bar's kernel are
  // annihilated, so support(x) stays inside support(x_bar).
  Eigen::SelfAdjointEigenSolver<Matrix> bs(hermitized(x_bar));
  Eigen::VectorXd root(d), root_inv(d);
  for (Index i = 0; i < d; ++i) {
    const double v = std::max(bs.eigenvalues()(i), 0.0);
    root(i) = std::sqrt(v);
    root_inv(i) = v > kPsdTol ? 1.0 / root(i) : 0.0;
  }
  const Matrix vecs = bs.eigenvectors();
  const Matrix white = vecs * root_inv.asDiagonal() * vecs.adjoint();
  const Matrix color = vecs * root.asDiagonal() * vecs.adjoint();
  const Matrix unit = clipped(white * hermitized(x) * white, 0.0, 1.0);
  x = color * unit * color;
}

struct AscentResult {
  Matrix x;
  Matrix x_bar;
  double value = -1.0;
};

// Projected gradient ascent for sup |Tr(x a1)/Tr(x_bar a1_bar) -
// Tr(x a2)/Tr(x_bar a2_bar)| over 0 <= x <= x_bar, Tr(x_bar) = trace_target.
// Restart 0 starts from the positive part of a1 - a2 (the unconstrained
// coarse-part optimum); the rest start from seeded random pairs. Only
// feasible iterates are scored, so the result is always a valid lower bound.
AscentResult pair_ascent(const Matrix& a1, const Matrix& a1_bar, const Matrix& a2,
                         const Matrix& a2_bar, double trace_target, unsigned long long seed) {
  const Index d = a1.rows();
  Rng rng(seed);
  AscentResult best;

  for (int restart = 0; restart < kRestarts; ++restart) {
    Matrix x, x_bar;
    if (restart == 0) {
      x_bar = Matrix::Identity(d, d) * (trace_target / static_cast<double>(d));
      x = clipped(a1 - a2, 0.0, 1e30);
    } else if (trace_target > 1.0) {
      const EffectPair e = random_effect_pair(d, rng);
      x = e.effect;
      x_bar = e.effect_bar;
    } else {
      const StatePair s = random_state_pair(d, rng);
      x = s.rho;
      x_bar = s.rho_bar;
    }
    project_pair(x, x_bar, trace_target);

    const double sign = restart % 2 == 0 ? 1.0 : -1.0;
    double f = sign * (ratio(x, x_bar, a1, a1_bar) - ratio(x, x_bar, a2, a2_bar));
    double step = 0.5;

    for (int iter = 0; iter < kIterations && step >= kMinStep; ++iter) {
      const double den1 = (x_bar * a1_bar).trace().real();
      const double den2 = (x_bar * a2_bar).trace().real();
      const double null_eps = kNullScale * static_cast<double>(d);
      Matrix grad_x = Matrix::Zero(d, d);
      Matrix grad_bar = Matrix::Zero(d, d);
      if (den1 > null_eps) {
        grad_x += sign / den1 * a1;
        grad_bar -= sign * (x * a1).trace().real() / (den1 * den1) * a1_bar;
      }
      if (den2 > null_eps) {
        grad_x -= sign / den2 * a2;
        grad_bar += sign * (x * a2).trace().real() / (den2 * den2) * a2_bar;
      }

      Matrix xn = x + step * grad_x;
      Matrix xbn = x_bar + step * grad_bar;
      project_pair(xn, xbn, trace_target);
      const double fn = sign * (ratio(xn, xbn, a1, a1_bar) - ratio(xn, xbn, a2, a2_bar));
      if (fn > f) {
        x = std::move(xn);
        x_bar = std::move(xbn);
        f = fn;
      } else {
        step *= 0.5;
      }
    }

    const double value =
        std::abs(ratio(x, x_bar, a1, a1_bar) - ratio(x, x_bar, a2, a2_bar));
    if (value > best.value) {
      best.x = x;
      best.x_bar = x_bar;
      best.value = value;
    }
  }
  return best;
}

// Effect pair (E_bar; E_bar) supported away from a.rho and from the
// conditional remainder of b, but overlapping b.rho: it assigns probability
// 0 to a and 1 to b. Returns the pair only when the overlap is genuine.
std::optional<EffectPair> split_effect(const StatePair& a, const StatePair& b) {
  const Index d = a.dim();
  const Matrix blocked = a.rho + (b.rho_bar - b.rho);
  const Matrix p = Matrix::Identity(d, d) - support_projector(blocked);
  const double overlap = (p * b.rho * p).trace().real();
  if (overlap <= kPsdTol * static_cast<double>(d)) return std::nullopt;
  const Matrix e_bar = p * (static_cast<double>(d) / p.trace().real());
  return EffectPair(e_bar, e_bar);
}

// Mirror construction: deterministic state supported away from a.effect and
// from b's coarse remainder, overlapping b.effect.
std::optional<StatePair> split_state(const EffectPair& a, const EffectPair& b) {
  const Index d = a.dim();
  const Matrix blocked = a.effect + (b.effect_bar - b.effect);
  const Matrix p = Matrix::Identity(d, d) - support_projector(blocked);
  const double overlap = (p * b.effect * p).trace().real();
  if (overlap <= kPsdTol * static_cast<double>(d)) return std::nullopt;
  const Matrix rho = p / p.trace().real();
  return StatePair(rho, rho);
}

}  // namespace

DistanceReport state_distance(const StatePair& s1, const StatePair& s2,
                              unsigned long long seed) {
  if (s1.dim() != s2.dim()) throw StructuralError("state_distance: dimension mismatch");
  const Index d = s1.dim();

  const double eq = std::max((s1.rho - s2.rho).cwiseAbs().maxCoeff(),
                             (s1.rho_bar - s2.rho_bar).cwiseAbs().maxCoeff());
  if (eq <= kTightTol) {
    return {0.0, true, EffectPair(Matrix::Identity(d, d), Matrix::Identity(d, d))};
  }

  for (const auto& witness : {split_effect(s1, s2), split_effect(s2, s1)}) {
    if (witness.has_value()) {
      const double value = std::abs(probability(s1, *witness) - probability(s2, *witness));
      return {value, true, *witness};
    }
  }

  const AscentResult best =
      pair_ascent(s1.rho, s1.rho_bar, s2.rho, s2.rho_bar, static_cast<double>(d), seed);
  EffectPair witness(best.x, best.x_bar);
  const double value = std::abs(probability(s1, witness) - probability(s2, witness));
  return {value, false, std::move(witness)};
}

EffectDistanceReport effect_distance(const EffectPair& e1, const EffectPair& e2,
                                     unsigned long long seed) {
  if (e1.dim() != e2.dim()) throw StructuralError("effect_distance: dimension mismatch");
  const Index d = e1.dim();

  const double eq = std::max((e1.effect - e2.effect).cwiseAbs().maxCoeff(),
                             (e1.effect_bar - e2.effect_bar).cwiseAbs().maxCoeff());
  if (eq <= kTightTol) {
    const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
    return {0.0, true, StatePair(mixed, mixed)};
  }

  for (const auto& witness : {split_state(e1, e2), split_state(e2, e1)}) {
    if (witness.has_value()) {
      const double value = std::abs(probability(*witness, e1) - probability(*witness, e2));
      return {value, true, *witness};
    }
  }

  const AscentResult best =
      pair_ascent(e1.effect, e1.effect_bar, e2.effect, e2.effect_bar, 1.0, seed);
  StatePair witness(best.x, best.x_bar);
  const double value = std::abs(probability(witness, e1) - probability(witness, e2));
  return {value, false, std::move(witness)};
}

DistinguishabilityReport perfectly_distinguishable(const StatePair& s1, const StatePair& s2) {
  if (s1.dim() != s2.dim())
    throw StructuralError("perfectly_distinguishable: dimension mismatch");
  const double det1 = (s1.rho - s1.rho_bar).cwiseAbs().maxCoeff();
  const double det2 = (s2.rho - s2.rho_bar).cwiseAbs().maxCoeff();
  if (det1 > kProbabilityTol || det2 > kProbabilityTol)
    throw DomainError("perfectly_distinguishable: states must be deterministic");

  const Index d = s1.dim();
  const Matrix p1 = support_projector(s1.rho_bar);
  const Matrix p2 = support_projector(s2.rho_bar);
  const bool orthogonal = (p1 * p2).cwiseAbs().maxCoeff() <= kProbabilityTol;
  GeneralizedOperation meas =
      make_measurement({p1, Matrix::Identity(d, d) - p1}, {"0", "1"});
  return {orthogonal, std::move(meas)};
}

}  // namespace tsopt
