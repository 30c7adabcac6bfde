#include "tsopt/classical.hpp"

#include <cmath>
#include <utility>

namespace tsopt {
namespace {

Matrix bit_diag(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

bool is_diagonal(const GeneralizedOperation& op, double tol) {
  for (const CPMap& m : op.maps()) {
    const Matrix choi = m.choi();
    double off = 0.0;
    for (Index i = 0; i < choi.rows(); ++i)
      for (Index j = 0; j < choi.cols(); ++j)
        if (i != j) off = std::max(off, std::abs(choi(i, j)));
    const double scale = std::max(1.0, choi.cwiseAbs().maxCoeff());
    if (off > tol * scale) return false;
  }
  return true;
}

ClassicalOperation::ClassicalOperation(GeneralizedOperation op) : op_(std::move(op)) {
  if (!is_diagonal(op_))
    throw DomainError("classical: operation is not diagonal in the computational basis");
}

ClassicalOperation bit_preparation(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bit_preparation: p must lie in [0,1]");
  return ClassicalOperation(
      make_preparation({bit_diag(p, 0.0), bit_diag(0.0, 1.0 - p)}, {"0", "1"}));
}

ClassicalOperation distinguishing_measurement(double q) {
  if (!(q > 0.0 && q < 2.0))
    throw DomainError("distinguishing_measurement: q must lie strictly between 0 and 2");
  return ClassicalOperation(
      make_measurement({bit_diag(q, 0.0), bit_diag(0.0, 2.0 - q)}, {"0", "1"}));
}

ClassicalOperation refined_distinguishing_measurement(double q) {
  if (!(q > 0.0 && q < 2.0))
    throw DomainError("refined_distinguishing_measurement: q must lie strictly between 0 and 2");
  return ClassicalOperation(make_measurement({bit_diag(q / 2.0, 0.0),
                                              bit_diag(0.0, (2.0 - q) / 2.0),
                                              bit_diag((2.0 - q) / 2.0, q / 2.0)},
                                             {"0", "1", "2"}));
}

std::pair<double, double> bit_distribution(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bit_distribution: p must lie in [0,1]");
  if (!(q > 0.0 && q < 2.0))
    throw DomainError("bit_distribution: q must lie strictly between 0 and 2");
  const double w0 = p * q;
  const double w1 = (1.0 - p) * (2.0 - q);
  const double total = w0 + w1;
  return {w0 / total, w1 / total};
}

BayesUpdateReport bayes_update_scenario(double p, double q, double acceptance) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("bayes_update_scenario: p must lie strictly between 0 and 1");
  if (!(q > 0.0 && q < 2.0))
    throw DomainError("bayes_update_scenario: q must lie strictly between 0 and 2");
  if (!(acceptance > 0.0 && acceptance <= 1.0))
    throw DomainError("bayes_update_scenario: acceptance must lie in (0,1]");

  BayesUpdateReport report;
  report.acceptance = acceptance;

  const GeneralizedOperation prep = bit_preparation(p).op();
  const GeneralizedOperation refined = refined_distinguishing_measurement(q).op();

  report.joint3 = joint_distribution(prep, refined).table;

  // The six entries of the refined joint table; the total is exactly one, so
  // no denominator appears.
  report.joint3_formula = RealMatrix::Zero(2, 3);
  report.joint3_formula(0, 0) = p * q / 2.0;
  report.joint3_formula(0, 2) = p * (2.0 - q) / 2.0;
  report.joint3_formula(1, 1) = (1.0 - p) * (2.0 - q) / 2.0;
  report.joint3_formula(1, 2) = (1.0 - p) * q / 2.0;

  const auto updated = update(refined, UpdateKernel::select(3, {0, 1}, acceptance));
  if (!updated.has_value()) throw DomainError("bayes_update_scenario: subset update is null");
  report.updated_joint = joint_distribution(prep, *updated).table;

  const auto [b0, b1] = bit_distribution(p, q);
  report.expected_joint = RealMatrix::Zero(2, 2);
  report.expected_joint(0, 0) = b0;
  report.expected_joint(1, 1) = b1;

  // Updating the measurement must reproduce the two-outcome distinguishing
  // measurement, acceptance weight notwithstanding.
  const GeneralizedOperation two = distinguishing_measurement(q).op();
  for (Index j = 0; j < 2; ++j) {
    const double dev =
        (updated->effect_operator(j) - two.effect_operator(j)).cwiseAbs().maxCoeff();
    report.measurement_deviation = std::max(report.measurement_deviation, dev);
  }

  report.max_table_deviation =
      (report.joint3 - report.joint3_formula).cwiseAbs().maxCoeff();
  report.max_table_deviation =
      std::max(report.max_table_deviation,
               (report.updated_joint - report.expected_joint).cwiseAbs().maxCoeff());

  // Bayesian conditioning of the refined table on the kept outcomes must
  // agree with the updated table entry by entry.
  double kept = 0.0;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) kept += report.joint3(i, j);
  if (kept > 0.0) {
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        const double conditioned = report.joint3(i, j) / kept;
        report.max_table_deviation = std::max(
            report.max_table_deviation, std::abs(conditioned - report.updated_joint(i, j)));
      }
  }

  // The state attached to the coarse-grained preparation is a local object;
  // the measurement-side update must leave it exactly diag(p, 1-p).
  Matrix coarse_state = Matrix::Zero(2, 2);
  for (Index i = 0; i < prep.n_outcomes(); ++i) coarse_state += prep.state_operator(i);
  report.state_deviation = (coarse_state - bit_diag(p, 1.0 - p)).cwiseAbs().maxCoeff();

  report.consistent = report.max_table_deviation <= report.tolerance &&
                      report.measurement_deviation <= report.tolerance &&
                      report.state_deviation <= report.tolerance;
  return report;
}

}  // namespace tsopt
