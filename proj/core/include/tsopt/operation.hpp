#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsopt/cpmap.hpp"

// Operations with pre- and post-selection. An operation is a finite list of
// CP maps {M_i}, one per outcome, whose coarse-graining M = Σ_i M_i carries
// unit weight: Tr(M(1/d_in)) = 1. The coarse map need not be
// trace-preserving; operations where it is are called standard.
//
// Preparations are operations from the trivial (one-dimensional) system, so
// their outcome operators ρ_i = M_i(1) satisfy Σ_i Tr(ρ_i) = 1.
// Measurements are operations into the trivial system, with outcome
// operators E_j defined by M_j(ρ) = Tr(E_j ρ); the normalization gives
// Σ_j Tr(E_j) = d.
//
// Probabilities arise only as ratios, so rescaling every constituent map by
// a common positive factor yields the same operation; the constructor fixes
// the scale once and for all.

namespace tsopt {

class GeneralizedOperation {
 public:
  // Normalizes the total weight to one. Throws NullOperationError if every
  // map is zero, StructuralError on inconsistent dimensions or label counts.
  // Labels default to "0", "1", ....
  explicit GeneralizedOperation(std::vector<CPMap> maps, std::vector<std::string> labels = {});

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  Index n_outcomes() const { return static_cast<Index>(maps_.size()); }
  const CPMap& map(Index i) const { return maps_.at(static_cast<std::size_t>(i)); }
  const std::vector<CPMap>& maps() const { return maps_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Coarse-grained map Σ_i M_i.
  CPMap coarse() const;

  bool is_preparation() const { return dim_in_ == 1; }
  bool is_measurement() const { return dim_out_ == 1; }

  // Outcome operator ρ_i for a preparation.
  Matrix state_operator(Index i) const;
  // Outcome operator E_j for a measurement.
  Matrix effect_operator(Index j) const;

 private:
  std::vector<CPMap> maps_;
  std::vector<std::string> labels_;
  Index dim_in_;
  Index dim_out_;
};

GeneralizedOperation make_operation(std::vector<CPMap> maps, std::vector<std::string> labels = {});

// Preparation from outcome operators {ρ_i} (PSD, jointly rescaled so traces
// sum to one). Kraus operators come from each operator's eigendecomposition.
GeneralizedOperation make_preparation(const std::vector<Matrix>& states,
                                      std::vector<std::string> labels = {});

// Measurement from outcome operators {E_j} (PSD, jointly rescaled so traces
// sum to the dimension).
GeneralizedOperation make_measurement(const std::vector<Matrix>& effects,
                                      std::vector<std::string> labels = {});

// True iff the coarse-grained map is trace-preserving, tested on the Choi
// matrix: Tr_out(choi) = 1_in within tol.
bool is_standard(const GeneralizedOperation& op, double tol = kProbabilityTol);

// A state is a pair of PSD operators ρ ≤ ρ̄ with Tr ρ̄ = 1. ρ carries the
// outcome conditioning, ρ̄ the coarse-grained preparation.
struct StatePair {
  Matrix rho;
  Matrix rho_bar;

  StatePair(Matrix rho, Matrix rho_bar);
  static StatePair deterministic(const Matrix& density);

  Index dim() const { return rho.rows(); }
};

// An effect is a pair of PSD operators E ≤ Ē with Tr Ē = d.
struct EffectPair {
  Matrix effect;
  Matrix effect_bar;

  EffectPair(Matrix effect, Matrix effect_bar);
  // POVM element: coarse part is the identity.
  static EffectPair povm_element(const Matrix& e);

  Index dim() const { return effect.rows(); }
};

// A transformation outcome together with its coarse-graining: M ≤ M̄ in the
// CP order (M̄ - M completely positive), Tr(M̄(1/d_in)) = 1.
struct TransformationPair {
  CPMap map;
  CPMap map_bar;

  TransformationPair(CPMap map, CPMap map_bar);
};

// State/effect pairing. Zero when the coarse pairing Tr(ρ̄Ē) vanishes
// (within kNullScale * d); otherwise Tr(ρE)/Tr(ρ̄Ē).
double probability(const StatePair& state, const EffectPair& effect);

// Joint outcome table for a preparation and a measurement on the same
// system. null is set when the coarse pairing vanishes, in which case the
// table is all zeros rather than NaN.
struct JointDistribution {
  RealMatrix table;  // rows: preparation outcomes, cols: measurement outcomes
  bool null = false;
};

JointDistribution joint_distribution(const GeneralizedOperation& prep,
                                     const GeneralizedOperation& meas);

// Outcome distribution of a measurement against a coarse-grained input
// state: p(j) = Tr(ρ̄ E_j)/Tr(ρ̄ Ē), all zeros and null when the
// denominator vanishes.
struct ConditionalDistribution {
  std::vector<double> p;
  bool null = false;
};

ConditionalDistribution conditional_distribution(const Matrix& rho_bar,
                                                 const GeneralizedOperation& meas);

// second ∘ first, outcome (i,j) at index i * second.n_outcomes() + j.
// Nullopt when the composite coarse map vanishes: the composition of the two
// operations is not an operation (null composite).
std::optional<GeneralizedOperation> compose_sequential(const GeneralizedOperation& first,
                                                       const GeneralizedOperation& second);

// first ⊗ second with the same outcome index layout as compose_sequential.
GeneralizedOperation compose_parallel(const GeneralizedOperation& first,
                                      const GeneralizedOperation& second);

// Classical post-processing kernel T(j, i) >= 0 mapping old outcomes i to
// new outcomes j, with column sums Σ_j T(j, i) <= 1 (outcomes may be
// discarded but not overproduced).
struct UpdateKernel {
  RealMatrix t;

  explicit UpdateKernel(RealMatrix t);

  // Single row of ones: full coarse-graining to a one-outcome operation.
  static UpdateKernel coarse_grain(Index n_outcomes);
  // Keeps the listed outcomes with a common acceptance probability.
  static UpdateKernel select(Index n_outcomes, const std::vector<Index>& kept,
                             double acceptance = 1.0);
};

// New operation with maps M'_j ∝ Σ_i T(j,i) M_i, renormalized. Nullopt when
// the kernel kills all weight.
std::optional<GeneralizedOperation> update(const GeneralizedOperation& op,
                                           const UpdateKernel& kernel);

// Retrodictive reading: a preparation {ρ_i} becomes the measurement with
// effects {d·ρ_i}; a measurement {E_j} becomes the preparation with states
// {E_j/d}. Applying the map twice returns the original operation.
GeneralizedOperation retrodictive_map(const GeneralizedOperation& boundary);

// Rewrites a preparation/measurement pairing so the measurement becomes a
// POVM while every joint probability is unchanged: E_j → Ē^{-1/2} E_j Ē^{-1/2},
// ρ_i → Ē^{1/2} ρ_i Ē^{1/2} (jointly renormalized). Requires Ē invertible.
struct StandardizedPair {
  GeneralizedOperation preparation;
  GeneralizedOperation measurement;
};

StandardizedPair standardize(const GeneralizedOperation& prep, const GeneralizedOperation& meas);

// Searches for an effect on which a mixture of two deterministic states
// fails to mix probabilities affinely: gap = |p(qρ̄₁+(1-q)ρ̄₂, e) -
// q·p(ρ̄₁,e) - (1-q)·p(ρ̄₂,e)|. Identical states give gap 0. The search
// draws `n_samples` effects with coarse part of condition number at most 10.
struct ConvexityWitness {
  double gap = 0.0;
  EffectPair effect;
};

ConvexityWitness convexity_witness(const StatePair& s1, const StatePair& s2, double q,
                                   unsigned long long seed = kDefaultSeed, int n_samples = 200);

}  // namespace tsopt
