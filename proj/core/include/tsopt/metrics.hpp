#pragma once

#include "tsopt/operation.hpp"

// Operational distance on states and effects:
//
//   D(s1, s2) = sup over effects of |p(s1, e) - p(s2, e)|
//
// and the mirror definition for effects with the sup over states. The sup is
// a nonconvex ratio optimization, so exact values are returned only where an
// analytic construction settles them: identical arguments give 0, and
// support splits give 1 via an effect orthogonal to one state and to the
// conditional part of the other. Every other case returns a certified lower
// bound from seeded projected gradient ascent, never an upper bound.

namespace tsopt {

struct DistanceReport {
  double lower_bound = 0.0;   // |p(s1, witness) - p(s2, witness)|
  bool exact = false;         // true when an analytic construction attains it
  EffectPair witness_effect;  // effect achieving lower_bound
};

DistanceReport state_distance(const StatePair& s1, const StatePair& s2,
                              unsigned long long seed = kDefaultSeed);

struct EffectDistanceReport {
  double lower_bound = 0.0;
  bool exact = false;
  StatePair witness_state;
};

EffectDistanceReport effect_distance(const EffectPair& e1, const EffectPair& e2,
                                     unsigned long long seed = kDefaultSeed);

// Perfect distinguishability of two deterministic states: true exactly when
// the supports are orthogonal, witnessed by the standard two-outcome
// measurement {P, 1-P} built from the support projector of the first state.
struct DistinguishabilityReport {
  bool distinguishable = false;
  GeneralizedOperation measurement;
};

DistinguishabilityReport perfectly_distinguishable(const StatePair& s1, const StatePair& s2);

}  // namespace tsopt
