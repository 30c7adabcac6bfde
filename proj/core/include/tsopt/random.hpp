#pragma once

#include <cstdint>
#include <random>

#include "tsopt/cpmap.hpp"
#include "tsopt/operation.hpp"

// Deterministic sampling utilities. Every routine takes an explicit
// std::mt19937_64 so results are reproducible from a single seed; nothing in
// the library touches global RNG state.

namespace tsopt {

using Rng = std::mt19937_64;

Matrix random_gaussian(Index rows, Index cols, Rng& rng);

// Haar-distributed unitary via QR with the phase convention that makes the
// R diagonal positive, so the output is a deterministic function of the
// Gaussian draw.
Matrix random_unitary(Index dim, Rng& rng);

// G G† for a square Gaussian G; full rank with probability one.
Matrix random_psd(Index dim, Rng& rng);

// Unit-trace random PSD matrix.
Matrix random_density(Index dim, Rng& rng);

// Random PSD matrix with spectrum drawn uniformly from [1, max_condition],
// conjugated by a Haar unitary and scaled to the requested trace.
Matrix random_psd_conditioned(Index dim, double max_condition, double trace, Rng& rng);

// Rank-k orthogonal projector with Haar-random range.
Matrix random_projector(Index dim, Index rank, Rng& rng);

// Trace-preserving random channel with `n_kraus` Kraus operators
// (Gaussian draw, then right-whitened so Σ K†K = 1).
CPMap random_channel(Index dim_in, Index dim_out, Index n_kraus, Rng& rng);

// Random POVM with n PSD elements summing to the identity.
std::vector<Matrix> random_povm(Index dim, Index n, Rng& rng);

// Random invertible matrix; redraws until the condition number is at most
// max_condition.
Matrix random_invertible(Index dim, Rng& rng, double max_condition = 1e4);

// Generic state pair: a random unit-trace coarse operator together with a
// dominated fine operator rho = sqrt(rho_bar) C sqrt(rho_bar) for a random
// contraction C.
StatePair random_state_pair(Index dim, Rng& rng);

// Generic effect pair, built the same way on top of a random coarse effect
// with trace d.
EffectPair random_effect_pair(Index dim, Rng& rng);

// Random PSD contraction: Haar-conjugated spectrum drawn uniformly from
// [0, 1].
Matrix random_contraction(Index dim, Rng& rng);

}  // namespace tsopt
