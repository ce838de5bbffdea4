#pragma once

#include <random>

#include "hfsmdec/fsm.hpp"
#include "hfsmdec/hfsm.hpp"

namespace hfsmdec {

using Rng = std::mt19937_64;

// Accessible machine on n states and k symbols: a random arborescence from
// the start guarantees accessibility, then each remaining (state, symbol)
// slot is filled with probability `density` towards a uniform target.
// Sampling is biased towards shallow trees (parents are drawn uniformly
// from the already-attached states).
Fsm random_accessible_fsm(Rng& rng, int n, int k, double density = 0.5);

Word random_word(Rng& rng, const std::set<Symbol>& alphabet, int max_len);

// Random hierarchy over a random accessible machine: repeatedly nests the
// restriction of a random non-trivial thin module, so every nested state
// set is a thin module of the flattening.
Hfsm random_thin_hfsm(Rng& rng, int total_states, int k, int nest_attempts,
                      double density = 0.5);

}  // namespace hfsmdec
