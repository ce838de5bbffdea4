#pragma once

#include <map>
#include <set>
#include <vector>

#include "hfsmdec/fsm.hpp"

namespace hfsmdec {

// Entrance/exit analysis of a state set.
struct ModuleSet {
    StateSet members;
    StateSet entrances;                        // members receiving arcs from outside
    std::map<Symbol, StateSet> exits;          // symbol -> outside targets of member arcs
};

using ModuleFamily = std::vector<StateSet>;

inline constexpr int kDefaultOracleBound = 14;

ModuleSet analyze(const Fsm& z, const StateSet& m);

// Where execution enters m: the global start if inside, else the unique
// entrance of a module (general sets fall back to the restriction tie-break).
StateId module_start_node(const Fsm& z, const StateSet& m);

// A set is a module iff it looks like a single state from the outside:
// one way in (the global start counts as entered when it lies inside) and,
// per symbol, at most one exit target reachable by every member.
bool is_module(const Fsm& z, const StateSet& m);

// Literal round-trip check: contract m, re-expand the restriction, compare.
// Agrees with is_module on every input.
bool is_module_abstract(const Fsm& z, const StateSet& m);

// Module that, per symbol, has no exit or no internal cycle on it.
bool is_thin_module(const Fsm& z, const StateSet& m);

bool has_symbol_cycle_within(const Fsm& z, const StateSet& m, const Symbol& x);

// Proper intersection: nonempty overlap, neither set contains the other.
bool overlapping(const StateSet& a, const StateSet& b);

// A family is overlapping iff its overlap graph is connected.
bool family_overlapping(const std::vector<StateSet>& family);

// Exhaustive oracles; machines above max_states are rejected.
ModuleFamily enumerate_thin_modules(const Fsm& z, int max_states = kDefaultOracleBound);
ModuleFamily enumerate_indecomposable_thin(const Fsm& z, int max_states = kDefaultOracleBound);

// K_q: the intersection of all thin modules containing q as a non-start
// member; always an indecomposable thin module. Fast mode reads the
// decomposition tree; the oracle intersects enumerated modules.
StateSet representative(const Fsm& z, const StateId& q);
StateSet representative_oracle(const Fsm& z, const StateId& q, int max_states = kDefaultOracleBound);

// No other thin module overlaps m (checked against the enumeration oracle).
bool is_strong(const Fsm& z, const StateSet& m, int max_states = kDefaultOracleBound);

}  // namespace hfsmdec
