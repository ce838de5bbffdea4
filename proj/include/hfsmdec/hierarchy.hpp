#pragma once

#include <compare>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hfsmdec/fsm.hpp"
#include "hfsmdec/hfsm.hpp"
#include "hfsmdec/module_theory.hpp"

namespace hfsmdec {

// Label-free shape of an accessible deterministic machine: states renumbered
// in breadth-first visit order (symbols lexicographic), start = 0. Two
// accessible machines are isomorphic up to state names iff their canonical
// forms are equal.
struct CanonicalFsm {
    int state_count = 0;
    std::vector<std::tuple<int, Symbol, int>> transitions;

    auto operator<=>(const CanonicalFsm&) const = default;
};

// Multiset of canonical machines.
using Core = std::map<CanonicalFsm, int>;

CanonicalFsm canonical_form(const Fsm& z);
std::string canonical_to_string(const CanonicalFsm& c);
std::string core_to_string(const Core& core);

// Maximal proper thin submodules of a thin module K: thin modules m ⊂ K
// with no thin module strictly between m and K. Disjoint when K is
// indecomposable; the decomposable case falls back to the bounded oracle.
std::vector<StateSet> maximal_thin_submodules(const Fsm& z, const StateSet& k,
                                              int max_states = kDefaultOracleBound);

// Restriction to an indecomposable thin module with its maximal proper thin
// submodules contracted to single states.
Fsm contracted_form(const Fsm& z, const StateSet& k);

// Multiset of canonical contracted forms of all non-singleton indecomposable
// thin modules across the machines of a thin hfsm.
Core core(const Hfsm& z);

// Sum of the machines' counts of non-singleton indecomposable thin modules.
int hfsm_dimension(const Hfsm& z);

// Repeatedly contracts a non-trivial thin module of some machine and nests
// its restriction, until every machine is prime. Preserves execution; the
// resulting order equals the dimension, the maximum possible.
Hfsm maximize(const Hfsm& z);

// No machine contains a non-trivial thin module.
bool is_maximal(const Hfsm& z);

}  // namespace hfsmdec
