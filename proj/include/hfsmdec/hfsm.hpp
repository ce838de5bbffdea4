#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hfsmdec/fsm.hpp"

namespace hfsmdec {

// child machine nested inside `host`, a state of `parent`.
struct NestingArc {
    std::string parent;
    StateId host;
    std::string child;

    auto operator<=>(const NestingArc&) const = default;
};

// A set of machines over one alphabet plus a nesting tree. State ids are
// globally unique across machines.
struct Hfsm {
    std::set<Symbol> alphabet;
    std::string root;
    std::map<std::string, Fsm> machines;
    std::vector<NestingArc> nesting;

    int order() const { return static_cast<int>(machines.size()); }
    const Fsm& machine(const std::string& name) const;
    // Machine nested at (machine, state), if any.
    std::optional<std::string> child_at(const std::string& machine, const StateId& q) const;
    std::optional<NestingArc> parent_of(const std::string& machine) const;
    std::vector<std::string> children_of(const std::string& machine) const;
    // Machine owning a state.
    const std::string& machine_of(const StateId& q) const;
    int depth_of(const std::string& machine) const;

    // Tree rootedness, host ownership, one child per host, global state-id
    // uniqueness, shared alphabet. Throws InputError on violations.
    void validate() const;

    bool operator==(const Hfsm&) const = default;
};

Hfsm flat_hfsm(const Fsm& z, const std::string& name = "M");

// Innermost start state below a machine: follows nesting arcs hosted at
// start states down to a leaf.
StateId nested_start(const Hfsm& z, const std::string& machine);

// One hierarchical transition: local arc first (descending into nested
// starts), otherwise the symbol bubbles to the hosting machines.
std::optional<StateId> hierarchical_step(const Hfsm& z, const StateId& q, const Symbol& x);

std::optional<StateId> eval_hfsm(const Hfsm& z, const Word& w);

// Merges a non-root leaf machine into its parent. Execution on every word
// is unchanged; order drops by one.
Hfsm expand_one(const Hfsm& z, const std::string& leaf);

// Expands everything; the unique flat equivalent.
Fsm flatten(const Hfsm& z);

bool hfsm_equivalent(const Hfsm& a, const Hfsm& b);

// Every machine's flattened state set is a thin module of the flattening.
bool is_thin_hfsm(const Hfsm& z);

// z refines y when y arises from z by expanding some nested machines
// (machine names are ignored; zero expansions count, so refines(z, z)).
bool refines(const Hfsm& z, const Hfsm& y);

}  // namespace hfsmdec
