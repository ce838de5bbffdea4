#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hfsmdec/errors.hpp"

namespace hfsmdec {

using StateId = std::string;
using Symbol = std::string;
using Word = std::vector<Symbol>;
using StateSet = std::set<StateId>;
using Partition = std::vector<StateSet>;

// Tokens (state ids and symbols) are nonempty, contain no whitespace and no
// '#' (reserved for comments in the text format).
bool valid_token(const std::string& tok);

// Deterministic finite state machine with a partial transition map.
// All operations below treat Fsm values as immutable.
struct Fsm {
    StateSet states;
    std::set<Symbol> alphabet;
    // delta[q][x] = target; absence means the transition is undefined.
    std::map<StateId, std::map<Symbol, StateId>> delta;
    StateId start;

    std::optional<StateId> next(const StateId& q, const Symbol& x) const;
    bool has_state(const StateId& q) const { return states.count(q) > 0; }
    int arc_count() const;

    void add_state(const StateId& q);
    void add_symbol(const Symbol& x);
    // Enforces membership and determinism (duplicate (src, x) throws).
    void add_transition(const StateId& src, const Symbol& x, const StateId& dst);

    // Throws InputError if any structural invariant is broken.
    void validate() const;

    bool operator==(const Fsm&) const = default;
};

// Runs the machine on a word. Returns nullopt once any step is undefined.
// A symbol outside the alphabet is an InputError, not an undefined result.
std::optional<StateId> eval(const Fsm& z, const Word& w);

bool is_accessible(const Fsm& z);

// Sub-FSM induced on the states reachable from the start. Idempotent.
Fsm accessible_part(const Fsm& z);

// Breadth-first order from the start; arcs of a state are explored in
// lexicographic symbol order. Covers reachable states only.
std::vector<StateId> bfs_order(const Fsm& z);

// bfs_order reversed; requires an accessible machine (start comes last).
std::vector<StateId> reverse_bfs_order(const Fsm& z);

// Canonical label for a merged block: "{" + sorted members + "}".
StateId block_label(const StateSet& members);

// Quotient by a partition of the state set. Singleton blocks keep their
// state id and mirror delta exactly; a non-singleton block hides its
// internal arcs and must look like a single state from the outside:
//   - all external arcs into it hit one node (the global start counts as
//     externally entered when it lies in the block),
//   - per symbol, outgoing arcs leave towards at most one block,
//   - if the block exits on a symbol, every member carries that symbol.
// Violations throw QuotientUndefined, which signals that some block is
// not a module.
Fsm quotient(const Fsm& z, const Partition& p);

// Quotient by the given pairwise-disjoint sets plus singletons.
Fsm contract(const Fsm& z, const std::vector<StateSet>& sets);

// Induced sub-FSM on m. Start is the global start if present, otherwise
// the node receiving the most arcs from outside m (ties: smallest id);
// for a module that is its unique entrance.
Fsm restrict_to(const Fsm& z, const StateSet& m);

// Replaces state v of `outer` by the whole of `inner`. Arcs into v are
// redirected to inner's start; states of inner without an x-arc inherit
// v's x-arc. State sets must not collide.
Fsm expand(const Fsm& outer, const StateId& v, const Fsm& inner);

// Structural equality on (states, transitions, start); alphabets may differ.
bool fsm_equal(const Fsm& a, const Fsm& b);

// Equality of accessible parts; agrees with equality of output functions.
bool equivalent(const Fsm& a, const Fsm& b);

}  // namespace hfsmdec
