#pragma once

#include <string>

#include "hfsmdec/fsm.hpp"
#include "hfsmdec/hfsm.hpp"

namespace hfsmdec::fixtures {

// Single state, no arcs.
inline Fsm s1() {
    Fsm z;
    z.add_state("1");
    z.add_symbol("x");
    z.start = "1";
    return z;
}

// x-labelled path 1 -> 2 -> ... -> n.
inline Fsm path(int n) {
    Fsm z;
    z.add_symbol("x");
    for (int i = 1; i <= n; ++i) z.add_state(std::to_string(i));
    z.start = "1";
    for (int i = 1; i < n; ++i) z.add_transition(std::to_string(i), "x", std::to_string(i + 1));
    return z;
}

// a-labelled 3-cycle 1 -> 2 -> 3 -> 1.
inline Fsm c3() {
    Fsm z;
    z.add_symbol("a");
    for (int i = 1; i <= 3; ++i) z.add_state(std::to_string(i));
    z.start = "1";
    z.add_transition("1", "a", "2");
    z.add_transition("2", "a", "3");
    z.add_transition("3", "a", "1");
    return z;
}

// Two-level hierarchy: root R = (A -y-> c) with N = (a -x-> b) nested at A.
inline Hfsm h1() {
    Fsm r;
    r.add_symbol("x");
    r.add_symbol("y");
    r.add_state("A");
    r.add_state("c");
    r.start = "A";
    r.add_transition("A", "y", "c");

    Fsm n;
    n.add_symbol("x");
    n.add_symbol("y");
    n.add_state("a");
    n.add_state("b");
    n.start = "a";
    n.add_transition("a", "x", "b");

    Hfsm z;
    z.alphabet = {"x", "y"};
    z.root = "R";
    z.machines.emplace("R", std::move(r));
    z.machines.emplace("N", std::move(n));
    z.nesting.push_back({"R", "A", "N"});
    z.validate();
    return z;
}

// The flat equivalent of h1: a -x-> b, a -y-> c, b -y-> c.
inline Fsm flat_h1() {
    Fsm z;
    z.add_symbol("x");
    z.add_symbol("y");
    z.add_state("a");
    z.add_state("b");
    z.add_state("c");
    z.start = "a";
    z.add_transition("a", "x", "b");
    z.add_transition("a", "y", "c");
    z.add_transition("b", "y", "c");
    return z;
}

inline StateSet set_of(std::initializer_list<const char*> ids) {
    StateSet out;
    for (const char* id : ids) out.insert(id);
    return out;
}

}  // namespace hfsmdec::fixtures
