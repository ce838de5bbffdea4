#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hfsmdec/fsm.hpp"

namespace hfsmdec {

// Auxiliary digraph for one focus state v: a path u -> w means every thin
// module starting at v that contains w also contains u. After pruning,
// every surviving node lies in at least one such module.
struct GvGraph {
    StateId focus;
    StateSet nodes;
    std::map<StateId, StateSet> succ;
    std::map<StateId, StateSet> pred;
    // Which rule added each arc ('a'..'d'); first writer wins.
    std::map<std::pair<StateId, StateId>, char> arc_case;
};

GvGraph build_gv(const Fsm& z, const StateId& v);

// Ancestors of q in g, including q itself; always a thin module whose
// entrance is the focus. Throws if q was pruned.
StateSet up_set(const GvGraph& g, const StateId& q);

// Inclusion dag of the indecomposable thin modules, transitively reduced.
// Nodes 0..sink_count-1 are the states (sinks); internal nodes follow in
// insertion order. Arcs run from container to contained.
struct DecompTree {
    struct Node {
        std::vector<int> children;
        std::vector<int> parents;
    };
    std::vector<Node> nodes;
    std::vector<StateId> sink_label;            // sink index -> state id
    std::map<StateId, int> sink_of;
    int sink_count = 0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int internal_count() const { return node_count() - sink_count; }
    int arc_count() const;
    bool is_sink(int t) const { return t < sink_count; }
};

DecompTree build_decomposition_tree(const Fsm& z);

// Inserts one module whose properly-contained indecomposable modules are
// all present already. Throws on a duplicate.
void add_module(DecompTree& tree, const StateSet& members);

// State ids labelling the sinks reachable from t.
StateSet down_set(const DecompTree& tree, int t);

// Members of the module at an internal or sink node (same as down_set).
int dimension(const DecompTree& tree);

// The maximal tree nodes whose down-sets lie inside m ("apices" of the
// upward sweep from m's sinks). Every down-set is contained in m and every
// state of m is covered.
std::vector<int> covering_apices(const DecompTree& tree, const StateSet& m);

// m is a thin module iff the apices' down-sets form an overlapping family.
bool is_thin_module_via_tree(const DecompTree& tree, const StateSet& m);

// The unique minimal family of indecomposable modules whose union is m.
// Requires m to be a thin module of the underlying machine.
std::vector<int> minimal_decomposition(const DecompTree& tree, const StateSet& m);

// DOT rendering: sinks carry their state label, internal nodes are blank
// unless annotate is set, in which case they list their members.
std::string decomp_tree_to_dot(const DecompTree& tree, bool annotate = false);

// JSON rendering: nodes (id, optional state, members) and arcs.
std::string decomp_tree_to_json(const DecompTree& tree);

}  // namespace hfsmdec
