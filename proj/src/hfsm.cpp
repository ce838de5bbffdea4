#include "hfsmdec/hfsm.hpp"

#include <algorithm>

#include "hfsmdec/module_theory.hpp"

namespace hfsmdec {

const Fsm& Hfsm::machine(const std::string& name) const {
    auto it = machines.find(name);
    if (it == machines.end()) throw InputError("unknown machine '" + name + "'");
    return it->second;
}

std::optional<std::string> Hfsm::child_at(const std::string& m, const StateId& q) const {
    for (const auto& arc : nesting) {
        if (arc.parent == m && arc.host == q) return arc.child;
    }
    return std::nullopt;
}

std::optional<NestingArc> Hfsm::parent_of(const std::string& m) const {
    for (const auto& arc : nesting) {
        if (arc.child == m) return arc;
    }
    return std::nullopt;
}

std::vector<std::string> Hfsm::children_of(const std::string& m) const {
    std::vector<std::string> out;
    for (const auto& arc : nesting) {
        if (arc.parent == m) out.push_back(arc.child);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::string& Hfsm::machine_of(const StateId& q) const {
    for (const auto& [name, fsm] : machines) {
        if (fsm.has_state(q)) return name;
    }
    throw InputError("'" + q + "' is not a state of any machine");
}

int Hfsm::depth_of(const std::string& m) const {
    int d = 0;
    std::string cur = m;
    while (true) {
        auto p = parent_of(cur);
        if (!p) break;
        cur = p->parent;
        ++d;
        if (d > order()) throw InternalError("nesting arcs form a cycle");
    }
    return d;
}

void Hfsm::validate() const {
    if (machines.empty()) throw InputError("hfsm has no machines");
    if (!machines.count(root)) throw InputError("root: unknown machine '" + root + "'");
    std::map<StateId, std::string> owner;
    for (const auto& [name, fsm] : machines) {
        fsm.validate();
        if (fsm.alphabet != alphabet) {
            throw InputError("machines[" + name + "].alphabet: machines must share the hfsm alphabet");
        }
        for (const auto& q : fsm.states) {
            if (!owner.emplace(q, name).second) {
                throw InputError("state '" + q + "' appears in machines '" + owner[q] +
                                 "' and '" + name + "'");
            }
        }
    }
    std::map<std::string, int> in_degree;
    std::set<std::pair<std::string, StateId>> hosts;
    for (size_t i = 0; i < nesting.size(); ++i) {
        const auto& arc = nesting[i];
        std::string where = "nesting[" + std::to_string(i) + "]";
        if (!machines.count(arc.parent)) throw InputError(where + ".parent: unknown machine '" + arc.parent + "'");
        if (!machines.count(arc.child)) throw InputError(where + ".child: unknown machine '" + arc.child + "'");
        if (!machines.at(arc.parent).has_state(arc.host)) {
            throw InputError(where + ".state: '" + arc.host + "' is not a state of '" + arc.parent + "'");
        }
        if (!hosts.emplace(arc.parent, arc.host).second) {
            throw InputError(where + ".state: host '" + arc.host + "' already nests a machine");
        }
        ++in_degree[arc.child];
    }
    for (const auto& [name, fsm] : machines) {
        int deg = in_degree.count(name) ? in_degree.at(name) : 0;
        if (name == root) {
            if (deg != 0) throw InputError("root machine '" + name + "' is nested somewhere");
        } else if (deg != 1) {
            throw InputError("machine '" + name + "' must be nested exactly once");
        }
    }
    // Rootedness: every machine reaches the root through parent arcs.
    for (const auto& [name, fsm] : machines) depth_of(name);
}

Hfsm flat_hfsm(const Fsm& z, const std::string& name) {
    Hfsm out;
    out.alphabet = z.alphabet;
    out.root = name;
    out.machines.emplace(name, z);
    return out;
}

StateId nested_start(const Hfsm& z, const std::string& machine) {
    const Fsm& m = z.machine(machine);
    auto child = z.child_at(machine, m.start);
    return child ? nested_start(z, *child) : m.start;
}

std::optional<StateId> hierarchical_step(const Hfsm& z, const StateId& q, const Symbol& x) {
    if (!z.alphabet.count(x)) throw InputError("symbol '" + x + "' is not in the alphabet");
    const std::string& name = z.machine_of(q);
    auto v = z.machine(name).next(q, x);
    if (v) {
        auto child = z.child_at(name, *v);
        return child ? nested_start(z, *child) : *v;
    }
    auto up = z.parent_of(name);
    if (!up) return std::nullopt;
    return hierarchical_step(z, up->host, x);
}

std::optional<StateId> eval_hfsm(const Hfsm& z, const Word& w) {
    std::optional<StateId> cur = nested_start(z, z.root);
    for (const auto& x : w) {
        cur = hierarchical_step(z, *cur, x);
        if (!cur) return std::nullopt;
    }
    return cur;
}

namespace {

// Merges `name` into its parent; valid for any non-root machine.
Hfsm expand_machine(const Hfsm& z, const std::string& name) {
    auto up = z.parent_of(name);
    if (!up) throw InputError("machine '" + name + "' is the root and cannot be expanded");
    Hfsm out;
    out.alphabet = z.alphabet;
    out.root = z.root;
    for (const auto& [n, fsm] : z.machines) {
        if (n != name) out.machines.emplace(n, fsm);
    }
    out.machines[up->parent] = expand(z.machine(up->parent), up->host, z.machine(name));
    for (const auto& arc : z.nesting) {
        if (arc.parent == up->parent && arc.child == name) continue;
        if (arc.parent == name) {
            out.nesting.push_back({up->parent, arc.host, arc.child});
        } else {
            out.nesting.push_back(arc);
        }
    }
    return out;
}

}  // namespace

Hfsm expand_one(const Hfsm& z, const std::string& leaf) {
    if (!z.machines.count(leaf)) throw InputError("unknown machine '" + leaf + "'");
    if (leaf == z.root) throw InputError("the root machine cannot be expanded");
    if (!z.children_of(leaf).empty()) throw InputError("machine '" + leaf + "' is not a leaf");
    return expand_machine(z, leaf);
}

Fsm flatten(const Hfsm& z) {
    Hfsm cur = z;
    while (cur.order() > 1) {
        // Deepest leaf first; names break ties.
        std::string pick;
        int best_depth = -1;
        for (const auto& [name, fsm] : cur.machines) {
            if (name == cur.root || !cur.children_of(name).empty()) continue;
            int d = cur.depth_of(name);
            if (d > best_depth) {
                best_depth = d;
                pick = name;
            }
        }
        cur = expand_machine(cur, pick);
    }
    return cur.machines.begin()->second;
}

bool hfsm_equivalent(const Hfsm& a, const Hfsm& b) {
    return equivalent(flatten(a), flatten(b));
}

namespace {

// States of the flattening of the subtree rooted at `machine`: hosting
// states are replaced by their nested contents.
StateSet subtree_flat_states(const Hfsm& z, const std::string& machine) {
    StateSet out;
    const Fsm& m = z.machine(machine);
    for (const auto& q : m.states) {
        auto child = z.child_at(machine, q);
        if (child) {
            StateSet sub = subtree_flat_states(z, *child);
            out.insert(sub.begin(), sub.end());
        } else {
            out.insert(q);
        }
    }
    return out;
}

}  // namespace

bool is_thin_hfsm(const Hfsm& z) {
    Fsm flat = flatten(z);
    for (const auto& [name, fsm] : z.machines) {
        if (name == z.root) continue;  // the whole state set is trivially thin
        if (!is_thin_module(flat, subtree_flat_states(z, name))) return false;
    }
    return true;
}

namespace {

// Machine names carry no meaning; key every machine by its smallest state
// (state sets are disjoint and nonempty).
struct NormalForm {
    std::set<Symbol> alphabet;
    std::string root_key;
    std::map<std::string, Fsm> machines;
    std::set<NestingArc> nesting;

    bool operator==(const NormalForm&) const = default;
};

NormalForm normal_form(const Hfsm& z) {
    std::map<std::string, std::string> key;
    for (const auto& [name, fsm] : z.machines) key[name] = *fsm.states.begin();
    NormalForm out;
    out.alphabet = z.alphabet;
    out.root_key = key.at(z.root);
    for (const auto& [name, fsm] : z.machines) out.machines.emplace(key.at(name), fsm);
    for (const auto& arc : z.nesting) {
        out.nesting.insert({key.at(arc.parent), arc.host, key.at(arc.child)});
    }
    return out;
}

bool search_refinement(const Hfsm& z, const NormalForm& target, int remaining,
                       const std::string& min_name) {
    if (remaining == 0) return normal_form(z) == target;
    // Expand candidates in name order, never revisiting earlier choices:
    // expansions of distinct machines commute, so each subset is tried once.
    std::vector<std::string> names;
    for (const auto& [name, fsm] : z.machines) {
        if (name != z.root && name >= min_name) names.push_back(name);
    }
    for (const auto& name : names) {
        if (search_refinement(expand_machine(z, name), target, remaining - 1, name)) return true;
    }
    return false;
}

}  // namespace

bool refines(const Hfsm& z, const Hfsm& y) {
    int diff = z.order() - y.order();
    if (diff < 0) return false;
    return search_refinement(z, normal_form(y), diff, "");
}

}  // namespace hfsmdec
