#include "hfsmdec/hierarchy.hpp"

#include <algorithm>
#include <sstream>

#include "hfsmdec/decomposition.hpp"

namespace hfsmdec {

CanonicalFsm canonical_form(const Fsm& z) {
    std::vector<StateId> order = bfs_order(z);
    if (order.size() != z.states.size()) throw InputError("machine is not accessible");
    std::map<StateId, int> index;
    for (size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
    CanonicalFsm out;
    out.state_count = static_cast<int>(order.size());
    for (const auto& [q, outmap] : z.delta) {
        for (const auto& [x, t] : outmap) {
            out.transitions.emplace_back(index.at(q), x, index.at(t));
        }
    }
    std::sort(out.transitions.begin(), out.transitions.end());
    return out;
}

std::string canonical_to_string(const CanonicalFsm& c) {
    std::ostringstream out;
    out << c.state_count << " states:";
    for (const auto& [a, x, b] : c.transitions) {
        out << " " << a << "-" << x << "->" << b;
    }
    return out.str();
}

std::string core_to_string(const Core& core) {
    std::ostringstream out;
    for (const auto& [c, count] : core) {
        out << count << "x " << canonical_to_string(c) << "\n";
    }
    return out.str();
}

namespace {

struct IndexedTree {
    DecompTree tree;
    std::vector<StateSet> members;  // per node

    explicit IndexedTree(const Fsm& z) : tree(build_decomposition_tree(z)) {
        members.reserve(tree.node_count());
        for (int t = 0; t < tree.node_count(); ++t) members.push_back(down_set(tree, t));
    }

    // Node whose member set equals k, or -1.
    int find(const StateSet& k) const {
        auto aps = covering_apices(tree, k);
        if (aps.size() == 1 && members[aps[0]] == k) return aps[0];
        return -1;
    }
};

bool subset(const StateSet& a, const StateSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Maximal proper thin submodules of an indecomposable node: group the tree
// nodes strictly inside k by overlap connectivity; each component union is a
// thin module properly inside k, and the inclusion-maximal unions are the
// answer.
std::vector<StateSet> maximal_under_indecomposable(const IndexedTree& it, int node) {
    const StateSet& k = it.members[node];
    std::vector<const StateSet*> cands;
    for (int t = 0; t < it.tree.node_count(); ++t) {
        if (t != node && subset(it.members[t], k)) cands.push_back(&it.members[t]);
    }
    size_t n = cands.size();
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (overlapping(*cands[i], *cands[j])) parent[find(i)] = find(j);
        }
    }
    std::map<size_t, StateSet> unions;
    for (size_t i = 0; i < n; ++i) {
        auto& u = unions[find(i)];
        u.insert(cands[i]->begin(), cands[i]->end());
    }
    std::vector<StateSet> out;
    for (const auto& [root, u] : unions) {
        bool maximal = true;
        for (const auto& [other_root, other] : unions) {
            if (other_root != root && u != other && subset(u, other)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<StateSet> maximal_thin_oracle(const Fsm& z, const StateSet& k, int max_states) {
    Fsm inner = restrict_to(z, k);
    ModuleFamily family = enumerate_thin_modules(inner, max_states);
    std::vector<StateSet> out;
    for (const auto& m : family) {
        if (m.size() == k.size()) continue;
        bool maximal = true;
        for (const auto& other : family) {
            if (other.size() == k.size() || other == m) continue;
            if (subset(m, other)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Fsm contracted_form_at(const Fsm& z, const IndexedTree& it, int node) {
    const StateSet& k = it.members[node];
    Fsm inner = restrict_to(z, k);
    std::vector<StateSet> fam = maximal_under_indecomposable(it, node);
    std::vector<StateSet> merged;
    StateSet taken;
    for (const auto& m : fam) {
        for (const auto& q : m) {
            if (!taken.insert(q).second) {
                throw InternalError("maximal thin submodules of an indecomposable module overlap");
            }
        }
        if (m.size() > 1) merged.push_back(m);
    }
    return contract(inner, merged);
}

}  // namespace

std::vector<StateSet> maximal_thin_submodules(const Fsm& z, const StateSet& k, int max_states) {
    if (!is_thin_module(z, k)) throw InputError("not a thin module");
    if (k.size() == 1) return {};
    if (is_accessible(z)) {
        IndexedTree it(z);
        int node = it.find(k);
        if (node >= 0) return maximal_under_indecomposable(it, node);
    }
    return maximal_thin_oracle(z, k, max_states);
}

Fsm contracted_form(const Fsm& z, const StateSet& k) {
    IndexedTree it(z);
    int node = it.find(k);
    if (node < 0 || it.tree.is_sink(node)) {
        if (k.size() == 1 && node >= 0) {
            return restrict_to(z, k);
        }
        throw InputError("not an indecomposable thin module");
    }
    return contracted_form_at(z, it, node);
}

Core core(const Hfsm& z) {
    if (!is_thin_hfsm(z)) throw InputError("hfsm is not thin");
    Core out;
    for (const auto& [name, fsm] : z.machines) {
        IndexedTree it(fsm);
        for (int t = it.tree.sink_count; t < it.tree.node_count(); ++t) {
            ++out[canonical_form(contracted_form_at(fsm, it, t))];
        }
    }
    return out;
}

int hfsm_dimension(const Hfsm& z) {
    int total = 0;
    for (const auto& [name, fsm] : z.machines) {
        total += dimension(build_decomposition_tree(fsm));
    }
    return total;
}

namespace {

// Non-trivial module to contract next: smallest, ties broken towards the
// lexicographically last member list (this pins down which of the equally
// maximal hierarchies is produced).
std::optional<StateSet> pick_module(const Fsm& machine) {
    DecompTree tree = build_decomposition_tree(machine);
    std::optional<StateSet> best;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        StateSet members = down_set(tree, t);
        if (members.size() == machine.states.size()) continue;
        if (!best || members.size() < best->size() ||
            (members.size() == best->size() && members > *best)) {
            best = std::move(members);
        }
    }
    return best;
}

std::string join_members(const StateSet& members) {
    std::string out;
    for (const auto& m : members) {
        if (!out.empty()) out += ",";
        out += m;
    }
    return out;
}

}  // namespace

Hfsm maximize(const Hfsm& z) {
    if (!is_thin_hfsm(z)) throw InputError("hfsm is not thin");
    Hfsm out = z;
    std::set<std::string> pending;
    for (const auto& [name, fsm] : out.machines) pending.insert(name);
    while (!pending.empty()) {
        std::string name = *pending.begin();
        pending.erase(pending.begin());
        while (true) {
            auto members = pick_module(out.machines.at(name));
            if (!members) break;
            StateId block = block_label(*members);
            std::string child_name = name + "/" + join_members(*members);
            if (out.machines.count(child_name)) {
                throw InternalError("generated machine name collides: " + child_name);
            }
            Fsm inner = restrict_to(out.machines.at(name), *members);
            out.machines[name] = contract(out.machines.at(name), {*members});
            out.machines.emplace(child_name, inner);
            // Hosts that moved into the nested machine drag their arcs along.
            for (auto& arc : out.nesting) {
                if (arc.parent == name && members->count(arc.host)) arc.parent = child_name;
            }
            out.nesting.push_back({name, block, child_name});
            pending.insert(child_name);
        }
    }
    out.validate();
    return out;
}

bool is_maximal(const Hfsm& z) {
    if (!is_thin_hfsm(z)) throw InputError("hfsm is not thin");
    for (const auto& [name, fsm] : z.machines) {
        DecompTree tree = build_decomposition_tree(fsm);
        for (int t = tree.sink_count; t < tree.node_count(); ++t) {
            if (static_cast<int>(down_set(tree, t).size()) < static_cast<int>(fsm.states.size())) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace hfsmdec
