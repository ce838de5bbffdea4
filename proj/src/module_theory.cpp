#include "hfsmdec/module_theory.hpp"

#include <algorithm>

#include "hfsmdec/decomposition.hpp"

namespace hfsmdec {

ModuleSet analyze(const Fsm& z, const StateSet& m) {
    if (m.empty()) throw InputError("cannot analyze an empty set");
    for (const auto& q : m) {
        if (!z.has_state(q)) throw InputError("member '" + q + "' is not a state");
    }
    ModuleSet res;
    res.members = m;
    for (const auto& [u, outmap] : z.delta) {
        bool inside = m.count(u) > 0;
        for (const auto& [x, t] : outmap) {
            if (!inside && m.count(t)) res.entrances.insert(t);
            if (inside && !m.count(t)) res.exits[x].insert(t);
        }
    }
    return res;
}

StateId module_start_node(const Fsm& z, const StateSet& m) {
    if (m.count(z.start)) return z.start;
    ModuleSet ms = analyze(z, m);
    if (ms.entrances.size() == 1) return *ms.entrances.begin();
    return restrict_to(z, m).start;
}

bool is_module(const Fsm& z, const StateSet& m) {
    if (m.empty()) return false;
    ModuleSet ms = analyze(z, m);
    if (m.count(z.start)) {
        // The start is entered from the environment, so nothing else may be.
        for (const auto& e : ms.entrances) {
            if (e != z.start) return false;
        }
    } else if (ms.entrances.size() > 1) {
        return false;
    }
    for (const auto& [x, targets] : ms.exits) {
        if (targets.size() > 1) return false;
        for (const auto& q : m) {
            if (!z.next(q, x)) return false;
        }
    }
    return true;
}

bool is_module_abstract(const Fsm& z, const StateSet& m) {
    if (m.empty()) throw InputError("cannot test an empty set");
    auto run = [](const Fsm& zz, const StateSet& mm) {
        Fsm contracted = contract(zz, {mm});
        Fsm inner = restrict_to(zz, mm);
        StateId site = mm.size() == 1 ? *mm.begin() : block_label(mm);
        Fsm back = expand(contracted, site, inner);
        return equivalent(back, zz);
    };
    try {
        return run(z, m);
    } catch (const QuotientUndefined&) {
        return false;
    } catch (const InputError&) {
        // The block label collided with an existing state id; retry on a
        // relabelled copy where "<id>" wrapping keeps labels fresh.
        Fsm zz;
        zz.alphabet = z.alphabet;
        zz.start = "<" + z.start + ">";
        for (const auto& q : z.states) zz.states.insert("<" + q + ">");
        for (const auto& [q, outmap] : z.delta) {
            for (const auto& [x, t] : outmap) zz.delta["<" + q + ">"][x] = "<" + t + ">";
        }
        StateSet mm;
        for (const auto& q : m) mm.insert("<" + q + ">");
        try {
            return run(zz, mm);
        } catch (const QuotientUndefined&) {
            return false;
        }
    }
}

bool has_symbol_cycle_within(const Fsm& z, const StateSet& m, const Symbol& x) {
    // Per-symbol successors form a functional graph; walk with memoization.
    std::map<StateId, int> color;  // 0 unseen, 1 on current walk, 2 done
    for (const auto& q0 : m) {
        if (color[q0]) continue;
        std::vector<StateId> walk;
        StateId cur = q0;
        while (true) {
            if (!m.count(cur)) break;
            int& c = color[cur];
            if (c == 1) return true;
            if (c == 2) break;
            c = 1;
            walk.push_back(cur);
            auto t = z.next(cur, x);
            if (!t) break;
            cur = *t;
        }
        for (const auto& q : walk) color[q] = 2;
    }
    return false;
}

bool is_thin_module(const Fsm& z, const StateSet& m) {
    if (!is_module(z, m)) return false;
    ModuleSet ms = analyze(z, m);
    for (const auto& [x, targets] : ms.exits) {
        if (has_symbol_cycle_within(z, m, x)) return false;
    }
    return true;
}

bool overlapping(const StateSet& a, const StateSet& b) {
    if (a.empty() || b.empty()) throw InputError("overlap of an empty set");
    bool meets = false, a_extra = false, b_extra = false;
    for (const auto& q : a) {
        if (b.count(q)) {
            meets = true;
        } else {
            a_extra = true;
        }
    }
    for (const auto& q : b) {
        if (!a.count(q)) {
            b_extra = true;
            break;
        }
    }
    return meets && a_extra && b_extra;
}

bool family_overlapping(const std::vector<StateSet>& family) {
    if (family.empty()) return true;
    size_t n = family.size();
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (overlapping(family[i], family[j])) parent[find(i)] = find(j);
        }
    }
    for (size_t i = 1; i < n; ++i) {
        if (find(i) != find(0)) return false;
    }
    return true;
}

ModuleFamily enumerate_thin_modules(const Fsm& z, int max_states) {
    int n = static_cast<int>(z.states.size());
    if (n > max_states) {
        throw InputError("machine with " + std::to_string(n) +
                         " states exceeds the enumeration bound " + std::to_string(max_states));
    }
    std::vector<StateId> ids(z.states.begin(), z.states.end());
    ModuleFamily out;
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        StateSet m;
        for (int i = 0; i < n; ++i) {
            if (mask & (1ul << i)) m.insert(ids[i]);
        }
        if (is_thin_module(z, m)) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(), [](const StateSet& a, const StateSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

namespace {

// A set in the family is decomposable iff some connected component of the
// overlap graph over its proper subsets unions to the whole set.
bool decomposable_within(const StateSet& m, const ModuleFamily& family) {
    std::vector<const StateSet*> proper;
    for (const auto& d : family) {
        if (d.size() < m.size() && std::includes(m.begin(), m.end(), d.begin(), d.end())) {
            proper.push_back(&d);
        }
    }
    size_t n = proper.size();
    if (n == 0) return false;
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (overlapping(*proper[i], *proper[j])) parent[find(i)] = find(j);
        }
    }
    std::map<size_t, StateSet> comp_union;
    for (size_t i = 0; i < n; ++i) {
        auto& u = comp_union[find(i)];
        u.insert(proper[i]->begin(), proper[i]->end());
    }
    for (const auto& [root, u] : comp_union) {
        if (u == m) return true;
    }
    return false;
}

}  // namespace

ModuleFamily enumerate_indecomposable_thin(const Fsm& z, int max_states) {
    ModuleFamily all = enumerate_thin_modules(z, max_states);
    ModuleFamily out;
    for (const auto& m : all) {
        if (!decomposable_within(m, all)) out.push_back(m);
    }
    return out;
}

StateSet representative_oracle(const Fsm& z, const StateId& q, int max_states) {
    if (!z.has_state(q)) throw InputError("'" + q + "' is not a state");
    if (q == z.start) throw InputError("the start state has no representative module");
    if (!is_accessible(z)) throw InputError("machine is not accessible");
    ModuleFamily all = enumerate_thin_modules(z, max_states);
    StateSet acc;
    bool first = true;
    for (const auto& m : all) {
        if (!m.count(q) || module_start_node(z, m) == q) continue;
        if (first) {
            acc = m;
            first = false;
        } else {
            StateSet tmp;
            std::set_intersection(acc.begin(), acc.end(), m.begin(), m.end(),
                                  std::inserter(tmp, tmp.begin()));
            acc.swap(tmp);
        }
    }
    if (first) throw InternalError("no thin module contains '" + q + "' as a non-start member");
    return acc;
}

StateSet representative(const Fsm& z, const StateId& q) {
    if (!z.has_state(q)) throw InputError("'" + q + "' is not a state");
    if (q == z.start) throw InputError("the start state has no representative module");
    DecompTree tree = build_decomposition_tree(z);
    // The representative is the smallest internal node containing q as a
    // non-start member; it is contained in every other candidate.
    StateSet best;
    for (int t = tree.sink_count; t < static_cast<int>(tree.nodes.size()); ++t) {
        StateSet members = down_set(tree, t);
        if (!members.count(q) || module_start_node(z, members) == q) continue;
        if (best.empty() || members.size() < best.size()) best = std::move(members);
    }
    if (best.empty()) throw InternalError("no indecomposable module contains '" + q + "' as a non-start member");
    return best;
}

bool is_strong(const Fsm& z, const StateSet& m, int max_states) {
    if (!is_thin_module(z, m)) throw InputError("not a thin module");
    for (const auto& other : enumerate_thin_modules(z, max_states)) {
        if (overlapping(m, other)) return false;
    }
    return true;
}

}  // namespace hfsmdec
