#include "hfsmdec/verify.hpp"

#include <algorithm>
#include <sstream>

#include "hfsmdec/decomposition.hpp"
#include "hfsmdec/hierarchy.hpp"
#include "hfsmdec/random_fsm.hpp"
#include "hfsmdec/text_io.hpp"

namespace hfsmdec {

bool VerifyReport::all_passed() const {
    for (const auto& p : properties) {
        if (p.fail > 0) return false;
    }
    return true;
}

std::string VerifyReport::to_string() const {
    std::ostringstream out;
    for (const auto& n : notes) out << n << "\n";
    for (const auto& p : properties) {
        out << (p.fail ? "FAIL" : "pass") << "  " << p.name << ": " << p.pass << " checks";
        if (p.fail) out << ", " << p.fail << " violations";
        for (const auto& f : p.counterexamples) out << "\n      counterexample: " << f;
        out << "\n";
    }
    return out.str();
}

namespace {

constexpr int kMaxDumpsPerProperty = 3;

struct Verifier {
    VerifyOptions opt;
    std::vector<PropertyResult> results;
    std::vector<std::string> notes;

    PropertyResult& prop(const std::string& name) {
        for (auto& p : results) {
            if (p.name == name) return p;
        }
        results.push_back({name, 0, 0, {}});
        return results.back();
    }

    void record(const std::string& name, bool ok, const Fsm& z, const std::string& detail) {
        PropertyResult& p = prop(name);
        if (ok) {
            ++p.pass;
            return;
        }
        ++p.fail;
        if (static_cast<int>(p.counterexamples.size()) < kMaxDumpsPerProperty) {
            std::string path = opt.counterexample_dir + "/counterexample_" + name + "_" +
                               std::to_string(p.fail) + ".fsm";
            std::string body = "# property: " + name + "\n# " + detail + "\n" +
                               serialize_fsm_text({"counterexample", z});
            try {
                write_file(path, body);
                p.counterexamples.push_back(path);
            } catch (const InputError&) {
                // Counterexample directory not writable; the failure still counts.
            }
        }
    }

    VerifyReport report() && { return {std::move(results), std::move(notes)}; }
};

std::string set_to_string(const StateSet& m) {
    return block_label(m);
}

std::vector<StateSet> all_subsets(const Fsm& z) {
    std::vector<StateId> ids(z.states.begin(), z.states.end());
    int n = static_cast<int>(ids.size());
    std::vector<StateSet> out;
    out.reserve((1ull << n) - 1);
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        StateSet m;
        for (int i = 0; i < n; ++i) {
            if (mask & (1ul << i)) m.insert(ids[i]);
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<StateSet> connected_components(const Fsm& z) {
    std::map<StateId, StateSet> adj;
    for (const auto& q : z.states) adj[q];
    for (const auto& [q, outmap] : z.delta) {
        for (const auto& [x, t] : outmap) {
            adj[q].insert(t);
            adj[t].insert(q);
        }
    }
    std::vector<StateSet> comps;
    StateSet seen;
    for (const auto& q : z.states) {
        if (seen.count(q)) continue;
        StateSet comp;
        std::vector<StateId> queue{q};
        seen.insert(q);
        while (!queue.empty()) {
            StateId cur = queue.back();
            queue.pop_back();
            comp.insert(cur);
            for (const auto& t : adj[cur]) {
                if (seen.insert(t).second) queue.push_back(t);
            }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

void check_module_definitions(Verifier& v, const Fsm& z, const std::vector<StateSet>& subsets) {
    for (const auto& m : subsets) {
        bool concrete = is_module(z, m);
        bool abstract_ = is_module_abstract(z, m);
        v.record("module_definitions_agree", concrete == abstract_, z,
                 "subset " + set_to_string(m) + " concrete=" + std::to_string(concrete) +
                     " abstract=" + std::to_string(abstract_));
    }
}

void check_trivial_and_components(Verifier& v, const Fsm& z) {
    v.record("trivial_modules", is_module(z, z.states), z, "whole state set");
    for (const auto& q : z.states) {
        v.record("trivial_modules", is_module(z, {q}), z, "singleton {" + q + "}");
    }
    auto comps = connected_components(z);
    for (const auto& c : comps) {
        v.record("components_are_modules", is_module(z, c), z, "component " + set_to_string(c));
    }
    if (comps.size() > 1 && comps.size() <= 10) {
        for (unsigned long mask = 1; mask < (1ul << comps.size()); ++mask) {
            StateSet u;
            for (size_t i = 0; i < comps.size(); ++i) {
                if (mask & (1ul << i)) u.insert(comps[i].begin(), comps[i].end());
            }
            v.record("components_are_modules", is_module(z, u), z,
                     "component union " + set_to_string(u));
        }
    }
}

void check_closure(Verifier& v, const Fsm& z, const ModuleFamily& thin) {
    for (size_t i = 0; i < thin.size(); ++i) {
        for (size_t j = i + 1; j < thin.size(); ++j) {
            if (!overlapping(thin[i], thin[j])) continue;
            StateSet u = thin[i];
            u.insert(thin[j].begin(), thin[j].end());
            StateSet inter;
            std::set_intersection(thin[i].begin(), thin[i].end(), thin[j].begin(), thin[j].end(),
                                  std::inserter(inter, inter.begin()));
            v.record("closure_union", is_thin_module(z, u), z,
                     set_to_string(thin[i]) + " U " + set_to_string(thin[j]));
            v.record("closure_intersection", is_thin_module(z, inter), z,
                     set_to_string(thin[i]) + " n " + set_to_string(thin[j]));
        }
    }
}

void check_gallai(Verifier& v, const Fsm& z, const std::vector<StateSet>& subsets) {
    for (const auto& x : subsets) {
        if (!is_module(z, x) || x.size() < 2) continue;
        Fsm inner = restrict_to(z, x);
        std::vector<StateId> ids(x.begin(), x.end());
        for (unsigned long mask = 1; mask < (1ul << ids.size()); ++mask) {
            StateSet y;
            for (size_t i = 0; i < ids.size(); ++i) {
                if (mask & (1ul << i)) y.insert(ids[i]);
            }
            bool outer_view = is_module(z, y);
            bool inner_view = is_module(inner, y);
            v.record("restriction_preserves_modules", outer_view == inner_view, z,
                     "X=" + set_to_string(x) + " Y=" + set_to_string(y));
        }
    }
}

void check_reverse_contraction(Verifier& v, const Fsm& z, const ModuleFamily& thin) {
    std::vector<StateId> ids(z.states.begin(), z.states.end());
    for (const auto& x : thin) {
        Fsm contracted = contract(z, {x});
        StateId block = x.size() == 1 ? *x.begin() : block_label(x);
        std::vector<StateId> rest;
        for (const auto& q : ids) {
            if (!x.count(q)) rest.push_back(q);
        }
        for (unsigned long mask = 0; mask < (1ul << rest.size()); ++mask) {
            StateSet y = x;
            StateSet y_quot{block};
            for (size_t i = 0; i < rest.size(); ++i) {
                if (mask & (1ul << i)) {
                    y.insert(rest[i]);
                    y_quot.insert(rest[i]);
                }
            }
            bool full = is_thin_module(z, y);
            bool quot = is_thin_module(contracted, y_quot);
            v.record("contraction_preserves_thin", full == quot, z,
                     "X=" + set_to_string(x) + " Y=" + set_to_string(y));
        }
    }
}

void check_exit_paths(Verifier& v, const Fsm& z, const ModuleFamily& thin) {
    for (const auto& m : thin) {
        ModuleSet ms = analyze(z, m);
        for (const auto& [x, targets] : ms.exits) {
            const StateId& exit = *targets.begin();
            for (const auto& q0 : m) {
                StateId cur = q0;
                bool reached = false;
                for (size_t steps = 0; steps <= m.size(); ++steps) {
                    auto t = z.next(cur, x);
                    if (!t) break;
                    if (*t == exit) {
                        reached = true;
                        break;
                    }
                    if (!m.count(*t)) break;
                    cur = *t;
                }
                v.record("exit_paths", reached, z,
                         "module " + set_to_string(m) + " member " + q0 + " symbol " + x);
            }
        }
    }
}

void check_tree_vs_oracle(Verifier& v, const Fsm& z, const DecompTree& tree,
                          const ModuleFamily& indec) {
    std::vector<StateSet> tree_modules;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        tree_modules.push_back(down_set(tree, t));
    }
    std::vector<StateSet> oracle_modules;
    for (const auto& m : indec) {
        if (m.size() > 1) oracle_modules.push_back(m);
    }
    std::sort(tree_modules.begin(), tree_modules.end());
    std::sort(oracle_modules.begin(), oracle_modules.end());
    v.record("tree_matches_enumeration", tree_modules == oracle_modules, z,
             "tree internal modules differ from the enumeration oracle");
}

void check_tree_queries(Verifier& v, const Fsm& z, const DecompTree& tree,
                        const std::vector<StateSet>& subsets, const ModuleFamily& indec) {
    for (const auto& m : subsets) {
        bool via_tree = is_thin_module_via_tree(tree, m);
        bool direct = is_thin_module(z, m);
        v.record("tree_query_agrees", via_tree == direct, z, "subset " + set_to_string(m));
        if (!direct || !via_tree) continue;
        auto family = minimal_decomposition(tree, m);
        StateSet covered;
        std::vector<StateSet> downs;
        bool members_indec = true;
        for (int t : family) {
            StateSet d = down_set(tree, t);
            covered.insert(d.begin(), d.end());
            if (std::find(indec.begin(), indec.end(), d) == indec.end()) members_indec = false;
            downs.push_back(std::move(d));
        }
        v.record("minimal_decomposition_rebuilds", covered == m && family_overlapping(downs) && members_indec,
                 z, "subset " + set_to_string(m));
    }
}

void check_representatives(Verifier& v, const Fsm& z, const ModuleFamily& indec, int oracle_bound) {
    std::set<StateSet> images;
    for (const auto& q : z.states) {
        if (q == z.start) continue;
        StateSet fast = representative(z, q);
        StateSet oracle = representative_oracle(z, q, oracle_bound);
        bool indecomposable = std::find(indec.begin(), indec.end(), fast) != indec.end();
        v.record("representative_is_indecomposable", fast == oracle && indecomposable && fast.size() >= 2,
                 z, "q=" + q + " K=" + set_to_string(fast));
        images.insert(fast);
    }
    std::set<StateSet> targets;
    for (const auto& m : indec) {
        if (m.size() > 1) targets.insert(m);
    }
    v.record("representatives_cover_indecomposables", images == targets, z,
             "representative images differ from the non-singleton indecomposables");
}

void check_bounds(Verifier& v, const Fsm& z, const DecompTree& tree) {
    int n = static_cast<int>(z.states.size());
    if (n > 1) {
        int count = tree.node_count();
        v.record("indecomposable_count_bounds", count >= n + 1 && count <= 2 * n - 1, z,
                 "count=" + std::to_string(count) + " n=" + std::to_string(n));
    }
    v.record("tree_arc_bound", tree.arc_count() <= 4 * n - 2 + z.arc_count(), z,
             "arcs=" + std::to_string(tree.arc_count()));
}

void check_tree_shape(Verifier& v, const Fsm& z, const DecompTree& tree, const ModuleFamily& thin) {
    // Transitive reduction, recomputed independently from the inclusion
    // order on the stored modules.
    std::vector<StateSet> members;
    for (int t = 0; t < tree.node_count(); ++t) members.push_back(down_set(tree, t));
    auto strictly_contains = [&](int a, int b) {
        return members[a].size() > members[b].size() &&
               std::includes(members[a].begin(), members[a].end(), members[b].begin(),
                             members[b].end());
    };
    bool reduction_ok = true;
    for (int a = 0; a < tree.node_count() && reduction_ok; ++a) {
        std::set<int> expected;
        for (int b = 0; b < tree.node_count(); ++b) {
            if (!strictly_contains(a, b)) continue;
            bool covered = false;
            for (int c = 0; c < tree.node_count(); ++c) {
                if (c != a && c != b && strictly_contains(a, c) && strictly_contains(c, b)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) expected.insert(b);
        }
        std::set<int> actual(tree.nodes[a].children.begin(), tree.nodes[a].children.end());
        if (actual != expected) reduction_ok = false;
    }
    v.record("tree_is_transitive_reduction", reduction_ok, z, "cover arcs differ");

    // The dag is a tree exactly when every internal module is strong.
    bool is_tree_shape = true;
    int roots = 0;
    for (int t = 0; t < tree.node_count(); ++t) {
        if (tree.nodes[t].parents.empty()) ++roots;
        if (tree.nodes[t].parents.size() > 1) is_tree_shape = false;
    }
    if (roots != 1) is_tree_shape = false;
    bool all_strong = true;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        StateSet m = down_set(tree, t);
        for (const auto& other : thin) {
            if (overlapping(m, other)) {
                all_strong = false;
                break;
            }
        }
        if (!all_strong) break;
    }
    v.record("tree_iff_all_strong", is_tree_shape == all_strong, z,
             std::string("tree=") + (is_tree_shape ? "yes" : "no") + " strong=" +
                 (all_strong ? "yes" : "no"));
}

void check_upsets(Verifier& v, const Fsm& z, const ModuleFamily& thin) {
    for (const auto& focus : z.states) {
        GvGraph g = build_gv(z, focus);
        for (const auto& q : g.nodes) {
            StateSet up = up_set(g, q);
            bool thin_here = is_thin_module(z, up);
            bool starts_at_focus = module_start_node(z, up) == focus;
            v.record("upsets_are_thin_focus_modules", thin_here && starts_at_focus, z,
                     "v=" + focus + " q=" + q + " up=" + set_to_string(up));
        }
        for (const auto& h : thin) {
            if (module_start_node(z, h) != focus) continue;
            bool all_present = true;
            StateSet covered;
            for (const auto& q : h) {
                if (!g.nodes.count(q)) {
                    all_present = false;
                    break;
                }
                StateSet up = up_set(g, q);
                covered.insert(up.begin(), up.end());
            }
            v.record("focus_modules_are_upset_unions", all_present && covered == h, z,
                     "v=" + focus + " H=" + set_to_string(h));
        }
    }
}

void fsm_battery(Verifier& v, const Fsm& z) {
    Fsm az = is_accessible(z) ? z : accessible_part(z);
    if (az.states.size() != z.states.size()) {
        v.notes.push_back("note: machine is not accessible; tree checks use the accessible part");
    }
    DecompTree tree = build_decomposition_tree(az);
    check_bounds(v, az, tree);
    check_trivial_and_components(v, z);

    if (static_cast<int>(z.states.size()) > v.opt.oracle_bound) {
        v.notes.push_back("note: " + std::to_string(z.states.size()) +
                          " states exceed the oracle bound " + std::to_string(v.opt.oracle_bound) +
                          "; enumeration-backed checks skipped");
        return;
    }
    ModuleFamily thin = enumerate_thin_modules(az, v.opt.oracle_bound);
    ModuleFamily indec = enumerate_indecomposable_thin(az, v.opt.oracle_bound);
    std::vector<StateSet> subsets = all_subsets(az);

    check_module_definitions(v, az, subsets);
    check_closure(v, az, thin);
    check_gallai(v, az, subsets);
    check_reverse_contraction(v, az, thin);
    check_exit_paths(v, az, thin);
    check_tree_vs_oracle(v, az, tree, indec);
    check_tree_queries(v, az, tree, subsets, indec);
    check_representatives(v, az, indec, v.opt.oracle_bound);
    check_tree_shape(v, az, tree, thin);
    check_upsets(v, az, thin);
}

void hfsm_battery(Verifier& v, const Hfsm& z, Rng& rng) {
    Fsm flat = flatten(z);
    for (int i = 0; i < v.opt.words_per_hfsm; ++i) {
        Word w = random_word(rng, z.alphabet, v.opt.max_word_len);
        auto a = eval_hfsm(z, w);
        auto b = eval(flat, w);
        std::string word_text;
        for (const auto& x : w) word_text += x;
        v.record("hierarchy_execution_matches_flat", a == b, flat, "word " + word_text);
    }
    if (!is_thin_hfsm(z)) {
        v.record("random_hierarchies_are_thin", false, flat, "generator produced a non-thin nest");
        return;
    }
    v.record("random_hierarchies_are_thin", true, flat, "");

    Core c1 = core(z);
    Core c2 = core(flat_hfsm(accessible_part(flat)));
    v.record("core_invariant_under_flattening", c1 == c2, flat, "cores differ");

    int dim = hfsm_dimension(z);
    int flat_dim = dimension(build_decomposition_tree(accessible_part(flat)));
    v.record("dimension_invariant_under_flattening", dim == flat_dim, flat,
             "hierarchy " + std::to_string(dim) + " flat " + std::to_string(flat_dim));

    Hfsm maxed = maximize(z);
    bool order_ok = maxed.order() == dim;
    bool prime_ok = is_maximal(maxed);
    bool equiv_ok = hfsm_equivalent(maxed, z);
    Core machine_multiset;
    for (const auto& [name, fsm] : maxed.machines) ++machine_multiset[canonical_form(fsm)];
    bool core_ok = machine_multiset == c1;
    v.record("maximize_reaches_dimension", order_ok, flat,
             "order=" + std::to_string(maxed.order()) + " dim=" + std::to_string(dim));
    v.record("maximize_is_prime", prime_ok, flat, "non-prime machine after maximize");
    v.record("maximize_preserves_equivalence", equiv_ok, flat, "flattening changed");
    v.record("maximal_machines_equal_core", core_ok, flat, "machine shapes differ from core");
    v.record("maximize_refines_input", refines(maxed, z), flat, "maximize output does not refine input");
}

}  // namespace

VerifyReport verify_machine(const Fsm& z, const VerifyOptions& opt) {
    Verifier v{opt, {}, {}};
    fsm_battery(v, z);
    return std::move(v).report();
}

VerifyReport verify_hfsm(const Hfsm& z, const VerifyOptions& opt) {
    Verifier v{opt, {}, {}};
    Rng rng(opt.seed);
    hfsm_battery(v, z, rng);
    fsm_battery(v, flatten(z));
    return std::move(v).report();
}

VerifyReport verify_random(const VerifyOptions& opt) {
    Verifier v{opt, {}, {}};
    Rng rng(opt.seed);
    for (int i = 0; i < opt.count; ++i) {
        int n = std::uniform_int_distribution<int>(1, opt.max_n)(rng);
        int k = std::uniform_int_distribution<int>(1, opt.max_k)(rng);
        double density = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
        Fsm z = random_accessible_fsm(rng, n, k, density);
        fsm_battery(v, z);
    }
    for (int i = 0; i < opt.hfsm_count; ++i) {
        int n = std::uniform_int_distribution<int>(2, opt.hfsm_max_states)(rng);
        int k = std::uniform_int_distribution<int>(1, opt.max_k)(rng);
        Hfsm z = random_thin_hfsm(rng, n, k, std::uniform_int_distribution<int>(0, 4)(rng));
        hfsm_battery(v, z, rng);
    }
    return std::move(v).report();
}

}  // namespace hfsmdec
