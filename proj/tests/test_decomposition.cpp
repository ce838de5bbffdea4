#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hfsmdec/decomposition.hpp"
#include "hfsmdec/module_theory.hpp"
#include "hfsmdec/random_fsm.hpp"

using namespace hfsmdec;
using namespace hfsmdec::fixtures;

namespace {

std::vector<StateSet> internal_modules(const DecompTree& tree) {
    std::vector<StateSet> out;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) out.push_back(down_set(tree, t));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("focus graphs of the path machine") {
    Fsm p4 = path(4);

    GvGraph g2 = build_gv(p4, "2");
    CHECK(g2.nodes == set_of({"2", "3", "4"}));
    CHECK(g2.succ.at("2") == set_of({"3"}));
    CHECK(g2.succ.at("3") == set_of({"4"}));
    CHECK(g2.arc_case.size() == 2);

    GvGraph g4 = build_gv(p4, "4");
    CHECK(g4.nodes == set_of({"4"}));
    CHECK(g4.arc_case.empty());

    GvGraph g1 = build_gv(p4, "1");
    CHECK(g1.nodes == set_of({"1", "2", "3", "4"}));
    CHECK(g1.succ.at("1") == set_of({"2"}));
    CHECK(g1.succ.at("2") == set_of({"3"}));
    CHECK(g1.succ.at("3") == set_of({"4"}));
}

TEST_CASE("up_set reads ancestors") {
    Fsm p4 = path(4);
    GvGraph g2 = build_gv(p4, "2");
    CHECK(up_set(g2, "3") == set_of({"2", "3"}));
    CHECK(up_set(g2, "2") == set_of({"2"}));
    CHECK_THROWS_AS(up_set(g2, "1"), InputError);  // pruned

    GvGraph g1 = build_gv(p4, "1");
    CHECK(up_set(g1, "4") == set_of({"1", "2", "3", "4"}));
}

TEST_CASE("decomposition tree of the path machine") {
    DecompTree tree = build_decomposition_tree(path(4));
    CHECK(tree.sink_count == 4);
    CHECK(dimension(tree) == 3);
    CHECK(internal_modules(tree) ==
          std::vector<StateSet>{set_of({"1", "2"}), set_of({"2", "3"}), set_of({"3", "4"})});
    // Three roots: the internal modules pairwise overlap, so none contains
    // another and the dag is not a tree.
    int roots = 0;
    for (int t = 0; t < tree.node_count(); ++t) {
        if (tree.nodes[t].parents.empty()) ++roots;
    }
    CHECK(roots == 3);
    // Each internal node covers exactly its two member sinks.
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        CHECK(tree.nodes[t].children.size() == 2);
        for (int c : tree.nodes[t].children) CHECK(tree.is_sink(c));
    }
}

TEST_CASE("decomposition tree of the two-level example") {
    Fsm z = flat_h1();
    DecompTree tree = build_decomposition_tree(z);
    CHECK(dimension(tree) == 2);
    CHECK(internal_modules(tree) ==
          std::vector<StateSet>{set_of({"a", "b"}), set_of({"a", "b", "c"})});
    // {abc} covers {ab} and the sink c; {ab} covers sinks a and b.
    int t_ab = -1, t_abc = -1;
    for (int t = tree.sink_count; t < tree.node_count(); ++t) {
        if (down_set(tree, t).size() == 2) t_ab = t;
        if (down_set(tree, t).size() == 3) t_abc = t;
    }
    REQUIRE(t_ab >= 0);
    REQUIRE(t_abc >= 0);
    StateSet abc_sink_children;
    for (int c : tree.nodes[t_abc].children) {
        if (tree.is_sink(c)) {
            abc_sink_children.insert(tree.sink_label[c]);
        } else {
            CHECK(c == t_ab);
        }
    }
    CHECK(abc_sink_children == set_of({"c"}));
    CHECK(tree.nodes[t_ab].children.size() == 2);
}

TEST_CASE("single state machine decomposes to one sink") {
    DecompTree tree = build_decomposition_tree(s1());
    CHECK(tree.node_count() == 1);
    CHECK(dimension(tree) == 0);
}

TEST_CASE("add_module inserts cover arcs only") {
    DecompTree t2;
    t2.sink_count = 4;
    for (int i = 1; i <= 4; ++i) {
        t2.nodes.push_back({});
        t2.sink_label.push_back(std::to_string(i));
        t2.sink_of[std::to_string(i)] = i - 1;
    }
    add_module(t2, set_of({"1", "2"}));
    CHECK(t2.nodes[4].children == std::vector<int>{0, 1});
    add_module(t2, set_of({"2", "3"}));
    add_module(t2, set_of({"1", "2", "3"}));
    // The new node covers the two internal nodes, not the sinks.
    CHECK(t2.nodes[6].children == std::vector<int>{4, 5});
    CHECK_THROWS_AS(add_module(t2, set_of({"1", "2"})), InputError);  // duplicate
    CHECK_THROWS_AS(add_module(t2, set_of({"2"})), InputError);      // singletons are sinks
}

TEST_CASE("down_set and dimension") {
    Fsm z = flat_h1();
    DecompTree tree = build_decomposition_tree(z);
    for (int t = 0; t < tree.sink_count; ++t) {
        CHECK(down_set(tree, t) == StateSet{tree.sink_label[t]});
    }
    CHECK(dimension(build_decomposition_tree(path(4))) == 3);
    CHECK(dimension(tree) == 2);
}

TEST_CASE("thin module queries through the tree") {
    Fsm p4 = path(4);
    DecompTree tree = build_decomposition_tree(p4);
    CHECK(is_thin_module_via_tree(tree, set_of({"1", "2", "3"})));
    CHECK(!is_thin_module_via_tree(tree, set_of({"1", "3"})));
    CHECK(is_thin_module_via_tree(tree, set_of({"2", "3"})));

    auto family = minimal_decomposition(tree, set_of({"1", "2", "3"}));
    std::vector<StateSet> downs;
    for (int t : family) downs.push_back(down_set(tree, t));
    std::sort(downs.begin(), downs.end());
    CHECK(downs == std::vector<StateSet>{set_of({"1", "2"}), set_of({"2", "3"})});

    CHECK(minimal_decomposition(tree, set_of({"2", "3"})).size() == 1);

    auto whole = minimal_decomposition(tree, p4.states);
    CHECK(whole.size() == 3);

    CHECK_THROWS_AS(minimal_decomposition(tree, set_of({"1", "3"})), InputError);
}

TEST_CASE("focus graph arcs carry their origin rule") {
    Fsm p4 = path(4);
    GvGraph g = build_gv(p4, "1");
    for (const auto& [arc, tag] : g.arc_case) {
        CHECK(tag == 'a');  // a pure path triggers only the retained-arc rule
    }
}

TEST_CASE("every up_set is a thin module rooted at the focus") {
    Rng rng(555);
    for (int i = 0; i < 60; ++i) {
        Fsm z = random_accessible_fsm(rng, 2 + static_cast<int>(rng() % 6),
                                      1 + static_cast<int>(rng() % 3), 0.5);
        ModuleFamily thin = enumerate_thin_modules(z);
        for (const auto& v : z.states) {
            GvGraph g = build_gv(z, v);
            for (const auto& q : g.nodes) {
                StateSet up = up_set(g, q);
                CHECK(up.count(v));
                CHECK(is_thin_module(z, up));
                CHECK(module_start_node(z, up) == v);
            }
            // Thin modules rooted at v are unions of up_sets, and pruned
            // nodes never belong to one.
            for (const auto& h : thin) {
                if (module_start_node(z, h) != v) continue;
                StateSet covered;
                for (const auto& q : h) {
                    REQUIRE(g.nodes.count(q));
                    StateSet up = up_set(g, q);
                    covered.insert(up.begin(), up.end());
                }
                CHECK(covered == h);
            }
        }
    }
}

TEST_CASE("tree shape invariants on random machines") {
    Rng rng(777);
    for (int i = 0; i < 60; ++i) {
        int n = 2 + static_cast<int>(rng() % 7);
        Fsm z = random_accessible_fsm(rng, n, 1 + static_cast<int>(rng() % 3), 0.5);
        DecompTree tree = build_decomposition_tree(z);
        CHECK(tree.node_count() >= n + 1);
        CHECK(tree.node_count() <= 2 * n - 1);
        CHECK(tree.arc_count() <= 4 * n - 2 + z.arc_count());

        // Transitive reduction, recomputed from scratch.
        std::vector<StateSet> members;
        for (int t = 0; t < tree.node_count(); ++t) members.push_back(down_set(tree, t));
        auto contains = [&](int a, int b) {
            return members[a].size() > members[b].size() &&
                   std::includes(members[a].begin(), members[a].end(), members[b].begin(),
                                 members[b].end());
        };
        for (int a = 0; a < tree.node_count(); ++a) {
            std::set<int> expected;
            for (int b = 0; b < tree.node_count(); ++b) {
                if (!contains(a, b)) continue;
                bool between = false;
                for (int c = 0; c < tree.node_count() && !between; ++c) {
                    if (c != a && c != b && contains(a, c) && contains(c, b)) between = true;
                }
                if (!between) expected.insert(b);
            }
            std::set<int> actual(tree.nodes[a].children.begin(), tree.nodes[a].children.end());
            CHECK(actual == expected);
        }

        // Tree in the digraph sense iff every internal module is strong.
        int roots = 0;
        bool single_parents = true;
        for (int t = 0; t < tree.node_count(); ++t) {
            if (tree.nodes[t].parents.empty()) ++roots;
            if (tree.nodes[t].parents.size() > 1) single_parents = false;
        }
        bool tree_shape = roots == 1 && single_parents;
        bool all_strong = true;
        ModuleFamily thin = enumerate_thin_modules(z);
        for (int t = tree.sink_count; t < tree.node_count() && all_strong; ++t) {
            for (const auto& other : thin) {
                if (overlapping(members[t], other)) {
                    all_strong = false;
                    break;
                }
            }
        }
        CHECK(tree_shape == all_strong);
    }
}

TEST_CASE("tree exports") {
    DecompTree tree = build_decomposition_tree(path(4));
    std::string dot = decomp_tree_to_dot(tree);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("label=\"1\"") != std::string::npos);
    CHECK(dot.find("label=\"\"") != std::string::npos);  // internal nodes unlabelled
    std::string annotated = decomp_tree_to_dot(tree, true);
    CHECK(annotated.find("{1,2}") != std::string::npos);
    std::string json = decomp_tree_to_json(tree);
    CHECK(json.find("\"members\":[\"1\",\"2\"]") != std::string::npos);
}

TEST_CASE("decomposition requires an accessible machine") {
    Fsm z = path(3);
    z.add_state("9");
    CHECK_THROWS_AS(build_decomposition_tree(z), InputError);
    CHECK_THROWS_AS(build_gv(z, "1"), InputError);
}
