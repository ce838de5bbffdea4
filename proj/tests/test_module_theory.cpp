#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hfsmdec/module_theory.hpp"
#include "hfsmdec/random_fsm.hpp"

using namespace hfsmdec;
using namespace hfsmdec::fixtures;

TEST_CASE("analyze reports entrances and exits") {
    Fsm p4 = path(4);
    ModuleSet ms = analyze(p4, set_of({"2", "3"}));
    CHECK(ms.entrances == set_of({"2"}));
    REQUIRE(ms.exits.count("x"));
    CHECK(ms.exits.at("x") == set_of({"4"}));

    ModuleSet whole = analyze(p4, p4.states);
    CHECK(whole.entrances.empty());
    CHECK(whole.exits.empty());

    ModuleSet bc = analyze(flat_h1(), set_of({"b", "c"}));
    CHECK(bc.entrances == set_of({"b", "c"}));
}

TEST_CASE("is_module matches the structural conditions") {
    Fsm p4 = path(4);
    CHECK(is_module(p4, set_of({"2", "3"})));
    CHECK(!is_module(flat_h1(), set_of({"a", "c"})));
    CHECK(!is_module(flat_h1(), set_of({"b", "c"})));
    for (const Fsm& z : {path(4), c3(), flat_h1()}) {
        CHECK(is_module(z, z.states));
        for (const auto& q : z.states) CHECK(is_module(z, {q}));
    }
}

TEST_CASE("a set entered beside an inside start is not a module") {
    // 1 -a-> 2, 1 -b-> 3, 2 -b-> 3, 3 -a-> 2: the set {1,2} has one
    // structural entrance (2) but also contains the start, so execution can
    // enter it in two ways.
    Fsm z;
    z.add_symbol("a");
    z.add_symbol("b");
    for (const char* q : {"1", "2", "3"}) z.add_state(q);
    z.start = "1";
    z.add_transition("1", "a", "2");
    z.add_transition("1", "b", "3");
    z.add_transition("2", "b", "3");
    z.add_transition("3", "a", "2");
    CHECK(!is_module(z, set_of({"1", "2"})));
    CHECK(!is_module_abstract(z, set_of({"1", "2"})));
}

TEST_CASE("abstract and structural module definitions agree") {
    Fsm p4 = path(4);
    CHECK(is_module_abstract(p4, set_of({"2", "3"})));
    CHECK(!is_module_abstract(flat_h1(), set_of({"b", "c"})));
    CHECK(is_module_abstract(p4, p4.states));

    Rng rng(20250809);
    for (int i = 0; i < 60; ++i) {
        int n = 2 + static_cast<int>(rng() % 6);
        int k = 1 + static_cast<int>(rng() % 3);
        Fsm z = random_accessible_fsm(rng, n, k, 0.5);
        std::vector<StateId> ids(z.states.begin(), z.states.end());
        for (unsigned long mask = 1; mask < (1ul << ids.size()); ++mask) {
            StateSet m;
            for (size_t b = 0; b < ids.size(); ++b) {
                if (mask & (1ul << b)) m.insert(ids[b]);
            }
            CHECK(is_module(z, m) == is_module_abstract(z, m));
        }
    }
}

TEST_CASE("thinness separates exit-free cycles from trapped ones") {
    Fsm p4 = path(4);
    CHECK(is_thin_module(p4, set_of({"2", "3"})));
    CHECK(is_thin_module(c3(), set_of({"2", "3"})));
    CHECK(is_thin_module(c3(), c3().states));  // cycle but no exit

    // Cycle inside a module with an exit on the same symbol: not thin.
    Fsm z;
    z.add_symbol("x");
    z.add_symbol("y");
    for (const char* q : {"1", "2", "3", "4"}) z.add_state(q);
    z.start = "1";
    z.add_transition("1", "x", "2");
    z.add_transition("2", "x", "1");
    z.add_transition("1", "y", "3");
    z.add_transition("2", "y", "3");
    z.add_transition("3", "x", "4");
    // {1,2} is a module: no entrance beside the start, y-exit {3} shared.
    CHECK(is_module(z, set_of({"1", "2"})));
    CHECK(is_thin_module(z, set_of({"1", "2"})));  // x has no exit here
    // {1,2,3}: x-exit 4 and an x-cycle 1<->2 inside.
    CHECK(is_module(z, set_of({"1", "2", "3"})));
    CHECK(!is_thin_module(z, set_of({"1", "2", "3"})));
}

TEST_CASE("overlap predicates") {
    CHECK(overlapping(set_of({"1", "2"}), set_of({"2", "3"})));
    CHECK(!overlapping(set_of({"1", "2"}), set_of({"1", "2", "3"})));
    CHECK(!overlapping(set_of({"1"}), set_of({"2"})));
    CHECK(family_overlapping({set_of({"1", "2"}), set_of({"2", "3"}), set_of({"3", "4"})}));
    CHECK(!family_overlapping({set_of({"1", "2"}), set_of({"3", "4"})}));
    CHECK(family_overlapping({set_of({"1", "2"})}));  // single set: no bipartition exists
}

TEST_CASE("enumerate_thin_modules on the shared machines") {
    ModuleFamily p4_family = enumerate_thin_modules(path(4));
    // Exactly the contiguous segments of the path.
    CHECK(p4_family.size() == 10);
    for (const auto& m : p4_family) {
        int lo = 5, hi = 0;
        for (const auto& q : m) {
            lo = std::min(lo, std::stoi(q));
            hi = std::max(hi, std::stoi(q));
        }
        CHECK(static_cast<int>(m.size()) == hi - lo + 1);
    }

    CHECK(enumerate_thin_modules(s1()) == ModuleFamily{{"1"}});

    ModuleFamily h1_family = enumerate_thin_modules(flat_h1());
    ModuleFamily expected = {{"a"}, {"b"}, {"c"}, set_of({"a", "b"}), set_of({"a", "b", "c"})};
    std::sort(expected.begin(), expected.end(), [](const StateSet& a, const StateSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    CHECK(h1_family == expected);

    Fsm big = path(4);
    CHECK_THROWS_AS(enumerate_thin_modules(big, 3), InputError);
}

TEST_CASE("indecomposable thin modules of the shared machines") {
    ModuleFamily p4_ind = enumerate_indecomposable_thin(path(4));
    CHECK(p4_ind.size() == 7);  // 2n-1 on a path
    CHECK(std::count_if(p4_ind.begin(), p4_ind.end(),
                        [](const StateSet& m) { return m.size() == 2; }) == 3);

    ModuleFamily h1_ind = enumerate_indecomposable_thin(flat_h1());
    CHECK(h1_ind.size() == 5);
    CHECK(std::find(h1_ind.begin(), h1_ind.end(), set_of({"a", "b"})) != h1_ind.end());
    CHECK(std::find(h1_ind.begin(), h1_ind.end(), set_of({"a", "b", "c"})) != h1_ind.end());
}

TEST_CASE("count bounds hold and a prime machine hits the lower one") {
    Rng rng(99);
    bool found_prime = false;
    for (int i = 0; i < 200; ++i) {
        Fsm z = random_accessible_fsm(rng, 5, 2, 0.6);
        ModuleFamily ind = enumerate_indecomposable_thin(z);
        size_t n = z.states.size();
        CHECK(ind.size() >= n + 1);
        CHECK(ind.size() <= 2 * n - 1);
        if (ind.size() == n + 1) {
            bool whole_only = true;
            for (const auto& m : ind) {
                if (m.size() > 1 && m.size() < n) whole_only = false;
            }
            if (whole_only) found_prime = true;
        }
    }
    CHECK(found_prime);
}

TEST_CASE("closure under union and intersection of overlapping thin modules") {
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        Fsm z = random_accessible_fsm(rng, 2 + static_cast<int>(rng() % 5),
                                      1 + static_cast<int>(rng() % 3), 0.5);
        ModuleFamily thin = enumerate_thin_modules(z);
        for (size_t a = 0; a < thin.size(); ++a) {
            for (size_t b = a + 1; b < thin.size(); ++b) {
                if (!overlapping(thin[a], thin[b])) continue;
                StateSet u = thin[a];
                u.insert(thin[b].begin(), thin[b].end());
                StateSet inter;
                std::set_intersection(thin[a].begin(), thin[a].end(), thin[b].begin(),
                                      thin[b].end(), std::inserter(inter, inter.begin()));
                CHECK(is_thin_module(z, u));
                CHECK(is_thin_module(z, inter));
            }
        }
    }
}

TEST_CASE("module membership restricts and contracts faithfully") {
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
        Fsm z = random_accessible_fsm(rng, 2 + static_cast<int>(rng() % 5),
                                      1 + static_cast<int>(rng() % 2), 0.5);
        std::vector<StateId> ids(z.states.begin(), z.states.end());
        ModuleFamily thin = enumerate_thin_modules(z);

        // Restriction direction: subsets of a module.
        for (unsigned long mask = 1; mask < (1ul << ids.size()); ++mask) {
            StateSet x;
            for (size_t b = 0; b < ids.size(); ++b) {
                if (mask & (1ul << b)) x.insert(ids[b]);
            }
            if (!is_module(z, x) || x.size() < 2) continue;
            Fsm inner = restrict_to(z, x);
            std::vector<StateId> xs(x.begin(), x.end());
            for (unsigned long sub = 1; sub < (1ul << xs.size()); ++sub) {
                StateSet y;
                for (size_t b = 0; b < xs.size(); ++b) {
                    if (sub & (1ul << b)) y.insert(xs[b]);
                }
                CHECK(is_module(z, y) == is_module(inner, y));
            }
        }

        // Contraction direction: supersets of a thin module.
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
                for (size_t b = 0; b < rest.size(); ++b) {
                    if (mask & (1ul << b)) {
                        y.insert(rest[b]);
                        y_quot.insert(rest[b]);
                    }
                }
                CHECK(is_thin_module(z, y) == is_thin_module(contracted, y_quot));
            }
        }
    }
}

TEST_CASE("representatives are minimal indecomposable containers") {
    Fsm p4 = path(4);
    CHECK(representative_oracle(p4, "3") == set_of({"2", "3"}));
    CHECK(representative_oracle(p4, "4") == set_of({"3", "4"}));
    CHECK(representative_oracle(flat_h1(), "c") == set_of({"a", "b", "c"}));
    CHECK_THROWS_AS(representative_oracle(p4, "1"), InputError);

    CHECK(representative(p4, "3") == set_of({"2", "3"}));
    CHECK(representative(p4, "4") == set_of({"3", "4"}));
    CHECK(representative(flat_h1(), "c") == set_of({"a", "b", "c"}));

    Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        Fsm z = random_accessible_fsm(rng, 2 + static_cast<int>(rng() % 6),
                                      1 + static_cast<int>(rng() % 3), 0.5);
        ModuleFamily ind = enumerate_indecomposable_thin(z);
        std::set<StateSet> images;
        for (const auto& q : z.states) {
            if (q == z.start) continue;
            StateSet fast = representative(z, q);
            CHECK(fast == representative_oracle(z, q));
            CHECK(std::find(ind.begin(), ind.end(), fast) != ind.end());
            CHECK(fast.size() >= 2);
            images.insert(fast);
        }
        std::set<StateSet> nonsingleton;
        for (const auto& m : ind) {
            if (m.size() > 1) nonsingleton.insert(m);
        }
        CHECK(images == nonsingleton);
    }
}

TEST_CASE("strong modules are the overlap-free ones") {
    Fsm p4 = path(4);
    CHECK(!is_strong(p4, set_of({"2", "3"})));
    CHECK(is_strong(p4, p4.states));
    CHECK(is_strong(flat_h1(), set_of({"a", "b"})));
}
