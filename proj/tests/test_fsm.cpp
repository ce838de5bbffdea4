#include <doctest.h>

#include "fixtures.hpp"
#include "hfsmdec/fsm.hpp"

using namespace hfsmdec;
using namespace hfsmdec::fixtures;

TEST_CASE("eval walks the transition map") {
    Fsm p4 = path(4);
    CHECK(eval(s1(), {}) == "1");
    CHECK(eval(p4, {"x", "x"}) == "3");
    CHECK(eval(p4, {"x", "x", "x", "x"}) == std::nullopt);
    CHECK_THROWS_AS(eval(p4, {"z"}), InputError);
}

TEST_CASE("eval folds step by step") {
    Fsm z = flat_h1();
    Word prefix;
    for (const Symbol& x : Word{"x", "y"}) {
        auto before = eval(z, prefix);
        prefix.push_back(x);
        auto after = eval(z, prefix);
        REQUIRE(before.has_value());
        CHECK(after == z.next(*before, x));
    }
}

TEST_CASE("accessible_part drops unreachable states and is idempotent") {
    Fsm p4 = path(4);
    CHECK(accessible_part(p4) == p4);

    Fsm with_extra = p4;
    with_extra.add_state("9");
    CHECK(accessible_part(with_extra) == p4);
    CHECK(accessible_part(accessible_part(with_extra)) == p4);

    Fsm c = c3();
    CHECK(accessible_part(c) == c);

    // eval agrees on the accessible part for every short word.
    for (const Word& w : {Word{}, Word{"x"}, Word{"x", "x"}, Word{"x", "x", "x", "x"}}) {
        CHECK(eval(with_extra, w) == eval(accessible_part(with_extra), w));
    }
}

TEST_CASE("reverse_bfs_order is the reversed breadth-first visit") {
    CHECK(reverse_bfs_order(path(4)) == std::vector<StateId>{"4", "3", "2", "1"});
    CHECK(reverse_bfs_order(s1()) == std::vector<StateId>{"1"});
    // x-arc before y-arc, so the visit is a, b, c.
    CHECK(reverse_bfs_order(flat_h1()) == std::vector<StateId>{"c", "b", "a"});

    Fsm broken = path(3);
    broken.add_state("9");
    CHECK_THROWS_AS(reverse_bfs_order(broken), InputError);
}

TEST_CASE("quotient merges module blocks") {
    Fsm p4 = path(4);
    Fsm q = quotient(p4, {{"1"}, set_of({"2", "3"}), {"4"}});
    Fsm expected;
    expected.add_symbol("x");
    expected.add_state("1");
    expected.add_state("{2,3}");
    expected.add_state("4");
    expected.start = "1";
    expected.add_transition("1", "x", "{2,3}");
    expected.add_transition("{2,3}", "x", "4");
    CHECK(q == expected);
}

TEST_CASE("quotient by singletons is the identity") {
    for (const Fsm& z : {path(4), c3(), flat_h1()}) {
        Partition p;
        for (const auto& q : z.states) p.push_back({q});
        CHECK(quotient(z, p) == z);
    }
    // Self-loops survive singleton blocks.
    Fsm loop = s1();
    loop.add_transition("1", "x", "1");
    CHECK(quotient(loop, {{"1"}}) == loop);
}

TEST_CASE("quotient rejects blocks that are not modules") {
    // {b,c} has two entrances in flat_h1.
    CHECK_THROWS_AS(quotient(flat_h1(), {{"a"}, set_of({"b", "c"})}), QuotientUndefined);
    // {1,3} of P4 exits x towards two blocks.
    CHECK_THROWS_AS(quotient(path(4), {set_of({"1", "3"}), {"2"}, {"4"}}), QuotientUndefined);
}

TEST_CASE("contract merges the given sets and keeps the rest") {
    Fsm p4 = path(4);
    Fsm one = contract(p4, {set_of({"3", "4"})});
    CHECK(one.states == set_of({"1", "2", "{3,4}"}));
    CHECK(one.next("2", "x") == "{3,4}");
    CHECK(one.next("1", "x") == "2");

    Fsm two = contract(p4, {set_of({"1", "2"}), set_of({"3", "4"})});
    CHECK(two.states == set_of({"{1,2}", "{3,4}"}));
    CHECK(two.start == "{1,2}");
    CHECK(two.next("{1,2}", "x") == "{3,4}");

    CHECK(contract(p4, {}) == p4);
}

TEST_CASE("restrict_to induces the sub-machine with the right start") {
    Fsm p4 = path(4);
    Fsm mid = restrict_to(p4, set_of({"2", "3"}));
    CHECK(mid.start == "2");
    CHECK(mid.states == set_of({"2", "3"}));
    CHECK(mid.next("2", "x") == "3");
    CHECK(mid.arc_count() == 1);

    Fsm pre = restrict_to(p4, set_of({"1", "2"}));
    CHECK(pre.start == "1");

    Fsm ab = restrict_to(flat_h1(), set_of({"a", "b"}));
    CHECK(ab.start == "a");
    CHECK(ab.next("a", "x") == "b");
    CHECK(ab.arc_count() == 1);

    CHECK_THROWS_AS(restrict_to(p4, {}), InputError);
}

TEST_CASE("expand rebuilds flat_h1 from its two-level pieces") {
    Fsm outer;
    outer.add_symbol("x");
    outer.add_symbol("y");
    outer.add_state("A");
    outer.add_state("c");
    outer.start = "A";
    outer.add_transition("A", "y", "c");

    Fsm inner;
    inner.add_symbol("x");
    inner.add_symbol("y");
    inner.add_state("a");
    inner.add_state("b");
    inner.start = "a";
    inner.add_transition("a", "x", "b");

    CHECK(expand(outer, "A", inner) == flat_h1());
}

TEST_CASE("expand inverts contract+restrict on a module") {
    Fsm p4 = path(4);
    StateSet m = set_of({"3", "4"});
    Fsm back = expand(contract(p4, {m}), block_label(m), restrict_to(p4, m));
    CHECK(back == p4);
}

TEST_CASE("expanding a single-state machine relabels the site") {
    Fsm outer = path(2);
    outer.add_transition("2", "x", "2");  // self-loop on the site
    Fsm single;
    single.add_symbol("x");
    single.add_state("s");
    single.start = "s";
    Fsm got = expand(outer, "2", single);
    CHECK(got.states == set_of({"1", "s"}));
    CHECK(got.next("1", "x") == "s");
    CHECK(got.next("s", "x") == "s");  // the site's self-loop re-enters the nest
}

TEST_CASE("expand rejects colliding state sets") {
    CHECK_THROWS_AS(expand(path(3), "3", path(2)), InputError);
}

TEST_CASE("equivalence is equality of accessible parts") {
    Fsm p4 = path(4);
    CHECK(equivalent(p4, p4));
    Fsm extra = p4;
    extra.add_state("9");
    CHECK(equivalent(p4, extra));
    CHECK(!equivalent(p4, c3()));
}

TEST_CASE("validation catches broken machines") {
    Fsm z;
    z.add_symbol("x");
    z.add_state("1");
    z.start = "2";
    CHECK_THROWS_AS(z.validate(), InputError);
    CHECK_THROWS_AS(z.add_transition("1", "x", "7"), InputError);
    z.start = "1";
    z.add_state("2");
    z.add_transition("1", "x", "2");
    CHECK_THROWS_AS(z.add_transition("1", "x", "1"), InputError);  // determinism
}
