#include "doctest.h"

#include "delg/certificate.hpp"
#include "delg/error.hpp"
#include "delg/problem.hpp"
#include "delg/reductions.hpp"

#include "generators.hpp"

using namespace delg;
using namespace delg::testing;

namespace {
const std::string data_dir = DELG_TEST_DATA;
}

TEST_CASE("load the two-world planning file")
{
    Problem p = load_problem(data_dir + "/fig1.delg");
    CHECK(p.mode == ProblemMode::Plan);
    CHECK(p.agents == std::vector<std::string>{"a", "b"});
    CHECK(p.model.model.size() == 2);
    CHECK(p.model.point == p.model.model.index_of("w"));
    CHECK(p.actions.size() == 2);
    CHECK(p.action_point == std::optional<std::size_t>(p.actions.index_of("alpha")));
    CHECK(p.goal == parse_formula("K[a] !p"));
    CHECK(p.actions.relation("b").has(0, 1));
    CHECK_FALSE(p.actions.relation("a").has(0, 1));
}

TEST_CASE("printing round-trips")
{
    for (const char* name : {"fig1.delg", "fig1_product.delg", "qbf_true.delg", "g4_small.delg", "condplan_small.delg",
                             "teamdfa_win.delg"}) {
        CAPTURE(name);
        Problem p = load_problem(data_dir + "/" + name);
        const std::string once = print_problem(p);
        Problem q = parse_problem(once);
        CHECK(print_problem(q) == once);
        CHECK(instance_hash(p) == instance_hash(q));
    }
}

TEST_CASE("generated games survive a print and parse")
{
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        Game g = random_announcement_game(rng, 1 + pick(rng, 3), 1 + pick(rng, 4));
        Problem p = problem_from_game(g, {"random game"});
        Problem q = parse_problem(print_problem(p));
        Game h = game_of(q);
        CHECK(h.actions.size() == g.actions.size());
        CHECK(h.goal == g.goal);
        CHECK(canonical_key(h.initial) == canonical_key(g.initial));
        CHECK(instance_hash(p) == instance_hash(q));
    }
}

TEST_CASE("parse errors carry positions")
{
    try {
        parse_problem("agents a\nmodel {\n  world w { p }\n  obs c { w }\n  point w\n}\ngoal p\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_problem("agents a\ngoal p\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("agents a\nmodel {\n  world w { }\n  point w\n}\ngoal K[a] (p\n"), ParseError);
}

TEST_CASE("certificates round-trip")
{
    Certificate c;
    c.instance = 0x1234abcdULL;
    c.method = "fig2";
    c.deadlock = DeadlockMode::Vacuous;
    ControllerStrategy s;
    s.kind = StrategyKind::PointedModelMap;
    s.index = IndexMode::Round;
    s.entries["key one#0"] = "set_p1";
    s.entries["k2#2"] = "unset_p3";
    c.strategy = s;
    Certificate r = read_certificate(write_certificate(c));
    CHECK(r.instance == c.instance);
    CHECK(r.method == "fig2");
    CHECK(r.deadlock == DeadlockMode::Vacuous);
    REQUIRE(std::holds_alternative<ControllerStrategy>(r.strategy));
    const auto& rs = std::get<ControllerStrategy>(r.strategy);
    CHECK(rs.entries == s.entries);
    CHECK(rs.index == IndexMode::Round);

    Certificate d;
    d.method = "tree";
    DistributedStrategy ds;
    ds.keying = StrategyKeying::HistoryClass;
    ds.assign("a", "s,t", "learn_beta");
    ds.assign("b", "s", "b_input_0");
    d.strategy = ds;
    Certificate dr = read_certificate(write_certificate(d));
    REQUIRE(std::holds_alternative<DistributedStrategy>(dr.strategy));
    const auto& got = std::get<DistributedStrategy>(dr.strategy);
    CHECK(got.keying == StrategyKeying::HistoryClass);
    CHECK(got.entries() == ds.entries());

    CHECK_THROWS(read_certificate("not a certificate\n"));
}
