#include "doctest.h"

#include "delg/planning.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

using namespace delg;
using namespace delg::testing;

TEST_CASE("trivial goal gives the empty plan")
{
    PlanResult r = plan_exists(fig1_model(), fig1_actions(), top());
    CHECK(r.verdict == Tri::Yes);
    CHECK(r.plan.empty());
}

TEST_CASE("private learning plan")
{
    PointedModel pm = fig1_model();
    ActionModel a = fig1_actions();
    const Formula goal = parse_formula("K[a] !p");
    PlanResult r = plan_exists(pm, a, goal);
    REQUIRE(r.verdict == Tri::Yes);
    CHECK(r.plan == std::vector<std::string>{"alpha"});
    CHECK(verify_plan(pm, a, r.plan, goal).ok);
    PlanCheck twice = verify_plan(pm, a, {"alpha", "alpha"}, goal);
    CHECK_FALSE(twice.ok);
    CHECK_FALSE(twice.message.empty());
}

TEST_CASE("a skip action cannot create knowledge")
{
    ActionModel skip;
    skip.add_action("alpha2", top());
    for (std::size_t bound : {1, 3, 20}) {
        PlanOptions o;
        o.bound = bound;
        PlanResult r = plan_exists(fig1_model(), skip, parse_formula("K[b] p"), o);
        CHECK(r.verdict == Tri::No);
    }
}

TEST_CASE("shortest plan, ties by action order")
{
    EpistemicModel m;
    m.add_world("w", {});
    m.relations["a"] = Relation::identity(1);
    ActionModel a;
    a.add_action("set_q", top(), {{"q", top()}});
    a.add_action("set_p", top(), {{"p", top()}});
    a.add_action("set_both", top(), {{"p", top()}, {"q", top()}});
    PlanResult r = plan_exists(PointedModel{m, 0}, a, parse_formula("p & q"));
    REQUIRE(r.verdict == Tri::Yes);
    CHECK(r.plan == std::vector<std::string>{"set_both"});
    PlanResult r2 = plan_exists(PointedModel{m, 0}, a, parse_formula("p | q"));
    CHECK(r2.plan == std::vector<std::string>{"set_q"});
}

TEST_CASE("expanding instances report Unknown at the bound")
{
    // Each step doubles the uncertainty of a; the goal is contradictory.
    EpistemicModel m;
    m.add_world("w", {});
    m.relations["a"] = Relation::identity(1);
    ActionModel a;
    a.add_action("e0", top(), {{"p", top()}});
    a.add_action("e1", top(), {{"p", bottom()}});
    a.relations["a"] = Relation::universal(2);
    PlanOptions o;
    o.bound = 3;
    PlanResult r = plan_exists(PointedModel{m, 0}, a, parse_formula("p & !p"), o);
    CHECK(r.verdict != Tri::Yes);
}

TEST_CASE("plans verify and contraction does not change verdicts")
{
    Rng rng(31);
    int yes = 0;
    for (int i = 0; i < 100; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        PointedModel pm{random_model(rng, 1 + pick(rng, 4), atoms, agents), 0};
        ActionModel a = random_public_actions(rng, 1 + pick(rng, 3), atoms, agents, 1);
        Formula goal = random_formula(rng, atoms, agents, 2, 1);
        PlanResult r = plan_exists(pm, a, goal);
        PlanOptions raw;
        raw.contract = false;
        PlanResult r2 = plan_exists(pm, a, goal, raw);
        CHECK(r.verdict == r2.verdict);
        if (r.verdict == Tri::Yes) {
            ++yes;
            CHECK(verify_plan(pm, a, r.plan, goal).ok);
        }
    }
    CHECK(yes > 0);
}

TEST_CASE("announcement plans are insensitive to extra length")
{
    Rng rng(32);
    for (int i = 0; i < 60; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        PointedModel pm{random_model(rng, 1 + pick(rng, 4), atoms, agents), 0};
        ActionModel a = random_announcements(rng, 1 + pick(rng, 3), atoms, agents, 1);
        Formula goal = random_formula(rng, atoms, agents, 2, 1);
        PlanOptions tight, loose;
        tight.bound = pm.model.size();
        loose.bound = pm.model.size() + 5;
        CHECK(plan_exists(pm, a, goal, tight).verdict == plan_exists(pm, a, goal, loose).verdict);
    }
}
