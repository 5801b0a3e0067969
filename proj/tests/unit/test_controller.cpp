#include "doctest.h"

#include <functional>

#include "delg/arena.hpp"
#include "delg/controller.hpp"
#include "delg/error.hpp"
#include "delg/reductions.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace delg;
using namespace delg::testing;

namespace {

EncodedController qbf_instance(const std::string& matrix)
{
    return qbf_to_controller(QbfInstance{{{true, "x1"}, {false, "x2"}}, parse_formula(matrix)});
}

// Replaces every entry by another controller action; the result must not verify.
ControllerStrategy tamper(const ControllerStrategy& s, const ActionModel& a)
{
    ControllerStrategy t = s;
    const auto ctr = a.owned_by(Owner::controller());
    for (auto& [key, action] : t.entries)
        for (std::size_t x : ctr)
            if (a.names[x] != action) {
                action = a.names[x];
                break;
            }
    return t;
}

} // namespace

TEST_CASE("announcement search on small QBF encodings")
{
    auto yes = qbf_instance("x1 | x2");
    ControllerResult r = solve_controller_announcements(yes.initial, yes.actions, yes.goal);
    REQUIRE(r.verdict == Tri::Yes);
    REQUIRE(r.strategy);
    CHECK(verify_controller_strategy(yes.initial, yes.actions, yes.goal, *r.strategy).status == Tri::Yes);
    VerifyResult bad = verify_controller_strategy(yes.initial, yes.actions, yes.goal, tamper(*r.strategy, yes.actions));
    CHECK(bad.status == Tri::No);
    CHECK_FALSE(bad.message.empty());

    auto no = qbf_instance("x1 & x2");
    CHECK(solve_controller_announcements(no.initial, no.actions, no.goal).verdict == Tri::No);
    CHECK(solve_controller_announcements(no.initial, no.actions, top()).verdict == Tri::Yes);
}

TEST_CASE("methods reject instances outside their class")
{
    EpistemicModel m;
    m.add_world("w", {});
    ActionModel a;
    a.add_action("set", top(), {{"p", top()}}, Owner::controller());
    CHECK_THROWS_AS(solve_controller_announcements(PointedModel{m, 0}, a, atom("p")), InputError);
    a.add_action("peek", knows("a", atom("p")), {}, Owner::environment());
    CHECK_THROWS_AS(solve_controller_propositional(PointedModel{m, 0}, a, atom("p")), InputError);
}

TEST_CASE("public fixpoint on G4 encodings")
{
    G4Instance done;
    done.k = 1;
    done.initial = {"p1"};
    done.terms = {{{"p1", true}}};
    auto enc = g4_to_controller(done);
    CHECK(solve_controller_public(enc.initial, enc.actions, enc.goal).verdict == Tri::Yes);

    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        G4Instance g = random_g4(rng, 2);
        auto e = g4_to_controller(g);
        ControllerResult r = solve_controller_public(e.initial, e.actions, e.goal);
        CHECK((r.verdict == Tri::Yes) == g4_brute_force(g));
        if (r.verdict == Tri::Yes) {
            REQUIRE(r.strategy);
            CHECK(verify_controller_strategy(e.initial, e.actions, e.goal, *r.strategy).status == Tri::Yes);
        }
    }
}

TEST_CASE("deadlock modes")
{
    // The environment has no executable move and the goal is false.
    EpistemicModel m;
    m.add_world("w", {});
    ActionModel a;
    a.add_action("skip", top(), {}, Owner::controller());
    a.add_action("never", bottom(), {}, Owner::environment());
    PointedModel pm{m, 0};
    ControllerOptions lose, vacuous;
    vacuous.deadlock = DeadlockMode::Vacuous;
    for (const char* method : {"fig2", "fig3", "arena"}) {
        CAPTURE(method);
        CHECK(solve_controller(pm, a, atom("p"), method, lose).verdict == Tri::No);
        CHECK(solve_controller(pm, a, atom("p"), method, vacuous).verdict == Tri::Yes);
    }
}

TEST_CASE("arena construction by hand")
{
    EpistemicModel m;
    m.add_world("w", {});
    m.relations["b"] = Relation::identity(1);
    ActionModel none;
    GameArena empty = build_arena(PointedModel{m, 0}, none);
    CHECK(empty.size() == 1);
    CHECK(empty.succ[0].empty());

    ActionModel a;
    a.add_action("ac", top(), {{"p", top()}}, Owner::controller());
    a.add_action("ae", atom("p"), {}, Owner::environment());
    GameArena g = build_arena(PointedModel{m, 0}, a);
    REQUIRE(g.size() == 3);
    CHECK(g.player[g.initial] == 0);
    REQUIRE(g.succ[g.initial].size() == 1);
    const std::size_t v1 = g.succ[g.initial][0];
    CHECK(g.player[v1] == 1);
    CHECK(g.valuations[v1] == Valuation{"p"});
    REQUIRE(g.succ[v1].size() == 1);
    const std::size_t v2 = g.succ[v1][0];
    CHECK(g.player[v2] == 0);
    CHECK(g.succ[v2] == std::vector<std::size_t>{v1});
    CHECK(g.size() <= arena_size_bound(1, 2, 1));

    ControllerResult r = solve_controller_propositional(PointedModel{m, 0}, a, knows("b", atom("p")));
    CHECK(r.verdict == Tri::Yes);
    REQUIRE(r.strategy);
    CHECK(r.strategy->kind == StrategyKind::ExpandedVertexMap);
    CHECK(verify_controller_strategy(PointedModel{m, 0}, a, knows("b", atom("p")), *r.strategy).status == Tri::Yes);
}

TEST_CASE("knowledge expansion")
{
    GameArena g;
    g.names = {"v0", "v1"};
    g.player = {0, 0};
    g.succ = {{}, {}};
    g.labels = {{}, {}};
    g.valuations = {{"p"}, {}};
    g.relations["b"] = Relation::universal(2);
    ExpandedArena x = expand_knowledge_depth1(g, knows("b", atom("p")));
    CHECK_FALSE(x.goal[x.arena.initial]);
    CHECK(eval_expanded(x, x.arena.initial, possible("b", atom("p"))));

    ExpandedArena flat = expand_knowledge_depth1(g, atom("p"));
    CHECK(flat.arena.size() <= g.size());
    CHECK(flat.goal[flat.arena.initial]);
    CHECK_THROWS(expand_knowledge_depth1(g, knows("b", knows("b", atom("p")))));
}

TEST_CASE("attractor against bounded minimax")
{
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 8;
        std::vector<int> player(n);
        std::vector<std::vector<std::size_t>> succ(n);
        std::vector<bool> goal(n);
        for (std::size_t v = 0; v < n; ++v) {
            player[v] = coin(rng) ? 1 : 0;
            goal[v] = coin(rng, 0.2);
            for (std::size_t u = 0; u < n; ++u)
                if (coin(rng, 0.25)) succ[v].push_back(u);
        }
        for (DeadlockMode mode : {DeadlockMode::Lose, DeadlockMode::Vacuous}) {
            std::function<bool(std::size_t, std::size_t)> win = [&](std::size_t v, std::size_t d) -> bool {
                if (goal[v]) return true;
                if (d == 0) return false;
                if (succ[v].empty()) return player[v] == 1 && mode == DeadlockMode::Vacuous;
                if (player[v] == 0) {
                    for (std::size_t u : succ[v])
                        if (win(u, d - 1)) return true;
                    return false;
                }
                for (std::size_t u : succ[v])
                    if (!win(u, d - 1)) return false;
                return true;
            };
            AttractorResult att = solve_attractor(player, succ, goal, mode);
            for (std::size_t v = 0; v < n; ++v) {
                CHECK(att.winning[v] == win(v, n));
                if (att.winning[v] && player[v] == 0 && !goal[v]) {
                    REQUIRE(att.move[v].has_value());
                    CHECK(att.winning[succ[v][*att.move[v]]]);
                }
            }
        }
    }
}

TEST_CASE("solvers agree with the announcement oracle")
{
    Rng rng(43);
    for (int i = 0; i < 80; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        PointedModel pm{random_model(rng, 1 + pick(rng, 4), atoms, agents), 0};
        ActionModel a = random_announcements(rng, 1 + pick(rng, 4), atoms, agents, 1);
        Formula goal = random_formula(rng, atoms, agents, 2, 1);
        const bool expected = announcement_game_oracle(pm, a, goal, DeadlockMode::Lose);
        for (const char* method : {"fig2", "fig3", "bounded"}) {
            CAPTURE(method);
            ControllerOptions o;
            o.horizon = 2 * pm.model.size() + 2;
            ControllerResult r = solve_controller(pm, a, goal, method, o);
            if (r.verdict == Tri::Unknown) continue;
            CHECK((r.verdict == Tri::Yes) == expected);
            if (r.verdict == Tri::Yes) {
                REQUIRE(r.strategy);
                CHECK(verify_controller_strategy(pm, a, goal, *r.strategy).status == Tri::Yes);
            }
        }
    }
}
