#pragma once

#include <string>

#include "delg/action.hpp"
#include "delg/distributed.hpp"
#include "delg/model.hpp"

namespace delg::testing {

// Two worlds w{p} and u{}, both agents unable to tell them apart.
inline PointedModel fig1_model()
{
    EpistemicModel m;
    m.add_world("w", {"p"});
    m.add_world("u", {});
    m.relations["a"] = Relation::universal(2);
    m.relations["b"] = Relation::universal(2);
    return {m, 0};
}

// alpha privately reveals p to a and resets it; b cannot tell alpha from the skip action.
inline ActionModel fig1_actions()
{
    ActionModel a;
    a.add_action("alpha", atom("p"), {{"p", bottom()}});
    a.add_action("alpha2", top());
    a.relations["a"] = Relation::identity(2);
    a.relations["b"] = Relation::universal(2);
    return a;
}

// Games over existential x and universal z that break exactly one hypothesis.
enum class Violation { H1, H2, H3, Turn };

inline Game violating_game(Violation v)
{
    const FiniteDomainVar turn("turn", {"x", "z"});
    EpistemicModel m;
    m.add_world("w", {"p", "turn@x"});
    m.add_world("u", {v == Violation::H1 ? "turn@z" : "turn@x"});
    m.relations["x"] = Relation::universal(2);
    ActionModel a;
    const Formula my_turn = turn.test("x");
    switch (v) {
    case Violation::H1:
    case Violation::H2:
        a.add_action("x_pass", my_turn, turn.assign("z"), Owner::of("x"));
        a.add_action("x_stay", my_turn, turn.assign(v == Violation::H2 ? "x" : "z"), Owner::of("x"));
        a.relations["x"] = Relation::universal(2);
        break;
    case Violation::H3:
        a.add_action("x_pass", my_turn, turn.assign("z"), Owner::of("x"));
        a.add_action("x_if_p", conj(atom("p"), my_turn), turn.assign("z"), Owner::of("x"));
        break;
    case Violation::Turn:
        a.add_action("x_pass", top(), turn.assign("z"), Owner::of("x"));
        break;
    }
    a.add_action("z_pass", turn.test("z"), turn.assign("x"), Owner::of("z"));
    return Game{PointedModel{m, 0}, a, turn, TeamSplit{{"x"}, {"z"}}, knows("x", atom("p"))};
}

} // namespace delg::testing
