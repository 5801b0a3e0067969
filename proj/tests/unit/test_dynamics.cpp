#include "doctest.h"

#include <algorithm>

#include "delg/action.hpp"
#include "delg/error.hpp"
#include "delg/model.hpp"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace delg;
using namespace delg::testing;

TEST_CASE("executable")
{
    PointedModel pm = fig1_model();
    ActionModel a = fig1_actions();
    CHECK(executable(pm, a, 0));
    pm.point = 1;
    CHECK_FALSE(executable(pm, a, 0));
    CHECK(executable(pm, a, 1));
}

TEST_CASE("post_valuation")
{
    ActionModel a = fig1_actions();
    CHECK(post_valuation(Valuation{"p"}, a, 0).empty());
    CHECK(post_valuation(Valuation{"p", "q"}, a, 1) == Valuation{"p", "q"});
    ActionModel b;
    b.add_action("swap", top(), {{"p", atom("q")}, {"q", bottom()}});
    CHECK(post_valuation(Valuation{"q"}, b, 0) == Valuation{"p"});
}

TEST_CASE("product of the two-world example")
{
    PointedModel pm = fig1_model();
    ActionModel a = fig1_actions();
    Product pr = product_with_origin(pm.model, a);
    REQUIRE(pr.model.size() == 3);
    std::size_t wa = pr.model.size();
    for (std::size_t i = 0; i < pr.model.size(); ++i) {
        const auto [w, x] = pr.origin[i];
        if (w == 0 && x == 0) {
            wa = i;
            CHECK(pr.model.valuations[i].empty());
        } else if (w == 0) {
            CHECK(pr.model.valuations[i] == Valuation{"p"});
        } else {
            CHECK(x == 1);
            CHECK(pr.model.valuations[i].empty());
        }
    }
    REQUIRE(wa < pr.model.size());
    CHECK(eval(pr.model, wa, parse_formula("K[a] !p")));
    CHECK_FALSE(eval(pr.model, wa, parse_formula("K[b] p")));
    CHECK_FALSE(eval(pr.model, wa, parse_formula("K[b] !p")));
    CHECK(restrict_to_component(PointedModel{pr.model, wa}).model.size() == 3);
}

TEST_CASE("product with the identity action is isomorphic")
{
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 5), {"p", "q"}, {"a", "b"}, coin(rng));
        ActionModel id;
        id.add_action("skip", top());
        EpistemicModel p = product(m, id);
        REQUIRE(p.size() == m.size());
        const std::size_t pt = pick(rng, m.size());
        CHECK(canonical_key(PointedModel{m, pt}, false) == canonical_key(PointedModel{p, pt}, false));
    }
}

TEST_CASE("product matches the direct construction")
{
    Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        EpistemicModel m = random_model(rng, 1 + pick(rng, 4), atoms, agents, coin(rng));
        ActionModel a = random_action_model(rng, 1 + pick(rng, 3), atoms, agents, 1, coin(rng));
        NaiveProduct np = naive_product(m, a);
        Product pr = product_with_origin(m, a);
        REQUIRE(pr.model.size() == np.pairs.size());
        for (std::size_t i2 = 0; i2 < pr.model.size(); ++i2) {
            auto it = std::find(np.pairs.begin(), np.pairs.end(), pr.origin[i2]);
            REQUIRE(it != np.pairs.end());
            CHECK(pr.model.valuations[i2] == np.valuations[static_cast<std::size_t>(it - np.pairs.begin())]);
            const auto [w, x] = pr.origin[i2];
            for (const auto& ag : agents)
                for (std::size_t k = 0; k < pr.model.size(); ++k) {
                    const auto [w2, x2] = pr.origin[k];
                    CHECK(pr.model.relation(ag).has(i2, k) == (rel_has(m, ag, w, w2) && action_rel_has(a, ag, x, x2)));
                }
        }
    }
}

TEST_CASE("S5 closure under product")
{
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 4), {"p", "q"}, {"a", "b"});
        ActionModel a = random_action_model(rng, 1 + pick(rng, 3), {"p", "q"}, {"a", "b"}, 1);
        CHECK(is_s5(product(m, a)));
    }
}

TEST_CASE("apply_pointed")
{
    PointedModel pm = fig1_model();
    ActionModel a = fig1_actions();
    CHECK(eval(apply_pointed(pm, a, 0), parse_formula("K[a] !p")));
    CHECK_THROWS(apply_pointed(PointedModel{pm.model, 1}, a, 0));

    ActionModel id;
    id.add_action("skip", top());
    CHECK(canonical_key(apply_pointed(pm, id, 0)) == canonical_key(pm));

    ActionModel ann;
    ann.add_action("say_p", atom("p"));
    PointedModel after = apply_pointed(pm, ann, 0);
    CHECK(after.model.size() == 1);
    CHECK(eval(after, parse_formula("K[a] p & K[b] p")));
}

TEST_CASE("classify")
{
    ActionModel a = fig1_actions();
    ActionClass c = classify(a, std::size_t{0});
    CHECK(c.propositional);
    CHECK_FALSE(c.public_action.has_value());
    CHECK_FALSE(all_public_actions(a));

    ActionModel k;
    k.add_action("tell", knows("a", atom("p")));
    ActionClass ck = classify(k, std::size_t{0});
    CHECK(ck.public_announcement.has_value());
    CHECK_FALSE(ck.propositional);
    CHECK(all_public_announcements(k));

    ActionModel post;
    post.add_action("set", top(), {{"p", top()}});
    CHECK(all_public_actions(post));
    CHECK_FALSE(all_public_announcements(post));
}

TEST_CASE("satisfiable")
{
    CHECK(satisfiable({atom("p"), neg(atom("q"))}) == Tri::Yes);
    CHECK(satisfiable({atom("p"), neg(atom("p"))}) == Tri::No);
    CHECK(satisfiable({knows("a", atom("p")), neg(knows("a", atom("p")))}) == Tri::No);
    CHECK(satisfiable({possible("a", atom("p")), possible("a", neg(atom("p")))}) == Tri::Yes);
}

TEST_CASE("merge_pointed_actions")
{
    ActionModel one;
    one.add_action("e", atom("p"));
    auto [m1, idx1] = merge_pointed_actions({PointedActionModel{one, 0}});
    CHECK(m1.size() == 1);
    CHECK(idx1.size() == 1);

    ActionModel two;
    two.add_action("f", top(), {{"p", bottom()}});
    auto [m2, idx2] = merge_pointed_actions({PointedActionModel{one, 0}, PointedActionModel{two, 0}});
    CHECK(m2.size() == 2);
    for (const auto& ag : {"a", "b"}) CHECK_FALSE(m2.relation(ag).has(idx2[0], idx2[1]));

    Rng rng(24);
    for (int i = 0; i < 50; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        PointedModel pm{random_model(rng, 1 + pick(rng, 3), atoms, agents), 0};
        std::vector<PointedActionModel> parts;
        const std::size_t k = 1 + pick(rng, 3);
        for (std::size_t j = 0; j < k; ++j) {
            ActionModel a = random_action_model(rng, 1 + pick(rng, 2), atoms, agents, 1);
            parts.push_back({a, pick(rng, a.size())});
        }
        auto [merged, index] = merge_pointed_actions(parts);
        for (std::size_t j = 0; j < k; ++j) {
            if (!executable(pm, parts[j].model, parts[j].point)) {
                CHECK_FALSE(executable(pm, merged, index[j]));
                continue;
            }
            CHECK(canonical_key(apply_pointed(pm, parts[j].model, parts[j].point)) ==
                  canonical_key(apply_pointed(pm, merged, index[j])));
        }
    }
}

TEST_CASE("finite-domain variables")
{
    FiniteDomainVar turn("turn", {"a", "b"});
    CHECK(turn.test("a") == atom("turn@a"));
    PostMap post = turn.assign("b");
    CHECK(post.at("turn@b") == top());
    CHECK(post.at("turn@a") == bottom());
    CHECK(turn.decode(Valuation{"turn@b"}) == std::optional<std::string>("b"));
    CHECK_FALSE(turn.decode(Valuation{"turn@a", "turn@b"}).has_value());
    CHECK_THROWS_AS(turn.test("c"), InputError);

    std::vector<std::string> dom;
    for (int i = 0; i < 8; ++i) dom.push_back("s" + std::to_string(i));
    FiniteDomainVar q("q", dom, true);
    CHECK(q.atoms().size() == 3);
    for (const auto& v : dom) {
        CHECK(q.decode(q.encode(v)) == std::optional<std::string>(v));
        CHECK(eval_valuation(q.encode(v), q.test(v)));
    }
    // q := successor, written as guarded bits
    std::vector<std::pair<Formula, std::string>> cases;
    for (int i = 0; i < 8; ++i) cases.emplace_back(q.test(dom[i]), dom[(i + 1) % 8]);
    ActionModel step;
    step.add_action("step", top(), q.assign_cases(cases));
    for (int i = 0; i < 8; ++i) CHECK(q.decode(post_valuation(q.encode(dom[i]), step, 0)) == dom[(i + 1) % 8]);
}
