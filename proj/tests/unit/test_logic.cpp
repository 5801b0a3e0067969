#include "doctest.h"

#include <algorithm>

#include "delg/error.hpp"
#include "delg/formula.hpp"
#include "delg/model.hpp"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace delg;
using namespace delg::testing;

TEST_CASE("parse_formula builds the expected trees")
{
    CHECK(parse_formula("K[a] !p") == knows("a", neg(atom("p"))));
    CHECK(parse_formula("(p | K[b] q)") == disj(atom("p"), knows("b", atom("q"))));
    CHECK(parse_formula("K[a] K[b] p & !K[a] q") ==
          conj(knows("a", knows("b", atom("p"))), neg(knows("a", atom("q")))));
    CHECK(parse_formula("p -> q -> r") == implies(atom("p"), implies(atom("q"), atom("r"))));
    CHECK(parse_formula("M[a] true") == possible("a", top()));
}

TEST_CASE("parse_formula reports positions")
{
    CHECK_THROWS_AS(parse_formula("p &"), ParseError);
    CHECK_THROWS_AS(parse_formula("K[a p"), ParseError);
    try {
        parse_formula("p & & q");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    const std::vector<std::string> agents{"a"};
    CHECK_THROWS(parse_formula("K[b] p", &agents));
}

TEST_CASE("to_string round-trips")
{
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        Formula f = random_formula(rng, {"p", "q"}, {"a", "b"}, 4, 3);
        CHECK(parse_formula(to_string(f)) == f);
    }
}

TEST_CASE("modal_depth")
{
    CHECK(modal_depth(atom("p")) == 0);
    CHECK(modal_depth(parse_formula("K[a] K[b] p & !K[a] q")) == 2);
    CHECK(modal_depth(possible("a", knows("b", knows("a", atom("p"))))) == 3);
}

TEST_CASE("eval on the two-world model")
{
    PointedModel pm = fig1_model();
    CHECK_FALSE(eval(pm, knows("a", atom("p"))));
    CHECK(eval(pm, atom("p")));
    CHECK(eval(pm, top()));
    CHECK(eval(pm, possible("b", neg(atom("p")))));

    EpistemicModel single;
    single.add_world("v", {});
    single.relations["a"] = Relation::identity(1);
    CHECK(eval(single, 0, knows("a", neg(atom("p")))));
}

TEST_CASE("eval agrees with the direct recursion")
{
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 5), {"p", "q"}, {"a", "b"}, coin(rng));
        Formula f = random_formula(rng, {"p", "q"}, {"a", "b"}, 3, 3);
        for (std::size_t w = 0; w < m.size(); ++w) CHECK(eval(m, w, f) == naive_eval(m, w, f));
    }
}

TEST_CASE("is_s5")
{
    EpistemicModel m;
    m.add_world("w", {});
    m.add_world("u", {});
    m.relations["a"] = Relation::identity(2);
    CHECK(is_s5(m));
    Relation r(2);
    r.add(0, 1);
    m.relations["a"] = r;
    CHECK_FALSE(is_s5(m));
    CHECK(is_s5(fig1_model().model));
}

TEST_CASE("restrict_to_component drops disconnected copies")
{
    PointedModel pm = fig1_model();
    CHECK(restrict_to_component(pm).model.size() == 2);

    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        EpistemicModel base = random_model(rng, 1 + pick(rng, 3), {"p", "q"}, {"a", "b"});
        const std::size_t n = base.size();
        EpistemicModel twice;
        for (int c = 0; c < 2; ++c)
            for (std::size_t w = 0; w < n; ++w) twice.add_world(base.names[w] + "_" + std::to_string(c), base.valuations[w]);
        for (const auto& [ag, r] : base.relations) {
            Relation d(2 * n);
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v : r.successors(u)) {
                    d.add(u, v);
                    d.add(u + n, v + n);
                }
            twice.relations[ag] = d;
        }
        PointedModel big{twice, 0};
        PointedModel small = restrict_to_component(big);
        CHECK(small.model.size() <= n);
        Formula f = random_formula(rng, {"p", "q"}, {"a", "b"}, 3, 3);
        CHECK(eval(small, f) == eval(big, f));
    }
}

TEST_CASE("bisim_contract merges duplicated worlds")
{
    PointedModel pm = fig1_model();
    CHECK(bisim_contract(pm).model.size() == 2);

    EpistemicModel m;
    m.add_world("w", {"p"});
    m.add_world("u", {});
    m.add_world("u2", {});
    m.relations["a"] = Relation::universal(3);
    PointedModel dup{m, 0};
    PointedModel c = bisim_contract(dup);
    CHECK(c.model.size() == 2);
    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        Formula f = random_formula(rng, {"p"}, {"a"}, 3, 3);
        CHECK(eval(c, f) == eval(dup, f));
    }
    EpistemicModel minimal;
    minimal.add_world("w", {"p"});
    minimal.add_world("u", {});
    minimal.relations["a"] = Relation::universal(2);
    CHECK(canonical_key(dup) == canonical_key(PointedModel{minimal, 0}));
}

TEST_CASE("canonical_key is invariant under renaming and sees the point")
{
    PointedModel w = fig1_model();
    PointedModel u = w;
    u.point = 1;
    CHECK(canonical_key(w) != canonical_key(u));

    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 5), {"p", "q"}, {"a", "b"}, coin(rng));
        const std::size_t n = m.size();
        std::vector<std::size_t> perm(n);
        for (std::size_t k = 0; k < n; ++k) perm[k] = k;
        std::shuffle(perm.begin(), perm.end(), rng);
        EpistemicModel r;
        std::vector<std::size_t> inv(n);
        for (std::size_t k = 0; k < n; ++k) inv[perm[k]] = k;
        for (std::size_t k = 0; k < n; ++k) r.add_world("z" + std::to_string(k), m.valuations[perm[k]]);
        for (const auto& [ag, rel] : m.relations) {
            Relation d(n);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y : rel.successors(x)) d.add(inv[x], inv[y]);
            r.relations[ag] = d;
        }
        const std::size_t pt = pick(rng, n);
        CHECK(canonical_key(PointedModel{m, pt}) == canonical_key(PointedModel{r, inv[pt]}));
        CHECK(canonical_key(PointedModel{m, pt}, false) == canonical_key(PointedModel{r, inv[pt]}, false));
    }
}

TEST_CASE("contraction and restriction preserve truth")
{
    Rng rng(16);
    for (int i = 0; i < 300; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 6), {"p", "q"}, {"a", "b"}, coin(rng));
        PointedModel pm{m, pick(rng, m.size())};
        Formula f = random_formula(rng, {"p", "q"}, {"a", "b"}, 3, 3);
        const bool truth = eval(pm, f);
        CHECK(eval(bisim_contract(pm), f) == truth);
        CHECK(eval(restrict_to_component(pm), f) == truth);
    }
}
