// Acceptance run: one PASS/FAIL line per criterion, each with a pinned time limit.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "delg/arena.hpp"
#include "delg/controller.hpp"
#include "delg/distributed.hpp"
#include "delg/planning.hpp"
#include "delg/reductions.hpp"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace delg;
using namespace delg::testing;

namespace {

struct Outcome {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::size_t yes = 0; // instances whose reference verdict is Yes
    std::string first_failure;

    void expect(bool ok, const std::string& what)
    {
        ++cases;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
};

// Every Yes from every suite is replayed through its verifier.
Outcome soundness;

void check_controller_yes(const PointedModel& pm, const ActionModel& a, const Formula& goal, const ControllerResult& r,
                          DeadlockMode deadlock, const std::string& tag)
{
    if (r.verdict != Tri::Yes) return;
    if (!r.strategy) {
        soundness.expect(false, tag + ": Yes without a strategy");
        return;
    }
    VerifyResult v = verify_controller_strategy(pm, a, goal, *r.strategy, deadlock);
    soundness.expect(v.status == Tri::Yes, tag + ": " + v.message);
}

void check_distributed_yes(const Game& g, const DistributedResult& r, DeadlockMode deadlock, const std::string& tag)
{
    if (r.verdict != Tri::Yes) return;
    if (!r.strategy) {
        soundness.expect(false, tag + ": Yes without a strategy");
        return;
    }
    VerifyResult v = verify_distributed_strategy(g, *r.strategy, deadlock);
    soundness.expect(v.status == Tri::Yes, tag + ": " + v.message);
}

std::string verdict_name(Tri t) { return to_string(t); }

std::set<std::string> atoms_in(const EpistemicModel& m, const ActionModel& a)
{
    std::set<std::string> out;
    for (const auto& v : m.valuations) out.insert(v.begin(), v.end());
    for (std::size_t x = 0; x < a.size(); ++x) {
        for (const auto& p : atoms_of(a.pre[x])) out.insert(p);
        for (const auto& [p, f] : a.post[x]) {
            out.insert(p);
            for (const auto& q : atoms_of(f)) out.insert(q);
        }
    }
    return out;
}

// 1 ---------------------------------------------------------------------------------

Outcome two_world_learning()
{
    Outcome o;
    PointedModel pm = fig1_model();
    ActionModel a = fig1_actions();
    PointedModel after = apply_pointed(pm, a, a.index_of("alpha"), ApplyOptions{false, false});
    o.expect(after.model.size() == 3, "product has " + std::to_string(after.model.size()) + " worlds");
    o.expect(eval(after, parse_formula("K[a] !p")), "K[a] !p fails after alpha");
    o.expect(!eval(after, parse_formula("K[b] p")), "K[b] p holds after alpha");
    o.expect(!eval(after, parse_formula("K[b] !p")), "K[b] !p holds after alpha");
    PlanResult r = plan_exists(pm, a, parse_formula("K[a] !p"));
    o.expect(r.verdict == Tri::Yes && r.plan == std::vector<std::string>{"alpha"}, "plan is not [alpha]");
    if (r.verdict == Tri::Yes)
        soundness.expect(verify_plan(pm, a, r.plan, parse_formula("K[a] !p")).ok, "two-world plan does not verify");
    return o;
}

// 2 ---------------------------------------------------------------------------------

Outcome qbf_suite()
{
    Outcome o;
    const std::vector<Formula> lits{atom("x1"), neg(atom("x1")), atom("x2"), neg(atom("x2"))};
    std::vector<Formula> clauses(lits);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (j != i + 1 || i % 2 == 1) clauses.push_back(disj(lits[i], lits[j]));
    std::vector<Formula> matrices{top()};
    const std::size_t c = clauses.size();
    for (std::size_t i = 0; i < c; ++i) {
        matrices.push_back(clauses[i]);
        for (std::size_t j = i + 1; j < c; ++j) {
            matrices.push_back(conj(clauses[i], clauses[j]));
            for (std::size_t k = j + 1; k < c; ++k) matrices.push_back(conj_all({clauses[i], clauses[j], clauses[k]}));
        }
    }
    std::vector<QbfInstance> family;
    for (int prefix = 0; prefix < 4; ++prefix)
        for (const auto& m : matrices) family.push_back({{{(prefix & 1) == 0, "x1"}, {(prefix & 2) != 0, "x2"}}, m});
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) family.push_back(random_qbf(rng, 4, 1 + pick(rng, 5)));

    for (const auto& raw : family) {
        QbfInstance q = normalize_qbf(raw);
        EncodedController e = qbf_to_controller(q);
        ControllerResult r = solve_controller_announcements(e.initial, e.actions, e.goal);
        const bool expected = qbf_brute_force(raw);
        o.yes += expected;
        std::ostringstream tag;
        tag << "matrix " << to_string(raw.matrix) << " expected " << expected << " got " << verdict_name(r.verdict);
        o.expect(r.verdict == (expected ? Tri::Yes : Tri::No), tag.str());
        check_controller_yes(e.initial, e.actions, e.goal, r, DeadlockMode::Lose, "qbf " + tag.str());
    }
    return o;
}

// 3 ---------------------------------------------------------------------------------

Outcome g4_condplan_suite()
{
    Outcome o;
    Rng rng(3033);
    for (int i = 0; i < 100; ++i) {
        G4Instance g = random_g4(rng, 1 + pick(rng, 2));
        EncodedController e = g4_to_controller(g);
        ControllerResult r = solve_controller_public(e.initial, e.actions, e.goal);
        const bool expected = g4_brute_force(g);
        o.yes += expected;
        o.expect(r.verdict == (expected ? Tri::Yes : Tri::No), "g4 #" + std::to_string(i) + " got " + verdict_name(r.verdict));
        check_controller_yes(e.initial, e.actions, e.goal, r, DeadlockMode::Lose, "g4 #" + std::to_string(i));
    }
    for (int i = 0; i < 50; ++i) {
        CondPlanInstance c = random_condplan(rng);
        EncodedController e = condplan_to_controller(c);
        ControllerResult r = solve_controller_public(e.initial, e.actions, e.goal);
        const bool expected = condplan_brute_force(c);
        o.yes += expected;
        o.expect(r.verdict == (expected ? Tri::Yes : Tri::No),
                 "condplan #" + std::to_string(i) + " got " + verdict_name(r.verdict));
        check_controller_yes(e.initial, e.actions, e.goal, r, DeadlockMode::Lose, "condplan #" + std::to_string(i));
    }
    return o;
}

// 4 ---------------------------------------------------------------------------------

Outcome cross_method_suite()
{
    Outcome o;
    Rng rng(4044);
    std::size_t arena_cases = 0;
    for (int i = 0; i < 160; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        const bool prop = i % 2 == 0;
        PointedModel pm{random_model(rng, 1 + pick(rng, 4), atoms, agents), 0};
        ActionModel a = random_announcements(rng, 1 + pick(rng, 4), atoms, agents, prop ? 0 : 1);
        Formula goal = random_formula(rng, atoms, agents, 2, prop ? 1 : 2);
        const DeadlockMode deadlock = i % 5 == 4 ? DeadlockMode::Vacuous : DeadlockMode::Lose;
        ControllerOptions opts;
        opts.deadlock = deadlock;
        const std::string tag = "instance #" + std::to_string(i);
        ControllerResult f2 = solve_controller(pm, a, goal, "fig2", opts);
        ControllerResult f3 = solve_controller(pm, a, goal, "fig3", opts);
        const bool oracle = announcement_game_oracle(pm, a, goal, deadlock);
        o.yes += oracle;
        o.expect(f2.verdict == f3.verdict, tag + ": fig2 " + verdict_name(f2.verdict) + " vs fig3 " + verdict_name(f3.verdict));
        o.expect(f2.verdict == (oracle ? Tri::Yes : Tri::No), tag + ": fig2 disagrees with the subset oracle");
        check_controller_yes(pm, a, goal, f2, deadlock, tag + " fig2");
        check_controller_yes(pm, a, goal, f3, deadlock, tag + " fig3");
        if (all_propositional(a) && modal_depth(goal) <= 1) {
            ++arena_cases;
            ControllerResult ar = solve_controller(pm, a, goal, "arena", opts);
            o.expect(ar.verdict == f2.verdict, tag + ": arena " + verdict_name(ar.verdict) + " vs fig2 " + verdict_name(f2.verdict));
            check_controller_yes(pm, a, goal, ar, deadlock, tag + " arena");
        }
    }
    o.expect(arena_cases >= 50, "only " + std::to_string(arena_cases) + " arena cases");
    return o;
}

// 5 ---------------------------------------------------------------------------------

Outcome collapse_suite()
{
    Outcome o;
    Rng rng(5055);
    for (int i = 0; i < 120; ++i) {
        const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
        const bool announcements = i % 2 == 0;
        PointedModel pm{random_model(rng, 1 + pick(rng, 3), atoms, agents), 0};
        ActionModel a = announcements ? random_announcements(rng, 1 + pick(rng, 3), atoms, agents, 1)
                                      : random_public_actions(rng, 1 + pick(rng, 3), atoms, agents, 1);
        Formula goal = random_formula(rng, atoms, agents, 2, 1);
        Game g = controller_as_distributed(pm, a, goal);
        const std::string tag = "instance #" + std::to_string(i);
        const char* dm = announcements ? "fig4" : "fig5";
        const char* cm = announcements ? "fig2" : "fig3";
        DistributedResult d = solve_distributed(g, dm);
        ControllerResult c = solve_controller(pm, a, goal, cm);
        o.yes += c.verdict == Tri::Yes;
        o.expect(d.verdict == c.verdict, tag + ": " + dm + " " + verdict_name(d.verdict) + " vs " + cm + " " +
                                             verdict_name(c.verdict));
        check_distributed_yes(g, d, DeadlockMode::Lose, tag + " " + dm);
        check_controller_yes(pm, a, goal, c, DeadlockMode::Lose, tag + " " + cm);
    }
    return o;
}

// 6 ---------------------------------------------------------------------------------

Outcome distributed_oracle_suite()
{
    Outcome o;
    std::size_t used = 0;
    for (std::uint64_t seed = 0; used < 150 && seed < 2000; ++seed) {
        Rng rng(6000 + seed);
        Game g = random_announcement_game(rng, 1 + pick(rng, 3), 1 + pick(rng, 4));
        if (!check_hypotheses(g).all_pass()) continue;
        ++used;
        const std::size_t n = g.initial.model.size();
        DistributedOptions fo;
        fo.literal_round_bound = true;
        DistributedResult f4 = solve_distributed(g, "fig4", fo);
        DistributedOptions to;
        to.horizon = n;
        DistributedResult tree = strategy_tree_search(g, to);
        Tri tv = tree.verdict;
        if (tv == Tri::Unknown && tree.no_within_bound) tv = Tri::No;
        o.yes += tv == Tri::Yes;
        const std::string tag = "seed " + std::to_string(6000 + seed) + ": fig4 " + verdict_name(f4.verdict) +
                                " vs tree " + verdict_name(tv);
        o.expect(tv != Tri::Unknown && f4.verdict == tv, tag);
        check_distributed_yes(g, f4, DeadlockMode::Lose, tag + " fig4");
        check_distributed_yes(g, tree, DeadlockMode::Lose, tag + " tree");
    }
    o.expect(used >= 100, "only " + std::to_string(used) + " instances pass the hypotheses");
    return o;
}

// 8 ---------------------------------------------------------------------------------

Outcome size_bound_suite()
{
    Outcome o;
    Rng rng(8088);
    const std::vector<std::string> all_atoms{"p", "q", "r", "s", "t", "v"};
    for (int i = 0; i < 100; ++i) {
        const std::vector<std::string> atoms(all_atoms.begin(), all_atoms.begin() + 1 + static_cast<long>(pick(rng, 6)));
        PointedModel pm{random_model(rng, 1 + pick(rng, 4), atoms, {"a", "b"}), 0};
        ActionModel a = random_action_model(rng, 1 + pick(rng, 4), atoms, {"a", "b"}, 0);
        const std::size_t m = atoms_in(pm.model, a).size();
        GameArena g = build_arena(pm, a);
        const std::size_t bound = pm.model.size() + a.size() * (std::size_t{1} << (m + 1));
        o.expect(m <= 6 && g.size() <= bound, "two-player arena of size " + std::to_string(g.size()) + " > " +
                                                  std::to_string(bound));
    }
    for (int i = 0; i < 100; ++i) {
        const std::vector<std::string> agents{"x", "y", "z"};
        const FiniteDomainVar turn("turn", agents);
        const std::vector<std::string> atoms(all_atoms.begin(), all_atoms.begin() + 1 + static_cast<long>(pick(rng, 3)));
        EpistemicModel m = random_model(rng, 1 + pick(rng, 4), atoms, agents);
        for (auto& v : m.valuations) v.insert("turn@x");
        ActionModel a;
        const std::size_t n = 1 + pick(rng, 4);
        for (std::size_t k = 0; k < n; ++k) {
            const std::string owner = agents[k % 3];
            PostMap post = turn.assign(agents[(k + 1) % 3]);
            for (const auto& p : atoms)
                if (coin(rng, 0.3)) post[p] = random_prop(rng, atoms, 1);
            a.add_action("e" + std::to_string(k), conj(random_prop(rng, atoms, 1), turn.test(owner)), post, Owner::of(owner));
        }
        for (const auto& ag : agents) a.relations[ag] = random_partition(rng, n);
        const std::size_t bits = atoms_in(m, a).size();
        MultiArena g = build_multiplayer_arena(PointedModel{m, 0}, a, turn);
        const std::size_t bound = m.size() + a.size() * (std::size_t{1} << bits);
        o.expect(bits <= 6 && g.size() <= bound, "multi-player arena of size " + std::to_string(g.size()) + " > " +
                                                     std::to_string(bound));
    }
    for (std::size_t k = 1; k <= 3; ++k) {
        QbfInstance q = random_qbf(rng, 2 * k, 2);
        EncodedController e = qbf_to_controller(q);
        o.expect(e.initial.model.size() == 4 * k + 1, "qbf encoding with k=" + std::to_string(k) + " has " +
                                                          std::to_string(e.initial.model.size()) + " worlds");
        o.expect(e.actions.size() == 4 * k && all_public_announcements(e.actions),
                 "qbf encoding with k=" + std::to_string(k) + " has " + std::to_string(e.actions.size()) + " actions");
    }
    return o;
}

// 9 ---------------------------------------------------------------------------------

Outcome preservation_suite()
{
    Outcome o;
    Rng rng(9099);
    const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b"};
    for (int i = 0; i < 1000; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 6), atoms, agents, coin(rng, 0.7));
        PointedModel pm{m, pick(rng, m.size())};
        Formula f = random_formula(rng, atoms, agents, 3, 3);
        const bool truth = naive_eval(pm.model, pm.point, f);
        o.expect(eval(bisim_contract(pm), f) == truth, "contraction changes " + to_string(f));
        o.expect(eval(restrict_to_component(pm), f) == truth, "restriction changes " + to_string(f));
    }
    for (int i = 0; i < 200; ++i) {
        EpistemicModel m = random_model(rng, 1 + pick(rng, 4), atoms, agents);
        ActionModel a = random_action_model(rng, 1 + pick(rng, 4), atoms, agents, 1);
        o.expect(is_s5(product(m, a)), "S5 product is not S5, case " + std::to_string(i));
    }
    for (int i = 0; i < 100; ++i) {
        PointedModel pm{random_model(rng, 1 + pick(rng, 5), atoms, agents), 0};
        ActionModel a = random_announcements(rng, 1 + pick(rng, 4), atoms, agents, 1);
        Formula goal = random_formula(rng, atoms, agents, 2, 1);
        PlanOptions tight, loose;
        tight.bound = pm.model.size();
        loose.bound = pm.model.size() + 5;
        PlanResult r1 = plan_exists(pm, a, goal, tight);
        PlanResult r2 = plan_exists(pm, a, goal, loose);
        o.expect(r1.verdict == r2.verdict, "plan verdict depends on the bound, case " + std::to_string(i));
        for (const auto* r : {&r1, &r2})
            if (r->verdict == Tri::Yes) soundness.expect(verify_plan(pm, a, r->plan, goal).ok, "plan does not verify");
    }
    return o;
}

// 10 --------------------------------------------------------------------------------

Outcome hypotheses_suite()
{
    Outcome o;
    Rng rng(10101);
    for (int i = 0; i < 40; ++i) {
        TeamDfaInstance t;
        const std::size_t n = 1 + pick(rng, 3);
        for (std::size_t s = 0; s < n; ++s) t.states.push_back("s" + std::to_string(s));
        t.initial = t.states[pick(rng, n)];
        for (const auto& s : t.states) {
            for (int x = 0; x < 2; ++x) t.delta[{s, x}] = t.states[pick(rng, n)];
            if (coin(rng, 0.3)) t.f_exists.insert(s);
            if (coin(rng, 0.3)) t.f_forall.insert(s);
        }
        TeamDfaOptions opts;
        opts.binary = i % 2 == 1;
        HypothesesReport r = check_hypotheses(teamdfa_to_distributed(t, opts));
        o.expect(r.all_pass(), "encoded automaton #" + std::to_string(i) + " fails: " + r.h1.witness + r.h2.witness +
                                   r.h3.witness + r.turn.witness);
    }
    struct Expectation {
        Violation v;
        const char* name;
        HypothesisCheck HypothesesReport::*check;
    };
    for (const auto& [v, name, check] : {Expectation{Violation::H1, "H1", &HypothesesReport::h1},
                                         Expectation{Violation::H2, "H2", &HypothesesReport::h2},
                                         Expectation{Violation::H3, "H3", &HypothesesReport::h3},
                                         Expectation{Violation::Turn, "turn", &HypothesesReport::turn}}) {
        const HypothesisCheck c = check_hypotheses(violating_game(v)).*check;
        o.expect(c.status == Tri::No && !c.witness.empty(), std::string("hand-built ") + name + " violation not caught");
    }
    return o;
}

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "two-world private learning", 1.0, two_world_learning},
        {2, "QBF differential", 30.0, qbf_suite},
        {3, "G4 and conditional planning differential", 60.0, g4_condplan_suite},
        {4, "controller cross-method agreement", 60.0, cross_method_suite},
        {5, "distributed collapse to controller", 60.0, collapse_suite},
        {6, "announcement search vs strategy tree", 120.0, distributed_oracle_suite},
        {8, "construction sizes", 60.0, size_bound_suite},
        {9, "semantics preservation", 60.0, preservation_suite},
        {10, "hypotheses checking", 60.0, hypotheses_suite},
    };
    struct Line {
        int id;
        std::string text;
        bool pass;
    };
    std::vector<Line> lines;
    double total_time = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        std::string error;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        total_time += secs;
        const bool pass = error.empty() && o.failures == 0 && secs < c.limit_seconds;
        std::ostringstream s;
        s << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.cases - o.failures << "/" << o.cases
          << " checks";
        if (o.yes) s << " (" << o.yes << " Yes instances)";
        s << ", " << secs << " s (limit " << c.limit_seconds << " s)";
        if (!error.empty()) s << "; exception: " << error;
        if (o.failures) s << "; first failure: " << o.first_failure;
        lines.push_back({c.id, s.str(), pass});
    }
    {
        const bool pass = soundness.failures == 0 && soundness.cases > 0;
        std::ostringstream s;
        s << (pass ? "PASS" : "FAIL") << " [7] certificate soundness: " << soundness.cases - soundness.failures << "/"
          << soundness.cases << " Yes verdicts verified across all suites";
        if (soundness.failures) s << "; first failure: " << soundness.first_failure;
        lines.push_back({7, s.str(), pass});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
    bool all = true;
    for (const auto& l : lines) {
        std::printf("%s\n", l.text.c_str());
        all = all && l.pass;
    }
    std::printf("%s: total %.2f s\n", all ? "ALL PASS" : "SOME FAILED", total_time);
    return all ? 0 : 1;
}
