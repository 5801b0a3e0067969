// delg: command-line front end for the DEL game solvers.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "delg/certificate.hpp"
#include "delg/controller.hpp"
#include "delg/distributed.hpp"
#include "delg/error.hpp"
#include "delg/planning.hpp"
#include "delg/problem.hpp"
#include "delg/reductions.hpp"

using namespace delg;
using json = nlohmann::json;

namespace {

constexpr int exit_usage = 3;

int exit_code(Tri t)
{
    switch (t) {
    case Tri::Yes: return 0;
    case Tri::No: return 1;
    case Tri::Unknown: return 2;
    }
    return 2;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

struct Global {
    bool json = false;
};

// Prints either the JSON record or the human lines, then returns the exit code.
int finish(const Global& g, const json& record, const std::vector<std::string>& lines, Tri verdict)
{
    if (g.json)
        std::cout << record.dump(2) << '\n';
    else
        for (const auto& l : lines) std::cout << l << '\n';
    return exit_code(verdict);
}

// ── check / product / classify ──

int cmd_check(const Global& g, const std::string& file, const std::string& text)
{
    const Problem p = load_problem(file);
    const Formula f = parse_formula(text, &p.agents);
    const bool v = eval(p.model, f);
    json r{{"command", "check"}, {"formula", to_string(f)}, {"verdict", v}};
    return finish(g, r, {v ? "true" : "false"}, v ? Tri::Yes : Tri::No);
}

int cmd_product(const Global& g, const std::string& file, std::size_t steps, bool print)
{
    const Problem p = load_problem(file);
    EpistemicModel m = p.model.model;
    std::size_t point = p.model.point;
    bool point_alive = true;
    json per_step = json::array();
    std::vector<std::string> lines;
    for (std::size_t s = 1; s <= steps; ++s) {
        Product prod = product_with_origin(m, p.actions);
        std::optional<std::size_t> next;
        if (p.action_point && point_alive)
            for (std::size_t k = 0; k < prod.origin.size(); ++k)
                if (prod.origin[k] == std::make_pair(point, *p.action_point)) next = k;
        point_alive = next.has_value();
        if (next) point = *next;
        m = std::move(prod.model);
        per_step.push_back({{"step", s}, {"worlds", m.size()}});
        lines.push_back("step " + std::to_string(s) + ": " + std::to_string(m.size()) + " worlds");
        if (m.empty()) break;
    }
    json r{{"command", "product"}, {"steps", per_step}, {"worlds", m.size()}};
    if (p.action_point) r["point_survives"] = point_alive;
    if (print && !m.empty()) {
        Problem out = p;
        out.model.model = m;
        out.model.point = point_alive ? point : 0;
        out.header = {"product after " + std::to_string(steps) + " steps"};
        const std::string text = print_problem(out);
        r["model"] = text;
        lines.push_back(text);
    }
    return finish(g, r, lines, Tri::Yes);
}

int cmd_classify(const Global& g, const std::string& file)
{
    const Problem p = load_problem(file);
    const ActionModel& a = p.actions;
    json acts = json::array();
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const ActionClass c = classify(a, i);
        const bool pa = c.public_action.has_value(), pann = c.public_announcement.has_value();
        acts.push_back({{"action", a.names[i]}, {"public_action", pa}, {"public_announcement", pann}});
        lines.push_back(a.names[i] + ": " + (pann ? "public announcement" : pa ? "public action" : "private"));
    }
    const ActionClass all = classify(a);
    json r{{"command", "classify"},
           {"propositional", all.propositional},
           {"s5", all.s5},
           {"separable", to_string(all.separable)},
           {"all_public_announcements", all_public_announcements(a)},
           {"all_public_actions", all_public_actions(a)},
           {"actions", acts}};
    lines.push_back(std::string("propositional: ") + (all.propositional ? "yes" : "no"));
    lines.push_back(std::string("s5: ") + (all.s5 ? "yes" : "no"));
    lines.push_back(std::string("separable: ") + to_string(all.separable));
    lines.push_back(std::string("public announcements: ") + (all_public_announcements(a) ? "yes" : "no"));
    lines.push_back(std::string("public actions: ") + (all_public_actions(a) ? "yes" : "no"));
    return finish(g, r, lines, Tri::Yes);
}

// ── solvers ──

int cmd_plan(const Global& g, const std::string& file, std::optional<std::size_t> bound)
{
    const Problem p = load_problem(file);
    PlanOptions o;
    o.bound = bound;
    const PlanResult res = plan_exists(p.model, p.actions, p.goal, o);
    std::string plan;
    for (const auto& x : res.plan) plan += (plan.empty() ? "" : " ") + x;
    json r{{"command", "plan"},    {"verdict", to_string(res.verdict)}, {"regime", res.regime},
           {"bound", opt_json(res.bound)}, {"explored", res.explored}, {"plan", res.plan}};
    std::vector<std::string> lines{std::string("verdict: ") + to_string(res.verdict), "regime: " + res.regime};
    if (res.verdict == Tri::Yes) lines.push_back("plan: " + (plan.empty() ? std::string("(empty)") : plan));
    return finish(g, r, lines, res.verdict);
}

struct SolveFlags {
    std::string method = "auto";
    std::string deadlock = "lose";
    std::optional<std::size_t> rounds;
    bool literal = false;
    std::optional<std::size_t> horizon;
    std::size_t budget = 2000000;
    bool no_hyps = false;
    std::string out;
};

int cmd_controller(const Global& g, const std::string& file, const SolveFlags& f)
{
    const Problem p = load_problem(file);
    if (p.mode != ProblemMode::Controller) throw InputError("not a controller problem (mode " + std::string(to_string(p.mode)) + ")");
    ControllerOptions o;
    o.deadlock = parse_deadlock(f.deadlock);
    o.rounds = f.rounds;
    o.literal_round_bound = f.literal;
    if (f.horizon) o.horizon = *f.horizon;
    o.node_budget = f.budget;
    const ControllerResult res = solve_controller(p.model, p.actions, p.goal, f.method, o);
    json r{{"command", "controller"}, {"verdict", to_string(res.verdict)}, {"method", res.method},
           {"bound", opt_json(res.bound)}, {"nodes", res.nodes}, {"note", res.note}, {"strategy", nullptr}};
    std::vector<std::string> lines{std::string("verdict: ") + to_string(res.verdict), "method: " + res.method};
    if (!res.note.empty()) lines.push_back("note: " + res.note);
    if (res.strategy) {
        r["entries"] = res.strategy->entries.size();
        lines.push_back("strategy entries: " + std::to_string(res.strategy->entries.size()));
        if (!f.out.empty()) {
            write_file(f.out, write_certificate({instance_hash(p), res.method, o.deadlock, *res.strategy}));
            r["strategy"] = f.out;
            lines.push_back("strategy written to " + f.out);
        }
    }
    return finish(g, r, lines, res.verdict);
}

int cmd_distributed(const Global& g, const std::string& file, const SolveFlags& f)
{
    const Problem p = load_problem(file);
    if (p.mode != ProblemMode::Distributed) throw InputError("not a distributed problem (mode " + std::string(to_string(p.mode)) + ")");
    DistributedOptions o;
    o.deadlock = parse_deadlock(f.deadlock);
    o.rounds = f.rounds;
    o.literal_round_bound = f.literal;
    if (f.horizon) o.horizon = *f.horizon;
    o.node_budget = f.budget;
    o.check_hypotheses = !f.no_hyps;
    const DistributedResult res = solve_distributed(game_of(p), f.method, o);
    json r{{"command", "distributed"}, {"verdict", to_string(res.verdict)}, {"method", res.method},
           {"bound", opt_json(res.bound)}, {"nodes", res.nodes}, {"note", res.note}, {"strategy", nullptr},
           {"no_within_bound", res.no_within_bound}};
    std::vector<std::string> lines{std::string("verdict: ") + to_string(res.verdict), "method: " + res.method};
    if (!res.note.empty()) lines.push_back("note: " + res.note);
    if (res.strategy) {
        r["entries"] = res.strategy->size();
        lines.push_back("strategy entries: " + std::to_string(res.strategy->size()));
        if (!f.out.empty()) {
            write_file(f.out, write_certificate({instance_hash(p), res.method, o.deadlock, *res.strategy}));
            r["strategy"] = f.out;
            lines.push_back("strategy written to " + f.out);
        }
    }
    return finish(g, r, lines, res.verdict);
}

int cmd_hyps(const Global& g, const std::string& file, bool hierarchy)
{
    const Problem p = load_problem(file);
    const Game game = game_of(p);
    const HypothesesReport rep = check_hypotheses(game);
    json r{{"command", "hyps"}};
    std::vector<std::string> lines;
    auto add = [&](const char* name, const HypothesisCheck& c) {
        r[name] = {{"status", to_string(c.status)}, {"witness", c.witness}};
        lines.push_back(std::string(name) + ": " + to_string(c.status) + (c.witness.empty() ? "" : " (" + c.witness + ")"));
    };
    add("H1", rep.h1);
    add("H2", rep.h2);
    add("H3", rep.h3);
    add("turn", rep.turn);
    if (hierarchy) {
        const HierarchyResult h = is_hierarchical(game.initial.model, game.actions, game.split);
        r["hierarchical"] = h.hierarchical;
        r["order"] = h.order;
        if (h.hierarchical) {
            std::string order;
            for (const auto& x : h.order) order += (order.empty() ? "" : " ") + x;
            lines.push_back("hierarchical: yes, order " + order);
        } else if (h.incomparable) {
            r["incomparable"] = {h.incomparable->first, h.incomparable->second};
            lines.push_back("hierarchical: no, " + h.incomparable->first + " and " + h.incomparable->second +
                            " are incomparable");
        }
    }
    Tri verdict = Tri::Yes;
    for (const auto* c : {&rep.h1, &rep.h2, &rep.h3, &rep.turn}) {
        if (c->status == Tri::No) verdict = Tri::No;
        if (c->status == Tri::Unknown && verdict == Tri::Yes) verdict = Tri::Unknown;
    }
    return finish(g, r, lines, verdict);
}

int cmd_arena(const Global& g, const std::string& file, bool multi)
{
    const Problem p = load_problem(file);
    json r{{"command", "arena"}};
    std::vector<std::string> lines;
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::string>> labels;
    std::vector<std::string> owners;
    std::size_t bound;
    const std::size_t atoms = [&] {
        std::set<std::string> as;
        for (const auto& v : p.model.model.valuations) as.insert(v.begin(), v.end());
        for (const auto& post : p.actions.post)
            for (const auto& [q, f] : post) as.insert(q);
        return as.size();
    }();
    if (multi) {
        if (!p.turn) throw InputError("the multi-player arena needs a turn variable");
        const MultiArena a = build_multiplayer_arena(p.model, p.actions, *p.turn);
        names = a.names, succ = a.succ, labels = a.labels, owners = a.owner;
        bound = multiarena_size_bound(p.model.model.size(), p.actions.size(), atoms);
    } else {
        const GameArena a = build_arena(p.model, p.actions);
        names = a.names, succ = a.succ, labels = a.labels;
        for (int pl : a.player) owners.push_back(pl == 0 ? "ctr" : "env");
        bound = arena_size_bound(p.model.model.size(), p.actions.size(), atoms);
    }
    json vs = json::array();
    for (std::size_t v = 0; v < names.size(); ++v) {
        json edges = json::array();
        std::string line = names[v] + " [" + owners[v] + "]";
        for (std::size_t k = 0; k < succ[v].size(); ++k) {
            edges.push_back({{"to", names[succ[v][k]]}, {"label", labels[v][k]}});
            line += " " + labels[v][k] + "->" + names[succ[v][k]];
        }
        vs.push_back({{"name", names[v]}, {"owner", owners[v]}, {"edges", edges}});
        lines.push_back(line);
    }
    r["vertices"] = vs;
    r["size"] = names.size();
    r["size_bound"] = bound;
    lines.push_back(std::to_string(names.size()) + " vertices (bound " + std::to_string(bound) + ")");
    return finish(g, r, lines, Tri::Yes);
}

// ── reductions ──

int cmd_reduce(const Global& g, const std::string& kind, const std::string& input, const std::string& out,
               bool bits, bool literal)
{
    const std::string text = read_file(input);
    Problem p;
    std::vector<std::string> header{"generated by delg reduce " + kind + " from " + input};
    auto from = [&](const EncodedController& e) {
        if (!e.note.empty()) header.push_back(e.note);
        return problem_from_controller(e.initial, e.actions, e.goal, header);
    };
    if (kind == "qbf") {
        p = from(qbf_to_controller(normalize_qbf(parse_qbf(text))));
    } else if (kind == "g4") {
        p = from(g4_to_controller(parse_g4(text)));
    } else if (kind == "condplan") {
        p = from(condplan_to_controller(parse_condplan(text)));
    } else if (kind == "teamdfa") {
        TeamDfaOptions o;
        o.binary = bits;
        o.literal = literal;
        p = problem_from_game(teamdfa_to_distributed(parse_teamdfa(text), o), header);
    } else {
        throw InputError("unknown reduction '" + kind + "'");
    }
    const std::string printed = print_problem(p);
    if (out.empty() || out == "-")
        std::cout << printed;
    else
        write_file(out, printed);
    json r{{"command", "reduce"}, {"kind", kind}, {"worlds", p.model.model.size()}, {"actions", p.actions.size()},
           {"output", out.empty() ? "-" : out}};
    if (g.json) std::cout << r.dump(2) << '\n';
    else if (!out.empty() && out != "-")
        std::cout << "wrote " << out << " (" << p.model.model.size() << " worlds, " << p.actions.size()
                  << " actions)\n";
    return 0;
}

// ── certificates ──

Certificate load_certificate_for(const Problem& p, const std::string& path)
{
    Certificate c = read_certificate(read_file(path));
    if (c.instance != instance_hash(p))
        throw InputError("certificate was issued for instance " + hex64(c.instance) + ", not " + hex64(instance_hash(p)));
    return c;
}

int cmd_verify(const Global& g, const std::string& file, const std::string& strategy, std::size_t fuel)
{
    const Problem p = load_problem(file);
    const Certificate c = load_certificate_for(p, strategy);
    VerifyResult v;
    if (const auto* s = std::get_if<ControllerStrategy>(&c.strategy))
        v = verify_controller_strategy(p.model, p.actions, p.goal, *s, c.deadlock, fuel);
    else
        v = verify_distributed_strategy(game_of(p), std::get<DistributedStrategy>(c.strategy), c.deadlock, fuel);
    json r{{"command", "verify"}, {"verdict", to_string(v.status)}, {"message", v.message}, {"trace", v.trace}};
    std::vector<std::string> lines{std::string("verdict: ") + to_string(v.status), v.message};
    if (!v.trace.empty()) {
        std::string t;
        for (const auto& x : v.trace) t += (t.empty() ? "" : " ") + x;
        lines.push_back("trace: " + t);
    }
    return finish(g, r, lines, v.status);
}

// Human plays the adversary against a model-keyed certificate.
int cmd_play(const std::string& file, const std::string& strategy, std::size_t max_steps)
{
    const Problem p = load_problem(file);
    const Certificate c = load_certificate_for(p, strategy);
    const auto* cs = std::get_if<ControllerStrategy>(&c.strategy);
    const auto* ds = std::get_if<DistributedStrategy>(&c.strategy);
    if ((cs && cs->kind != StrategyKind::PointedModelMap) || (ds && ds->keying == StrategyKeying::HistoryClass))
        throw InputError("play supports pointed-model and information-state certificates only");
    std::optional<Game> game;
    if (ds) game = game_of(p);

    PointedModel pm = p.model;
    for (std::size_t i = 0; i < max_steps; ++i) {
        std::cout << "step " << i << ": point " << pm.model.names[pm.point] << " {" << valuation_token(pm.point_valuation())
                  << "}, " << pm.model.size() << " worlds\n";
        if (eval(pm, p.goal)) {
            std::cout << "goal reached\n";
            return 0;
        }
        std::string mover;
        bool adversary;
        if (cs) {
            adversary = i % 2 == 1;
            mover = adversary ? "env" : "ctr";
        } else {
            mover = mover_at(game->turn, pm.point_valuation());
            adversary = !game->split.is_existential(mover);
        }
        std::vector<std::size_t> moves;
        for (std::size_t x = 0; x < p.actions.size(); ++x) {
            const Owner& o = p.actions.owners[x];
            const bool mine = cs ? (o.kind == (adversary ? OwnerKind::Environment : OwnerKind::Controller))
                                 : (o.kind == OwnerKind::Agent && o.agent == mover);
            if (mine && executable(pm, p.actions, x)) moves.push_back(x);
        }
        std::size_t chosen;
        if (!adversary) {
            std::optional<std::string> act;
            if (cs) {
                const std::size_t idx = cs->index == IndexMode::Round ? i : i % 2;
                auto it = cs->entries.find(canonical_key(pm) + "#" + std::to_string(idx));
                if (it != cs->entries.end()) act = it->second;
            } else {
                std::string key = info_state_key(pm, mover);
                if (ds->keying == StrategyKeying::InfoRound) key += "#" + std::to_string(i);
                act = ds->lookup(mover, key);
            }
            if (!act) {
                std::cout << "the strategy has no move here; " << mover << " loses\n";
                return 1;
            }
            chosen = p.actions.index_of(*act);
            std::cout << mover << " plays " << *act << '\n';
        } else {
            if (moves.empty()) {
                const bool win = c.deadlock == DeadlockMode::Vacuous;
                std::cout << mover << " has no move; " << (win ? "the strategy wins\n" : "the strategy loses\n");
                return win ? 0 : 1;
            }
            std::cout << mover << " to move:";
            for (std::size_t k = 0; k < moves.size(); ++k) std::cout << ' ' << k << '=' << p.actions.names[moves[k]];
            std::cout << "\n> " << std::flush;
            std::string in;
            if (!std::getline(std::cin, in)) return 2;
            std::size_t k = moves.size();
            for (std::size_t j = 0; j < moves.size(); ++j)
                if (p.actions.names[moves[j]] == in || std::to_string(j) == in) k = j;
            if (k == moves.size()) {
                std::cout << "not a legal move\n";
                --i;
                continue;
            }
            chosen = moves[k];
        }
        pm = apply_pointed(pm, p.actions, chosen);
    }
    std::cout << "step limit reached\n";
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solver for reachability games in dynamic epistemic logic"};
    app.require_subcommand(1);
    Global g;
    app.add_flag("--json", g.json, "Emit a JSON result record");

    std::string file, formula, strategy, out, kind, input;
    std::size_t steps = 1, fuel = 10000, max_steps = 200;
    std::optional<std::size_t> bound;
    bool print = false, hierarchy = false, multi = false, bits = false, literal = false;
    SolveFlags f;

    auto* check = app.add_subcommand("check", "Evaluate a formula at the point");
    check->add_option("file", file)->required();
    check->add_option("--formula,-f", formula)->required();

    auto* product = app.add_subcommand("product", "Iterate the product update");
    product->add_option("file", file)->required();
    product->add_option("--steps,-n", steps);
    product->add_flag("--print", print, "Print the resulting model");

    auto* classify_cmd = app.add_subcommand("classify", "Classify the action model");
    classify_cmd->add_option("file", file)->required();

    auto* plan = app.add_subcommand("plan", "Decide plan existence");
    plan->add_option("file", file)->required();
    plan->add_option("--bound", bound);

    auto add_solver_flags = [&](CLI::App* c, const std::string& methods) {
        c->add_option("file", file)->required();
        c->add_option("--method", f.method, methods);
        c->add_option("--deadlock", f.deadlock, "lose|vacuous")->check(CLI::IsMember({"lose", "vacuous"}));
        c->add_option("--rounds", f.rounds, "Explicit round bound");
        c->add_flag("--literal-bound", f.literal, "Use the |W| round bound");
        c->add_option("--horizon", f.horizon, "Depth for bounded searches");
        c->add_option("--budget", f.budget, "Node budget");
        c->add_option("-o,--output", f.out, "Write the strategy certificate here");
    };
    auto* controller = app.add_subcommand("controller", "Controller synthesis");
    add_solver_flags(controller, "auto|fig2|fig3|arena|bounded");
    controller->get_option("--method")->check(CLI::IsMember({"auto", "fig2", "fig3", "arena", "bounded"}));
    auto* distributed = app.add_subcommand("distributed", "Distributed strategy synthesis");
    add_solver_flags(distributed, "auto|fig4|fig5|tree");
    distributed->get_option("--method")->check(CLI::IsMember({"auto", "fig4", "fig5", "tree"}));
    distributed->add_flag("--no-hyps", f.no_hyps, "Skip the hypotheses check");

    auto* hyps = app.add_subcommand("hyps", "Check the turn hypotheses");
    hyps->add_option("file", file)->required();
    hyps->add_flag("--hierarchy", hierarchy, "Also test for hierarchical information");

    auto* arena = app.add_subcommand("arena", "Export the game arena");
    arena->add_option("file", file)->required();
    arena->add_flag("--multi", multi, "Multi-player arena over the turn variable");

    auto* reduce = app.add_subcommand("reduce", "Encode a QBF, G4, planning or TEAM DFA instance");
    reduce->add_option("kind", kind)->required()->check(CLI::IsMember({"qbf", "g4", "condplan", "teamdfa"}));
    reduce->add_option("input", input)->required();
    reduce->add_option("-o,--output", out);
    reduce->add_flag("--bits", bits, "Binary state encoding (teamdfa)");
    reduce->add_flag("--literal", literal, "Textbook action ownership (teamdfa)");

    auto* verify = app.add_subcommand("verify", "Check a strategy certificate");
    verify->add_option("file", file)->required();
    verify->add_option("--strategy,-s", strategy)->required();
    verify->add_option("--fuel", fuel);

    auto* play = app.add_subcommand("play", "Play the adversary against a certificate");
    play->add_option("file", file)->required();
    play->add_option("--strategy,-s", strategy)->required();
    play->add_option("--max-steps", max_steps);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*check) return cmd_check(g, file, formula);
        if (*product) return cmd_product(g, file, steps, print);
        if (*classify_cmd) return cmd_classify(g, file);
        if (*plan) return cmd_plan(g, file, bound);
        if (*controller) return cmd_controller(g, file, f);
        if (*distributed) return cmd_distributed(g, file, f);
        if (*hyps) return cmd_hyps(g, file, hierarchy);
        if (*arena) return cmd_arena(g, file, multi);
        if (*reduce) return cmd_reduce(g, kind, input, out, bits, literal);
        if (*verify) return cmd_verify(g, file, strategy, fuel);
        if (*play) return cmd_play(file, strategy, max_steps);
    } catch (const ParseError& e) {
        std::cerr << "delg: " << (file.empty() ? input : file) << ":" << e.what() << '\n';
        return exit_usage;
    } catch (const HypothesisError& e) {
        std::cerr << "delg: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "delg: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
