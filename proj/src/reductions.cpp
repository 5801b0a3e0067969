#include "delg/reductions.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "delg/error.hpp"

namespace delg {

namespace {

struct Line {
    int number;
    std::string keyword;
    std::string rest; // text after the keyword, trimmed
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<Line> split_lines(std::string_view text)
{
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::string s = trim(raw);
        if (s.empty()) continue;
        const auto sp = s.find_first_of(" \t");
        if (sp == std::string::npos)
            out.push_back({n, s, {}});
        else
            out.push_back({n, s.substr(0, sp), trim(std::string_view(s).substr(sp))});
    }
    return out;
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

Formula parse_at(const Line& l, const std::string& text)
{
    try {
        return parse_formula(text);
    } catch (const ParseError& e) {
        throw ParseError(l.number, e.column(), e.message());
    }
}

std::size_t parse_count(const Line& l, const std::string& s)
{
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(l.number, 1, "expected a number, got '" + s + "'");
}

std::string pname(std::size_t i) { return "p" + std::to_string(i); }
std::string qname(std::size_t i) { return "q" + std::to_string(i); }

Formula substitute(const Formula& f, const std::map<std::string, Formula>& sub)
{
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Atom: {
        auto it = sub.find(f.name());
        return it == sub.end() ? f : it->second;
    }
    case FormulaKind::Not: return neg(substitute(f.child(), sub));
    case FormulaKind::And: return conj(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case FormulaKind::Or: return disj(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case FormulaKind::Implies: return implies(substitute(f.lhs(), sub), substitute(f.rhs(), sub));
    case FormulaKind::Knows: return knows(f.name(), substitute(f.child(), sub));
    case FormulaKind::Poss: return possible(f.name(), substitute(f.child(), sub));
    }
    return f;
}

// Least fixpoint of "goal, or the mover can force a win" over finitely many states.
template <class State, class Moves>
std::set<State> least_fixpoint(const std::vector<State>& states, const std::function<bool(const State&)>& goal,
                               const Moves& step)
{
    std::set<State> win;
    for (const auto& s : states)
        if (goal(s)) win.insert(s);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& s : states)
            if (!win.count(s) && step(s, win)) {
                win.insert(s);
                changed = true;
            }
    }
    return win;
}

} // namespace

// ── QBF ──

QbfInstance parse_qbf(std::string_view text)
{
    QbfInstance q;
    bool have_matrix = false;
    for (const auto& l : split_lines(text)) {
        if (l.keyword == "exists" || l.keyword == "forall") {
            if (have_matrix) throw ParseError(l.number, 1, "quantifier after the matrix");
            const auto vs = words(l.rest);
            if (vs.empty()) throw ParseError(l.number, 1, "expected at least one variable");
            for (const auto& v : vs) q.prefix.emplace_back(l.keyword == "exists", v);
        } else if (l.keyword == "matrix") {
            if (have_matrix) throw ParseError(l.number, 1, "duplicate matrix");
            q.matrix = parse_at(l, l.rest);
            have_matrix = true;
        } else {
            throw ParseError(l.number, 1, "unknown directive '" + l.keyword + "'");
        }
    }
    if (!have_matrix) throw ParseError(1, 1, "missing matrix line");
    if (!is_propositional(q.matrix)) throw InputError("the QBF matrix must be propositional");
    std::set<std::string> bound;
    for (const auto& [e, v] : q.prefix)
        if (!bound.insert(v).second) throw InputError("variable '" + v + "' is quantified twice");
    for (const auto& a : atoms_of(q.matrix))
        if (!bound.count(a)) throw InputError("free variable '" + a + "' in the matrix");
    return q;
}

bool is_normalized(const QbfInstance& q)
{
    if (q.prefix.empty() || q.prefix.size() % 2) return false;
    for (std::size_t i = 0; i < q.prefix.size(); ++i)
        if (q.prefix[i].first != (i % 2 == 0)) return false;
    return true;
}

QbfInstance normalize_qbf(const QbfInstance& q)
{
    std::set<std::string> used = atoms_of(q.matrix);
    for (const auto& [e, v] : q.prefix) used.insert(v);
    std::size_t fresh = 0;
    auto dummy = [&] {
        std::string name;
        do name = "_d" + std::to_string(++fresh);
        while (used.count(name));
        used.insert(name);
        return name;
    };
    QbfInstance out;
    out.matrix = q.matrix;
    for (const auto& [e, v] : q.prefix) {
        const bool expect_exists = out.prefix.size() % 2 == 0;
        if (e != expect_exists) out.prefix.emplace_back(expect_exists, dummy());
        out.prefix.emplace_back(e, v);
    }
    if (out.prefix.empty()) out.prefix.emplace_back(true, dummy());
    if (out.prefix.size() % 2) out.prefix.emplace_back(false, dummy());
    return out;
}

bool qbf_brute_force(const QbfInstance& q)
{
    Valuation v;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == q.prefix.size()) return eval_valuation(v, q.matrix);
        const auto& [exists, name] = q.prefix[i];
        v.erase(name);
        const bool f = rec(i + 1);
        if (exists && f) return true;
        if (!exists && !f) return false;
        v.insert(name);
        const bool t = rec(i + 1);
        v.erase(name);
        return t;
    };
    return rec(0);
}

EncodedController qbf_to_controller(const QbfInstance& q)
{
    if (!is_normalized(q)) throw InputError("QBF prefix must alternate exists/forall from the start with even length");
    const std::size_t n = q.prefix.size(); // 2k variables
    EncodedController out;
    EpistemicModel& m = out.initial.model;
    m.add_world("w0", {});
    for (std::size_t i = 1; i <= n; ++i) {
        m.add_world("w" + std::to_string(i), {pname(i)});
        m.add_world("u" + std::to_string(i), {qname(i)});
    }
    m.relations["a"] = Relation::universal(m.size());
    out.initial.point = 0;

    // Stage i is open while every q_j with j >= i is still possible and the earlier ones are gone.
    auto stage = [&](std::size_t i) {
        std::vector<Formula> parts;
        for (std::size_t j = 1; j < i; ++j) parts.push_back(knows("a", neg(atom(qname(j)))));
        for (std::size_t j = i; j <= n; ++j) parts.push_back(possible("a", atom(qname(j))));
        return parts;
    };
    for (std::size_t i = 1; i <= n; ++i) {
        const Owner owner = i % 2 ? Owner::controller() : Owner::environment();
        auto set_true = stage(i);
        set_true.push_back(neg(atom(qname(i))));
        auto set_false = stage(i);
        set_false.push_back(neg(atom(pname(i))));
        set_false.push_back(neg(atom(qname(i))));
        out.actions.add_action("set_" + pname(i), conj_all(set_true), {}, owner);
        out.actions.add_action("unset_" + pname(i), conj_all(set_false), {}, owner);
    }

    std::map<std::string, Formula> sub;
    for (std::size_t i = 1; i <= n; ++i) sub.emplace(q.prefix[i - 1].second, possible("a", atom(pname(i))));
    std::vector<Formula> goal;
    for (std::size_t j = 1; j <= n; ++j) goal.push_back(knows("a", neg(atom(qname(j)))));
    goal.push_back(substitute(q.matrix, sub));
    out.goal = conj_all(goal);
    std::string vars;
    for (std::size_t i = 1; i <= n; ++i) vars += " " + pname(i) + "=" + q.prefix[i - 1].second;
    out.note = "encoded QBF;" + vars;
    return out;
}

// ── G4 ──

G4Instance parse_g4(std::string_view text)
{
    G4Instance g;
    bool have_k = false;
    for (const auto& l : split_lines(text)) {
        if (l.keyword == "k") {
            g.k = parse_count(l, l.rest);
            have_k = true;
        } else if (l.keyword == "init") {
            for (const auto& a : words(l.rest)) g.initial.insert(a);
        } else if (l.keyword == "term") {
            std::vector<std::pair<std::string, bool>> term;
            for (const auto& w : words(l.rest)) {
                const bool positive = w[0] != '!';
                const std::string name = positive ? w : w.substr(1);
                if (name.empty()) throw ParseError(l.number, 1, "empty literal");
                term.emplace_back(name, positive);
            }
            g.terms.push_back(std::move(term));
        } else {
            throw ParseError(l.number, 1, "unknown directive '" + l.keyword + "'");
        }
    }
    if (!have_k) throw ParseError(1, 1, "missing 'k' line");
    validate_g4(g);
    return g;
}

void validate_g4(const G4Instance& g)
{
    std::set<std::string> allowed;
    for (std::size_t i = 1; i <= g.k; ++i) {
        allowed.insert(pname(i));
        allowed.insert(qname(i));
    }
    for (const auto& term : g.terms) {
        if (term.size() > 13) throw InputError("G4 terms have at most 13 literals");
        for (const auto& [a, pos] : term)
            if (!allowed.count(a)) throw InputError("G4 literal over undeclared atom '" + a + "'");
    }
    for (const auto& a : g.initial)
        if (!allowed.count(a)) throw InputError("G4 initial valuation mentions undeclared atom '" + a + "'");
}

Formula g4_formula(const G4Instance& g)
{
    std::vector<Formula> terms;
    for (const auto& term : g.terms) {
        std::vector<Formula> lits;
        for (const auto& [a, pos] : term) lits.push_back(pos ? atom(a) : neg(atom(a)));
        terms.push_back(conj_all(lits));
    }
    return disj_all(terms);
}

EncodedController g4_to_controller(const G4Instance& g)
{
    validate_g4(g);
    EncodedController out;
    out.initial.model.add_world("s", g.initial);
    for (std::size_t i = 1; i <= g.k; ++i)
        out.actions.add_action("flip_" + pname(i), top(), {{pname(i), neg(atom(pname(i)))}}, Owner::controller());
    for (std::size_t i = 1; i <= g.k; ++i)
        out.actions.add_action("flip_" + qname(i), top(), {{qname(i), neg(atom(qname(i)))}}, Owner::environment());
    out.goal = g4_formula(g);
    out.note = "G4 encoding: the controller wins as soon as the formula holds, whoever moved last";
    return out;
}

bool g4_brute_force(const G4Instance& g)
{
    validate_g4(g);
    const Formula goal = g4_formula(g);
    std::vector<std::string> atoms;
    for (std::size_t i = 1; i <= g.k; ++i) atoms.push_back(pname(i));
    for (std::size_t i = 1; i <= g.k; ++i) atoms.push_back(qname(i));
    const std::size_t n = atoms.size();
    using State = std::pair<std::size_t, int>; // (bitmask, mover: 0 controller, 1 environment)
    auto val = [&](std::size_t mask) {
        Valuation v;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) v.insert(atoms[i]);
        return v;
    };
    std::vector<State> states;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask)
        for (int who = 0; who < 2; ++who) states.emplace_back(mask, who);
    auto step = [&](const State& s, const std::set<State>& win) {
        const auto [mask, who] = s;
        const std::size_t lo = who == 0 ? 0 : g.k;
        if (g.k == 0) return false; // the controller is stuck first and loses
        bool all = true, any = false;
        for (std::size_t i = lo; i < lo + g.k; ++i) {
            const bool w = win.count({mask ^ (std::size_t{1} << i), 1 - who}) != 0;
            any = any || w;
            all = all && w;
        }
        return who == 0 ? any : all;
    };
    const auto win = least_fixpoint<State>(states, [&](const State& s) { return eval_valuation(val(s.first), goal); },
                                           step);
    std::size_t init = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (g.initial.count(atoms[i])) init |= std::size_t{1} << i;
    return win.count({init, 0}) != 0;
}

// ── conditional planning ──

CondPlanInstance parse_condplan(std::string_view text)
{
    CondPlanInstance c;
    bool have_goal = false;
    std::map<std::string, std::size_t> index;
    for (const auto& l : split_lines(text)) {
        if (l.keyword == "atoms") {
            for (const auto& a : words(l.rest)) c.atoms.insert(a);
        } else if (l.keyword == "init") {
            for (const auto& a : words(l.rest)) c.initial.insert(a);
        } else if (l.keyword == "action") {
            const auto sp = l.rest.find_first_of(" \t");
            const std::string name = l.rest.substr(0, sp);
            const std::string tail = sp == std::string::npos ? std::string() : trim(l.rest.substr(sp));
            if (name.empty()) throw ParseError(l.number, 1, "expected an action name");
            if (index.count(name)) throw ParseError(l.number, 1, "duplicate action '" + name + "'");
            Formula pre = top();
            if (!tail.empty()) {
                if (tail.rfind("pre", 0) != 0) throw ParseError(l.number, 1, "expected 'pre <formula>'");
                pre = parse_at(l, tail.substr(3));
            }
            index.emplace(name, c.actions.size());
            c.actions.push_back({name, pre, {}});
        } else if (l.keyword == "outcome") {
            const auto sp = l.rest.find_first_of(" \t");
            const std::string name = l.rest.substr(0, sp);
            auto it = index.find(name);
            if (it == index.end()) throw ParseError(l.number, 1, "outcome for unknown action '" + name + "'");
            PostMap post;
            const std::string tail = sp == std::string::npos ? std::string() : l.rest.substr(sp);
            std::istringstream parts(tail);
            for (std::string part; std::getline(parts, part, ',');) {
                part = trim(part);
                if (part.empty()) continue;
                const auto eq = part.find(":=");
                if (eq == std::string::npos) throw ParseError(l.number, 1, "expected 'p := formula'");
                const std::string lhs = trim(part.substr(0, eq));
                if (lhs.empty()) throw ParseError(l.number, 1, "missing assigned atom");
                if (!post.emplace(lhs, parse_at(l, part.substr(eq + 2))).second)
                    throw ParseError(l.number, 1, "atom '" + lhs + "' assigned twice");
            }
            c.actions[it->second].outcomes.push_back(std::move(post));
        } else if (l.keyword == "goal") {
            c.goal = parse_at(l, l.rest);
            have_goal = true;
        } else {
            throw ParseError(l.number, 1, "unknown directive '" + l.keyword + "'");
        }
    }
    if (!have_goal) throw ParseError(1, 1, "missing goal line");
    validate_condplan(c);
    return c;
}

void validate_condplan(const CondPlanInstance& c)
{
    auto check_atoms = [&](const std::set<std::string>& as, const std::string& where) {
        for (const auto& a : as)
            if (!c.atoms.count(a)) throw InputError("undeclared atom '" + a + "' in " + where);
    };
    check_atoms(c.initial, "the initial valuation");
    if (!is_propositional(c.goal)) throw InputError("the planning goal must be propositional");
    check_atoms(atoms_of(c.goal), "the goal");
    for (const auto& a : c.actions) {
        if (a.outcomes.empty()) throw InputError("action '" + a.name + "' has no outcome");
        if (!is_propositional(a.pre)) throw InputError("precondition of '" + a.name + "' must be propositional");
        check_atoms(atoms_of(a.pre), "action " + a.name);
        for (const auto& post : a.outcomes)
            for (const auto& [p, f] : post) {
                if (!is_propositional(f)) throw InputError("outcome of '" + a.name + "' must be propositional");
                check_atoms({p}, "action " + a.name);
                check_atoms(atoms_of(f), "action " + a.name);
            }
    }
}

EncodedController condplan_to_controller(const CondPlanInstance& c)
{
    validate_condplan(c);
    std::vector<std::string> domain{"none"};
    for (const auto& a : c.actions) domain.push_back(a.name);
    const FiniteDomainVar chosen("act", domain);
    for (const auto& a : chosen.atoms())
        if (c.atoms.count(a)) throw InputError("atom '" + a + "' clashes with the action record");

    EncodedController out;
    Valuation init = c.initial;
    for (const auto& a : chosen.encode("none")) init.insert(a);
    out.initial.model.add_world("s", init);
    for (const auto& a : c.actions)
        out.actions.add_action("choose_" + a.name, a.pre, chosen.assign(a.name), Owner::controller());
    for (const auto& a : c.actions)
        for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
            PostMap post = a.outcomes[i];
            for (auto& [p, f] : chosen.assign("none")) post[p] = f;
            out.actions.add_action(a.name + "_out" + std::to_string(i + 1), chosen.test(a.name), post,
                                   Owner::environment());
        }
    out.goal = c.goal;
    return out;
}

bool condplan_brute_force(const CondPlanInstance& c)
{
    validate_condplan(c);
    const std::vector<std::string> atoms(c.atoms.begin(), c.atoms.end());
    std::vector<Valuation> states;
    for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
        Valuation v;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (mask >> i & 1) v.insert(atoms[i]);
        states.push_back(std::move(v));
    }
    auto apply = [](const Valuation& v, const PostMap& post) {
        Valuation out = v;
        for (const auto& [p, f] : post) {
            if (eval_valuation(v, f))
                out.insert(p);
            else
                out.erase(p);
        }
        return out;
    };
    auto step = [&](const Valuation& v, const std::set<Valuation>& win) {
        for (const auto& a : c.actions) {
            if (!eval_valuation(v, a.pre)) continue;
            bool all = true;
            for (const auto& post : a.outcomes) all = all && win.count(apply(v, post));
            if (all) return true;
        }
        return false;
    };
    const auto win = least_fixpoint<Valuation>(states, [&](const Valuation& v) { return eval_valuation(v, c.goal); },
                                               step);
    return win.count(c.initial) != 0;
}

// ── TEAM DFA ──

TeamDfaInstance parse_teamdfa(std::string_view text)
{
    TeamDfaInstance t;
    for (const auto& l : split_lines(text)) {
        const auto ws = words(l.rest);
        if (l.keyword == "states") {
            for (const auto& s : ws) t.states.push_back(s);
        } else if (l.keyword == "initial") {
            if (ws.size() != 1) throw ParseError(l.number, 1, "expected one initial state");
            t.initial = ws[0];
        } else if (l.keyword == "delta") {
            if (ws.size() != 4 || ws[2] != "->" || (ws[1] != "0" && ws[1] != "1"))
                throw ParseError(l.number, 1, "expected 'delta <state> 0|1 -> <state>'");
            if (!t.delta.emplace(std::make_pair(ws[0], ws[1] == "1" ? 1 : 0), ws[3]).second)
                throw ParseError(l.number, 1, "duplicate transition");
        } else if (l.keyword == "Fexists") {
            t.f_exists.insert(ws.begin(), ws.end());
        } else if (l.keyword == "Fforall") {
            t.f_forall.insert(ws.begin(), ws.end());
        } else {
            throw ParseError(l.number, 1, "unknown directive '" + l.keyword + "'");
        }
    }
    validate_teamdfa(t);
    return t;
}

void validate_teamdfa(const TeamDfaInstance& t)
{
    const std::set<std::string> qs(t.states.begin(), t.states.end());
    if (qs.empty()) throw InputError("the automaton has no states");
    if (qs.size() != t.states.size()) throw InputError("duplicate automaton state");
    if (!qs.count(t.initial)) throw InputError("initial state '" + t.initial + "' is not declared");
    for (const auto& s : t.states)
        for (int b = 0; b < 2; ++b) {
            auto it = t.delta.find({s, b});
            if (it == t.delta.end())
                throw InputError("missing transition from '" + s + "' on " + std::to_string(b));
            if (!qs.count(it->second)) throw InputError("transition to undeclared state '" + it->second + "'");
        }
    for (const auto& [k, v] : t.delta)
        if (!qs.count(k.first)) throw InputError("transition from undeclared state '" + k.first + "'");
    for (const auto* f : {&t.f_exists, &t.f_forall})
        for (const auto& s : *f)
            if (!qs.count(s)) throw InputError("accepting set mentions undeclared state '" + s + "'");
}

Game teamdfa_to_distributed(const TeamDfaInstance& t, const TeamDfaOptions& opts)
{
    validate_teamdfa(t);
    const FiniteDomainVar turn("turn", {"a", "b", "forall"});
    const FiniteDomainVar q("q", t.states, opts.binary);
    const FiniteDomainVar stp("stp", {"1", "2", "3", "4", "5", "6"});

    auto merge = [](std::initializer_list<PostMap> parts) {
        PostMap out;
        for (const auto& p : parts)
            for (const auto& [k, v] : p) out[k] = v;
        return out;
    };
    auto run = [&](const std::string& s, const std::vector<int>& bits) {
        std::string r = s;
        for (int b : bits) r = t.delta.at({r, b});
        return r;
    };
    auto update_q = [&](const std::vector<int>& bits) {
        std::vector<std::pair<Formula, std::string>> cases;
        for (const auto& s : t.states) cases.emplace_back(q.test(s), run(s, bits));
        return q.assign_cases(cases);
    };
    auto in_set = [&](const std::set<std::string>& f) {
        std::vector<Formula> ds;
        for (const auto& s : t.states)
            if (f.count(s)) ds.push_back(q.test(s));
        return disj_all(ds);
    };
    auto at = [&](const std::string& who, const std::string& step) {
        return conj(turn.test(who), stp.test(step));
    };
    const std::string reveal3_owner = opts.literal ? "a" : "forall";
    const std::string reveal5_owner = opts.literal ? "b" : "forall";

    Game g{PointedModel{}, ActionModel{}, turn, TeamSplit{{"a", "b"}, {"forall"}}, Formula{}};
    Valuation init = turn.encode("forall");
    for (const auto& a : q.encode(t.initial)) init.insert(a);
    for (const auto& a : stp.encode("1")) init.insert(a);
    g.initial.model.add_world("s", init);
    for (const auto& agent : {"a", "b", "forall"}) g.initial.model.relations[agent] = Relation::identity(1);

    ActionModel& A = g.actions;
    const Formula in_forall = in_set(t.f_forall);
    A.add_action("check_lost", conj(at("forall", "1"), in_forall),
                 merge({{{"lost", top()}}, stp.assign("2")}), Owner::of("forall"));
    A.add_action("check_pass", conj(at("forall", "1"), neg(in_forall)), stp.assign("2"), Owner::of("forall"));
    const std::string after_input = opts.literal ? "a" : "forall";
    for (int beta = 0; beta < 2; ++beta)
        for (int beta2 = 0; beta2 < 2; ++beta2) {
            const std::string name = "input_" + std::to_string(beta) + std::to_string(beta2);
            A.add_action(name, at("forall", "2"),
                         merge({{{"beta", beta ? top() : bottom()}, {"beta2", beta2 ? top() : bottom()}},
                                update_q({beta, beta2}), turn.assign(after_input), stp.assign("3")}),
                         Owner::of("forall"));
        }
    A.add_action("learn_beta", conj(at(reveal3_owner, "3"), atom("beta")),
                 merge({stp.assign("4"), turn.assign("a")}), Owner::of(reveal3_owner));
    A.add_action("learn_not_beta", conj(at(reveal3_owner, "3"), neg(atom("beta"))),
                 merge({stp.assign("4"), turn.assign("a")}), Owner::of(reveal3_owner));
    const std::string after_a = opts.literal ? "b" : "forall";
    for (int m = 0; m < 2; ++m)
        A.add_action("a_input_" + std::to_string(m), at("a", "4"),
                     merge({{{"m", m ? top() : bottom()}}, stp.assign("5"), update_q({m}), turn.assign(after_a)}),
                     Owner::of("a"));
    A.add_action("learn_beta2", conj(at(reveal5_owner, "5"), atom("beta2")),
                 merge({stp.assign("6"), turn.assign("b")}), Owner::of(reveal5_owner));
    A.add_action("learn_not_beta2", conj(at(reveal5_owner, "5"), neg(atom("beta2"))),
                 merge({stp.assign("6"), turn.assign("b")}), Owner::of(reveal5_owner));
    for (int m = 0; m < 2; ++m)
        A.add_action("b_input_" + std::to_string(m), at("b", "6"),
                     merge({{{"m2", m ? top() : bottom()}}, stp.assign("1"), update_q({m}), turn.assign("forall")}),
                     Owner::of("b"));

    // Indices: 0-1 step 1, 2-5 step 2, 6-7 step 3, 8-9 step 4, 10-11 step 5, 12-13 step 6.
    const std::size_t n = A.size();
    const std::vector<std::vector<std::size_t>> for_a{{0, 1, 2, 3, 4, 5}, {10, 11}, {12, 13}};
    const std::vector<std::vector<std::size_t>> for_b{{0, 1, 2, 3, 4, 5}, {6, 7}, {8, 9}};
    A.relations["a"] = Relation::from_partition(n, for_a);
    A.relations["b"] = Relation::from_partition(n, for_b);
    A.relations["forall"] = Relation::identity(n);

    g.goal = conj_all({neg(atom("lost")), stp.test("1"), in_set(t.f_exists)});
    return g;
}

const char* to_string(BoundedVerdict v)
{
    switch (v) {
    case BoundedVerdict::Yes: return "yes";
    case BoundedVerdict::NoWithinBound: return "no-within-bound";
    case BoundedVerdict::Unknown: return "unknown";
    }
    return "unknown";
}

BoundedVerdict teamdfa_bounded(const TeamDfaInstance& t, std::size_t rounds, const TeamDfaOptions& opts,
                               std::size_t node_budget)
{
    DistributedOptions d;
    d.horizon = 6 * rounds;
    d.node_budget = node_budget;
    d.check_hypotheses = false;
    const DistributedResult r = strategy_tree_search(teamdfa_to_distributed(t, opts), d);
    if (r.verdict == Tri::Yes) return BoundedVerdict::Yes;
    if (r.verdict == Tri::No || r.no_within_bound) return BoundedVerdict::NoWithinBound;
    return BoundedVerdict::Unknown;
}

Game controller_as_distributed(const PointedModel& pm, const ActionModel& a, const Formula& goal)
{
    const FiniteDomainVar turn("turn", {"ctr", "env"});
    for (const auto& p : turn.atoms()) {
        for (const auto& v : pm.model.valuations)
            if (v.count(p)) throw InputError("atom '" + p + "' is reserved for the turn variable");
        for (const auto& post : a.post)
            if (post.count(p)) throw InputError("atom '" + p + "' is reserved for the turn variable");
    }
    Game g{pm, ActionModel{}, turn, TeamSplit{{"ctr"}, {"env"}}, goal};
    for (auto& v : g.initial.model.valuations)
        for (const auto& p : turn.encode("ctr")) v.insert(p);
    g.initial.model.relations.erase("ctr");
    g.initial.model.relations.erase("env");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ctr = a.owners[i].kind == OwnerKind::Controller;
        if (!ctr && a.owners[i].kind != OwnerKind::Environment)
            throw InputError("action '" + a.names[i] + "' must be owned by ctr or env");
        PostMap post = a.post[i];
        for (const auto& [p, f] : turn.assign(ctr ? "env" : "ctr")) post[p] = f;
        g.actions.add_action(a.names[i], conj(a.pre[i], turn.test(ctr ? "ctr" : "env")), post,
                             Owner::of(ctr ? "ctr" : "env"));
    }
    g.actions.relations = a.relations;
    g.actions.relations.erase("ctr");
    g.actions.relations.erase("env");
    return g;
}

} // namespace delg
