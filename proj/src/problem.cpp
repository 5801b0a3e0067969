#include "delg/problem.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "delg/error.hpp"
#include "formula_parser.hpp"
#include "lexer.hpp"

namespace delg {

using detail::Tok;
using detail::TokenStream;

const char* to_string(ProblemMode m)
{
    switch (m) {
    case ProblemMode::Plan: return "plan";
    case ProblemMode::Controller: return "controller";
    case ProblemMode::Distributed: return "distributed";
    }
    return "controller";
}

namespace {

struct RelationSpec {
    std::vector<std::vector<std::string>> classes;
    std::vector<std::pair<std::string, std::string>> pairs;
    int line = 0;
};

// Shared syntax of `obs a { x y }` and `rel a (x y) ...` in model and action blocks.
void parse_relation_clause(TokenStream& ts, bool obs, std::map<std::string, RelationSpec>& specs,
                           const std::set<std::string>& agents)
{
    const detail::Token agent = ts.expect_ident(obs ? "agent after 'obs'" : "agent after 'rel'");
    if (!agents.count(agent.text)) throw ParseError(agent.line, agent.col, "undeclared agent '" + agent.text + "'");
    RelationSpec& spec = specs[agent.text];
    spec.line = agent.line;
    if (obs) {
        ts.expect(Tok::LBrace, "observation class");
        std::vector<std::string> cls;
        while (!ts.accept(Tok::RBrace)) cls.push_back(ts.expect_ident("observation class").text);
        spec.classes.push_back(std::move(cls));
    } else {
        if (!ts.at(Tok::LParen)) ts.fail("expected '(' to start a pair");
        while (ts.accept(Tok::LParen)) {
            std::string from = ts.expect_ident("relation pair").text;
            std::string to = ts.expect_ident("relation pair").text;
            ts.expect(Tok::RParen, "relation pair");
            spec.pairs.emplace_back(std::move(from), std::move(to));
        }
    }
}

template <class IndexOf>
Relation build_relation(const std::string& agent, const RelationSpec& spec, std::size_t n, IndexOf index_of)
{
    if (!spec.classes.empty() && !spec.pairs.empty())
        throw ParseError(spec.line, 1, "agent '" + agent + "' uses both 'obs' and 'rel'");
    if (!spec.pairs.empty()) {
        Relation r(n);
        for (const auto& [a, b] : spec.pairs) r.add(index_of(a), index_of(b));
        return r;
    }
    std::vector<std::vector<std::size_t>> classes;
    for (const auto& cls : spec.classes) {
        std::vector<std::size_t> ids;
        for (const auto& x : cls) ids.push_back(index_of(x));
        classes.push_back(std::move(ids));
    }
    return Relation::from_partition(n, classes);
}

template <class Fn>
auto resolving(int line, Fn fn)
{
    try {
        return fn();
    } catch (const InputError& e) {
        throw ParseError(line, 1, e.what());
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : ts_(detail::tokenize(text)) {}

    Problem run()
    {
        std::set<std::string> seen;
        while (!ts_.at(Tok::End)) {
            const detail::Token kw = ts_.expect_ident("top-level declaration");
            const std::string& k = kw.text;
            if (k != "option" && k != "team" && !seen.insert(k).second)
                throw ParseError(kw.line, kw.col, "duplicate '" + k + "' declaration");
            if (k == "agents")
                parse_agents(kw);
            else if (k == "model")
                parse_model();
            else if (k == "actions")
                parse_actions();
            else if (k == "mode")
                parse_mode();
            else if (k == "turnvar")
                parse_turnvar();
            else if (k == "team")
                parse_team(kw);
            else if (k == "option")
                parse_option(kw);
            else if (k == "goal")
                p_.goal = detail::parse_formula(ts_, &p_.agents);
            else
                throw ParseError(kw.line, kw.col, "unknown declaration '" + k + "'");
        }
        if (!seen.count("model")) throw ParseError(1, 1, "missing model block");
        if (!seen.count("goal")) throw ParseError(1, 1, "missing goal");
        if (!seen.count("actions")) {
            for (const auto& a : p_.agents) p_.actions.relations[a] = Relation::identity(0);
        }
        resolve_owners();
        return std::move(p_);
    }

private:
    bool same_line_ident(int line) const { return ts_.at(Tok::Ident) && ts_.peek().line == line; }

    void parse_agents(const detail::Token& kw)
    {
        while (same_line_ident(kw.line)) {
            const detail::Token t = ts_.next();
            if (std::find(p_.agents.begin(), p_.agents.end(), t.text) != p_.agents.end())
                throw ParseError(t.line, t.col, "duplicate agent '" + t.text + "'");
            p_.agents.push_back(t.text);
        }
        agent_set_ = {p_.agents.begin(), p_.agents.end()};
    }

    void parse_model()
    {
        EpistemicModel& m = p_.model.model;
        std::map<std::string, RelationSpec> specs;
        std::optional<detail::Token> point;
        ts_.expect(Tok::LBrace, "model block");
        while (!ts_.accept(Tok::RBrace)) {
            const detail::Token kw = ts_.expect_ident("model entry");
            if (kw.text == "world") {
                const detail::Token name = ts_.expect_ident("world name");
                Valuation v;
                ts_.expect(Tok::LBrace, "world valuation");
                while (!ts_.accept(Tok::RBrace)) v.insert(ts_.expect_ident("atom").text);
                resolving(name.line, [&] { return m.add_world(name.text, std::move(v)); });
            } else if (kw.text == "obs" || kw.text == "rel") {
                parse_relation_clause(ts_, kw.text == "obs", specs, agent_set_);
            } else if (kw.text == "point") {
                point = ts_.expect_ident("point world");
            } else {
                throw ParseError(kw.line, kw.col, "unknown model entry '" + kw.text + "'");
            }
        }
        if (m.empty()) ts_.fail("the model has no worlds");
        for (const auto& a : p_.agents) {
            auto it = specs.find(a);
            m.relations[a] = it == specs.end()
                                 ? Relation::identity(m.size())
                                 : resolving(it->second.line, [&] {
                                       return build_relation(a, it->second, m.size(),
                                                             [&](const std::string& w) { return m.index_of(w); });
                                   });
        }
        if (!point) ts_.fail("the model block needs a 'point'");
        p_.model.point = resolving(point->line, [&] { return m.index_of(point->text); });
    }

    void parse_actions()
    {
        ActionModel& a = p_.actions;
        std::map<std::string, RelationSpec> specs;
        std::optional<detail::Token> point;
        ts_.expect(Tok::LBrace, "actions block");
        while (!ts_.accept(Tok::RBrace)) {
            const detail::Token kw = ts_.expect_ident("actions entry");
            if (kw.text == "action") {
                const detail::Token name = ts_.expect_ident("action name");
                std::optional<detail::Token> owner;
                if (ts_.at_ident("owner")) {
                    ts_.next();
                    owner = ts_.expect_ident("owner tag");
                }
                Formula pre;
                PostMap post;
                bool have_pre = false;
                ts_.expect(Tok::LBrace, "action body");
                while (!ts_.accept(Tok::RBrace)) {
                    const detail::Token st = ts_.expect_ident("'pre' or 'post'");
                    if (st.text == "pre") {
                        if (have_pre) throw ParseError(st.line, st.col, "duplicate precondition");
                        pre = detail::parse_formula(ts_, &p_.agents);
                        have_pre = true;
                    } else if (st.text == "post") {
                        const detail::Token p = ts_.expect_ident("assigned atom");
                        ts_.expect(Tok::Assign, "postcondition");
                        Formula f = detail::parse_formula(ts_, &p_.agents);
                        if (!is_propositional(f)) throw ParseError(p.line, p.col, "postconditions must be propositional");
                        if (!post.emplace(p.text, f).second)
                            throw ParseError(p.line, p.col, "atom '" + p.text + "' assigned twice");
                    } else {
                        throw ParseError(st.line, st.col, "expected 'pre' or 'post'");
                    }
                    ts_.expect(Tok::Semi, "action body");
                }
                resolving(name.line, [&] { return a.add_action(name.text, pre, post); });
                owner_tags_.push_back(owner);
            } else if (kw.text == "obs" || kw.text == "rel") {
                parse_relation_clause(ts_, kw.text == "obs", specs, agent_set_);
            } else if (kw.text == "point") {
                point = ts_.expect_ident("point action");
            } else {
                throw ParseError(kw.line, kw.col, "unknown actions entry '" + kw.text + "'");
            }
        }
        std::map<std::string, std::size_t> ids;
        for (std::size_t i = 0; i < a.size(); ++i) ids[a.names[i]] = i;
        for (const auto& x : p_.agents) {
            auto it = specs.find(x);
            a.relations[x] = it == specs.end()
                                 ? Relation::identity(a.size())
                                 : resolving(it->second.line, [&] {
                                       return build_relation(x, it->second, a.size(),
                                                             [&](const std::string& n) { return a.index_of(n); });
                                   });
        }
        if (point) p_.action_point = resolving(point->line, [&] { return a.index_of(point->text); });
    }

    void parse_mode()
    {
        const detail::Token t = ts_.expect_ident("mode");
        if (t.text == "plan")
            p_.mode = ProblemMode::Plan;
        else if (t.text == "controller")
            p_.mode = ProblemMode::Controller;
        else if (t.text == "distributed")
            p_.mode = ProblemMode::Distributed;
        else
            throw ParseError(t.line, t.col, "mode must be plan, controller or distributed");
    }

    void parse_turnvar()
    {
        const detail::Token name = ts_.expect_ident("turn variable name");
        ts_.expect_keyword("in");
        ts_.expect(Tok::LBrace, "turn domain");
        std::vector<std::string> domain;
        while (!ts_.accept(Tok::RBrace)) {
            const detail::Token v = ts_.expect_ident("turn value");
            if (!agent_set_.count(v.text)) throw ParseError(v.line, v.col, "turn value '" + v.text + "' is not an agent");
            domain.push_back(v.text);
        }
        p_.turn = resolving(name.line, [&] { return FiniteDomainVar(name.text, domain); });
    }

    void parse_team(const detail::Token& kw)
    {
        const detail::Token side = ts_.expect_ident("'exists' or 'forall'");
        if (side.text != "exists" && side.text != "forall")
            throw ParseError(side.line, side.col, "expected 'exists' or 'forall'");
        auto& team = side.text == "exists" ? p_.split.existential : p_.split.universal;
        while (same_line_ident(kw.line)) {
            const detail::Token t = ts_.next();
            if (!agent_set_.count(t.text)) throw ParseError(t.line, t.col, "undeclared agent '" + t.text + "'");
            team.insert(t.text);
        }
    }

    void parse_option(const detail::Token& kw)
    {
        const detail::Token key = ts_.expect_ident("option name");
        std::string value;
        while (ts_.peek().kind != Tok::End && ts_.peek().line == kw.line) {
            if (!value.empty()) value += ' ';
            value += ts_.next().text;
        }
        p_.options[key.text] = value;
    }

    void resolve_owners()
    {
        for (std::size_t i = 0; i < owner_tags_.size(); ++i) {
            const auto& tag = owner_tags_[i];
            if (!tag) {
                if (p_.mode != ProblemMode::Plan)
                    throw InputError("action '" + p_.actions.names[i] + "' needs an owner in " +
                                     to_string(p_.mode) + " mode");
                continue;
            }
            Owner o;
            if (p_.mode == ProblemMode::Distributed) {
                if (!agent_set_.count(tag->text))
                    throw ParseError(tag->line, tag->col, "owner '" + tag->text + "' is not an agent");
                o = Owner::of(tag->text);
            } else if (tag->text == "ctr") {
                o = Owner::controller();
            } else if (tag->text == "env") {
                o = Owner::environment();
            } else if (p_.mode == ProblemMode::Plan) {
                o = Owner::of(tag->text);
            } else {
                throw ParseError(tag->line, tag->col, "controller games take owners 'ctr' or 'env'");
            }
            p_.actions.owners[i] = o;
        }
        if (p_.mode == ProblemMode::Distributed && !p_.turn)
            throw InputError("distributed problems need a 'turnvar' declaration");
    }

    TokenStream ts_;
    Problem p_;
    std::set<std::string> agent_set_;
    std::vector<std::optional<detail::Token>> owner_tags_;
};

void print_relation(std::ostream& out, const std::string& indent, const std::string& agent, const Relation& r,
                    const std::vector<std::string>& names)
{
    if (r.is_identity()) return;
    if (r.is_equivalence()) {
        std::vector<bool> done(r.size(), false);
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (done[i] || r.successors(i).size() < 2) continue;
            out << indent << "obs " << agent << " {";
            for (std::size_t j : r.successors(i)) {
                done[j] = true;
                out << ' ' << names[j];
            }
            out << " }\n";
        }
        return;
    }
    out << indent << "rel " << agent;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j : r.successors(i)) out << " (" << names[i] << ' ' << names[j] << ')';
    out << '\n';
}

std::vector<std::string> collect_agents(const EpistemicModel& m, const ActionModel& a, const Formula& goal)
{
    std::set<std::string> all;
    for (const auto& [x, r] : m.relations) all.insert(x);
    for (const auto& [x, r] : a.relations) all.insert(x);
    auto add = [&](const Formula& f) {
        for (const auto& x : agents_of(f)) all.insert(x);
    };
    add(goal);
    for (const auto& f : a.pre) add(f);
    return {all.begin(), all.end()};
}

} // namespace

Problem parse_problem(std::string_view text) { return Parser(text).run(); }

Problem load_problem(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

std::string print_problem(const Problem& p)
{
    std::ostringstream out;
    for (const auto& h : p.header) out << "# " << h << '\n';
    out << "agents";
    for (const auto& a : p.agents) out << ' ' << a;
    out << "\n\nmodel {\n";
    const EpistemicModel& m = p.model.model;
    for (std::size_t w = 0; w < m.size(); ++w) {
        out << "  world " << m.names[w] << " {";
        for (const auto& atom : m.valuations[w]) out << ' ' << atom;
        out << " }\n";
    }
    for (const auto& a : p.agents) print_relation(out, "  ", a, m.relation(a), m.names);
    out << "  point " << m.names[p.model.point] << "\n}\n\nactions {\n";
    const ActionModel& A = p.actions;
    for (std::size_t i = 0; i < A.size(); ++i) {
        out << "  action " << A.names[i];
        if (A.owners[i].kind != OwnerKind::None) out << " owner " << to_string(A.owners[i]);
        out << " {\n    pre " << to_string(A.pre[i]) << ";\n";
        for (const auto& [atom, f] : A.post[i]) out << "    post " << atom << " := " << to_string(f) << ";\n";
        out << "  }\n";
    }
    for (const auto& a : p.agents) print_relation(out, "  ", a, A.relation(a), A.names);
    if (p.action_point) out << "  point " << A.names[*p.action_point] << '\n';
    out << "}\n\nmode " << to_string(p.mode) << '\n';
    if (p.turn) {
        out << "turnvar " << p.turn->name() << " in {";
        for (const auto& v : p.turn->domain()) out << ' ' << v;
        out << " }\n";
    }
    if (!p.split.existential.empty()) {
        out << "team exists";
        for (const auto& a : p.split.existential) out << ' ' << a;
        out << '\n';
    }
    if (!p.split.universal.empty()) {
        out << "team forall";
        for (const auto& a : p.split.universal) out << ' ' << a;
        out << '\n';
    }
    for (const auto& [k, v] : p.options) out << "option " << k << (v.empty() ? "" : " ") << v << '\n';
    out << "goal " << to_string(p.goal) << '\n';
    return out.str();
}

std::uint64_t instance_hash(const Problem& p)
{
    Problem bare = p;
    bare.header.clear();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : print_problem(bare)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 15];
    return s;
}

Game game_of(const Problem& p)
{
    if (!p.turn) throw InputError("the problem declares no turn variable");
    return Game{p.model, p.actions, *p.turn, p.split, p.goal};
}

Problem problem_from_controller(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                std::vector<std::string> header)
{
    Problem p;
    p.agents = collect_agents(pm.model, a, goal);
    p.model = pm;
    p.actions = a;
    p.mode = ProblemMode::Controller;
    p.goal = goal;
    p.header = std::move(header);
    return p;
}

Problem problem_from_game(const Game& g, std::vector<std::string> header)
{
    Problem p;
    p.agents = collect_agents(g.initial.model, g.actions, g.goal);
    for (const auto& x : g.turn.domain())
        if (std::find(p.agents.begin(), p.agents.end(), x) == p.agents.end()) p.agents.push_back(x);
    p.model = g.initial;
    p.actions = g.actions;
    p.mode = ProblemMode::Distributed;
    p.turn = g.turn;
    p.split = g.split;
    p.goal = g.goal;
    p.header = std::move(header);
    return p;
}

} // namespace delg
