#include "delg/formula.hpp"

#include <algorithm>

#include "delg/error.hpp"
#include "formula_parser.hpp"

namespace delg {

Formula::Formula() : node_(std::make_shared<const Node>()) {}

Formula Formula::make(FormulaKind kind, std::string name, std::vector<Formula> children)
{
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->name = std::move(name);
    node->children = std::move(children);
    return Formula(std::move(node));
}

bool operator==(const Formula& a, const Formula& b)
{
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name()) return false;
    const auto& ca = a.node_->children;
    const auto& cb = b.node_->children;
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!(ca[i] == cb[i])) return false;
    }
    return true;
}

Formula top() { return Formula::make(FormulaKind::True, {}, {}); }
Formula bottom() { return Formula::make(FormulaKind::False, {}, {}); }
Formula atom(std::string name) { return Formula::make(FormulaKind::Atom, std::move(name), {}); }
Formula neg(Formula f) { return Formula::make(FormulaKind::Not, {}, {std::move(f)}); }
Formula conj(Formula a, Formula b) { return Formula::make(FormulaKind::And, {}, {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return Formula::make(FormulaKind::Or, {}, {std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return Formula::make(FormulaKind::Implies, {}, {std::move(a), std::move(b)}); }
Formula knows(std::string agent, Formula f) { return Formula::make(FormulaKind::Knows, std::move(agent), {std::move(f)}); }
Formula possible(std::string agent, Formula f) { return Formula::make(FormulaKind::Poss, std::move(agent), {std::move(f)}); }

Formula conj_all(const std::vector<Formula>& fs)
{
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula disj_all(const std::vector<Formula>& fs)
{
    if (fs.empty()) return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

std::size_t modal_depth(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
        return 0;
    case FormulaKind::Not:
        return modal_depth(f.child());
    case FormulaKind::Knows:
    case FormulaKind::Poss:
        return 1 + modal_depth(f.child());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
        return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    }
    return 0;
}

bool is_propositional(const Formula& f) { return modal_depth(f) == 0; }

static void collect(const Formula& f, std::set<std::string>& atoms, std::set<std::string>& agents)
{
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return;
    case FormulaKind::Atom:
        atoms.insert(f.name());
        return;
    case FormulaKind::Not:
        collect(f.child(), atoms, agents);
        return;
    case FormulaKind::Knows:
    case FormulaKind::Poss:
        agents.insert(f.name());
        collect(f.child(), atoms, agents);
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
        collect(f.lhs(), atoms, agents);
        collect(f.rhs(), atoms, agents);
        return;
    }
}

std::set<std::string> atoms_of(const Formula& f)
{
    std::set<std::string> atoms, agents;
    collect(f, atoms, agents);
    return atoms;
}

std::set<std::string> agents_of(const Formula& f)
{
    std::set<std::string> atoms, agents;
    collect(f, atoms, agents);
    return agents;
}

Formula desugar(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
        return f;
    case FormulaKind::Not:
        return neg(desugar(f.child()));
    case FormulaKind::Or:
        return disj(desugar(f.lhs()), desugar(f.rhs()));
    case FormulaKind::And:
        return neg(disj(neg(desugar(f.lhs())), neg(desugar(f.rhs()))));
    case FormulaKind::Implies:
        return disj(neg(desugar(f.lhs())), desugar(f.rhs()));
    case FormulaKind::Knows:
        return knows(f.name(), desugar(f.child()));
    case FormulaKind::Poss:
        return neg(knows(f.name(), neg(desugar(f.child()))));
    }
    return f;
}

bool eval_valuation(const Valuation& v, const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return v.count(f.name()) != 0;
    case FormulaKind::Not: return !eval_valuation(v, f.child());
    case FormulaKind::And: return eval_valuation(v, f.lhs()) && eval_valuation(v, f.rhs());
    case FormulaKind::Or: return eval_valuation(v, f.lhs()) || eval_valuation(v, f.rhs());
    case FormulaKind::Implies: return !eval_valuation(v, f.lhs()) || eval_valuation(v, f.rhs());
    case FormulaKind::Knows:
    case FormulaKind::Poss:
        throw InputError("modal formula evaluated on a bare valuation: " + to_string(f));
    }
    return false;
}

// ── printing ───────────────────────────────────────────────────────────────

namespace {

int precedence(FormulaKind k)
{
    switch (k) {
    case FormulaKind::Implies: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Not:
    case FormulaKind::Knows:
    case FormulaKind::Poss: return 4;
    default: return 5;
    }
}

void print(const Formula& f, std::string& out);

void print_child(const Formula& c, bool parens, std::string& out)
{
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
}

void print(const Formula& f, std::string& out)
{
    const int p = precedence(f.kind());
    switch (f.kind()) {
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Atom: out += f.name(); return;
    case FormulaKind::Not:
        out += '!';
        print_child(f.child(), precedence(f.child().kind()) < p, out);
        return;
    case FormulaKind::Knows:
    case FormulaKind::Poss:
        out += f.kind() == FormulaKind::Knows ? "K[" : "M[";
        out += f.name();
        out += "] ";
        print_child(f.child(), precedence(f.child().kind()) < p, out);
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
        const bool right_assoc = f.kind() == FormulaKind::Implies;
        const int pl = precedence(f.lhs().kind());
        const int pr = precedence(f.rhs().kind());
        print_child(f.lhs(), pl < p || (right_assoc && pl == p), out);
        out += f.kind() == FormulaKind::And ? " & " : f.kind() == FormulaKind::Or ? " | " : " -> ";
        print_child(f.rhs(), pr < p || (!right_assoc && pr == p), out);
        return;
    }
    }
}

} // namespace

std::string to_string(const Formula& f)
{
    std::string out;
    print(f, out);
    return out;
}

// ── parsing ────────────────────────────────────────────────────────────────

namespace detail {

namespace {

struct FormulaParser {
    TokenStream& ts;
    const std::vector<std::string>* agents;

    bool starts_modality() const
    {
        return (ts.at_ident("K") || ts.at_ident("M")) && ts.peek(1).kind == Tok::LBracket;
    }

    Formula parse_implies()
    {
        Formula lhs = parse_or();
        if (ts.accept(Tok::Arrow)) return implies(lhs, parse_implies());
        return lhs;
    }

    Formula parse_or()
    {
        Formula acc = parse_and();
        while (ts.accept(Tok::Bar)) acc = disj(acc, parse_and());
        return acc;
    }

    Formula parse_and()
    {
        Formula acc = parse_unary();
        while (ts.accept(Tok::Amp)) acc = conj(acc, parse_unary());
        return acc;
    }

    Formula parse_unary()
    {
        if (ts.accept(Tok::Bang)) return neg(parse_unary());
        if (starts_modality()) {
            const bool is_k = ts.next().text == "K";
            ts.expect(Tok::LBracket, "after modality");
            const Token& at = ts.peek();
            Token agent = ts.expect_ident("as modality agent");
            if (agents && std::find(agents->begin(), agents->end(), agent.text) == agents->end())
                throw ParseError(at.line, at.col, "unknown agent '" + agent.text + "'");
            ts.expect(Tok::RBracket, "closing modality");
            Formula body = parse_unary();
            return is_k ? knows(agent.text, body) : possible(agent.text, body);
        }
        return parse_primary();
    }

    Formula parse_primary()
    {
        if (ts.accept(Tok::LParen)) {
            Formula f = parse_implies();
            ts.expect(Tok::RParen, "closing parenthesis");
            return f;
        }
        if (ts.at(Tok::Ident)) {
            Token t = ts.next();
            if (t.text == "true") return top();
            if (t.text == "false") return bottom();
            return atom(t.text);
        }
        const Token& t = ts.peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        ts.fail("expected a formula, got " + got);
    }
};

} // namespace

Formula parse_formula(TokenStream& ts, const std::vector<std::string>* agents)
{
    FormulaParser p{ts, agents};
    return p.parse_implies();
}

} // namespace detail

Formula parse_formula(std::string_view text, const std::vector<std::string>* agents)
{
    detail::TokenStream ts(detail::tokenize(text));
    Formula f = detail::parse_formula(ts, agents);
    if (!ts.at(detail::Tok::End)) ts.fail("unexpected '" + ts.peek().text + "' after formula");
    return f;
}

} // namespace delg
