#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace delg {

using Valuation = std::set<std::string>;

enum class FormulaKind : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Knows, Poss };

// Immutable epistemic formula. Nodes are shared; copying a Formula is cheap.
//
// And, Implies and Poss are definable from Not/Or/Knows but are kept as nodes so
// that printed output stays readable; evaluation must agree with the expansions.
class Formula {
public:
    Formula(); // true

    FormulaKind kind() const noexcept { return node_->kind; }
    // Atom name for Atom nodes, agent name for Knows/Poss nodes, empty otherwise.
    const std::string& name() const noexcept { return node_->name; }
    const Formula& child() const { return node_->children[0]; }
    const Formula& lhs() const { return node_->children[0]; }
    const Formula& rhs() const { return node_->children[1]; }

    bool is_atom() const noexcept { return kind() == FormulaKind::Atom; }
    bool is_constant() const noexcept { return kind() == FormulaKind::True || kind() == FormulaKind::False; }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    static Formula make(FormulaKind kind, std::string name, std::vector<Formula> children);

private:
    struct Node {
        FormulaKind kind = FormulaKind::True;
        std::string name;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Formula top();
Formula bottom();
Formula atom(std::string name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula knows(std::string agent, Formula f);
Formula possible(std::string agent, Formula f);

// Left-nested fold; the empty conjunction is true, the empty disjunction false.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

std::size_t modal_depth(const Formula& f);
bool is_propositional(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);
std::set<std::string> agents_of(const Formula& f);

// Rewrites And/Implies/Poss into the primitive grammar (atoms, not, or, K).
Formula desugar(const Formula& f);

// Evaluates a propositional formula under a closed-world valuation.
// Throws InputError on a Knows/Poss node.
bool eval_valuation(const Valuation& v, const Formula& f);

// Concrete syntax: `!f`, `f & g`, `f | g`, `f -> g`, `K[a] f`, `M[a] f`, `true`, `false`.
// Precedence `!`/modalities > `&` > `|` > `->`; `&`,`|` associate left, `->` right.
std::string to_string(const Formula& f);

// Throws ParseError. When `agents` is non-null, modalities over other agents are rejected.
Formula parse_formula(std::string_view text, const std::vector<std::string>* agents = nullptr);

} // namespace delg
