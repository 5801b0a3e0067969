#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delg/formula.hpp"
#include "delg/model.hpp"

namespace delg {

enum class Tri { No, Yes, Unknown };
const char* to_string(Tri t);

enum class OwnerKind { None, Controller, Environment, Agent };

struct Owner {
    OwnerKind kind = OwnerKind::None;
    std::string agent; // only for OwnerKind::Agent

    static Owner controller() { return {OwnerKind::Controller, {}}; }
    static Owner environment() { return {OwnerKind::Environment, {}}; }
    static Owner of(std::string agent) { return {OwnerKind::Agent, std::move(agent)}; }

    friend bool operator==(const Owner& a, const Owner& b) { return a.kind == b.kind && a.agent == b.agent; }
};

// "ctr", "env", the agent name, or "-" for unowned actions.
std::string to_string(const Owner& o);

using PostMap = std::map<std::string, Formula>;

// Absent post entries are identities; absent agent relations are identities.
struct ActionModel {
    std::vector<std::string> names;
    std::vector<Formula> pre;
    std::vector<PostMap> post;
    std::vector<Owner> owners;
    std::map<std::string, Relation> relations;

    std::size_t size() const noexcept { return names.size(); }
    std::size_t add_action(std::string name, Formula precondition, PostMap postconditions = {}, Owner owner = {});
    std::size_t index_of(const std::string& name) const; // throws InputError
    Relation relation(const std::string& agent) const;
    std::vector<std::size_t> owned_by(const Owner& o) const;
    // Throws InputError when some postcondition is modal.
    void validate() const;
};

struct PointedActionModel {
    ActionModel model;
    std::size_t point = 0;
};

bool executable(const PointedModel& pm, const ActionModel& a, std::size_t action);

Valuation post_valuation(const Valuation& v, const ActionModel& a, std::size_t action);
Valuation post_valuation(const EpistemicModel& m, std::size_t world, const ActionModel& a, std::size_t action);

struct Product {
    EpistemicModel model;                                   // may be empty
    std::vector<std::pair<std::size_t, std::size_t>> origin; // (world, action) per product world
};

// Product worlds are named "<world>.<action>".
Product product_with_origin(const EpistemicModel& m, const ActionModel& a);
EpistemicModel product(const EpistemicModel& m, const ActionModel& a);

struct ApplyOptions {
    bool restrict = true;
    bool contract = true;
};

// Throws InputError if the action is not executable at the point.
PointedModel apply_pointed(const PointedModel& pm, const ActionModel& a, std::size_t action,
                           const ApplyOptions& opts = {});

struct ActionClass {
    bool propositional = false;
    bool s5 = false;
    std::optional<std::size_t> public_action;
    std::optional<std::size_t> public_announcement;
    Tri separable = Tri::Unknown;
};

struct ClassifyOptions {
    std::size_t sat_world_bound = 2;      // model enumeration bound for modal preconditions
    std::size_t sat_model_budget = 200000; // models tried per precondition pair
};

ActionClass classify(const ActionModel& a, std::optional<std::size_t> point = std::nullopt,
                     const ClassifyOptions& opts = {});

// Post map with `p := p` entries removed.
PostMap normalized_post(const PostMap& post);
bool all_relations_identity(const ActionModel& a);
// Every action, taken as the point, is a public announcement.
bool all_public_announcements(const ActionModel& a);
bool all_public_actions(const ActionModel& a);
bool all_propositional(const ActionModel& a);

// Satisfiability of a conjunction of formulas: exact for propositional input, otherwise
// Yes when a model with at most `world_bound` worlds is found, No when the propositional
// abstraction is unsatisfiable, Unknown otherwise.
Tri satisfiable(const std::vector<Formula>& fs, const ClassifyOptions& opts = {});

// Disjoint union with actions renamed "a<i>_<name>"; returns the new id of each point.
std::pair<ActionModel, std::vector<std::size_t>> merge_pointed_actions(const std::vector<PointedActionModel>& parts);

// Finite-domain variable encoded over atoms, one-hot (`name@value`) or binary (`name_b<i>`).
class FiniteDomainVar {
public:
    FiniteDomainVar(std::string name, std::vector<std::string> domain, bool binary = false);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& domain() const noexcept { return domain_; }
    bool binary() const noexcept { return binary_; }

    std::vector<std::string> atoms() const;
    // Atoms true in the encoding of `value`.
    Valuation encode(const std::string& value) const;
    Formula test(const std::string& value) const;
    PostMap assign(const std::string& value) const;
    // Guarded assignment: the variable takes the value paired with the guard that holds.
    // Guards must be pairwise exclusive; if none holds, every atom of the variable becomes false.
    PostMap assign_cases(const std::vector<std::pair<Formula, std::string>>& cases) const;
    // Decodes a valuation; nullopt when no value (or, for one-hot, several values) is encoded.
    std::optional<std::string> decode(const Valuation& v) const;

private:
    std::size_t index_of(const std::string& value) const;
    std::size_t bits() const;

    std::string name_;
    std::vector<std::string> domain_;
    bool binary_;
};

} // namespace delg
