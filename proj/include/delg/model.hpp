#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "delg/formula.hpp"

namespace delg {

// Accessibility relation over indices 0..n-1, stored as sorted successor lists.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::size_t n) : succ_(n) {}

    static Relation identity(std::size_t n);
    static Relation universal(std::size_t n);
    // Classes must be disjoint; indices not covered become singleton classes.
    static Relation from_partition(std::size_t n, const std::vector<std::vector<std::size_t>>& classes);

    std::size_t size() const noexcept { return succ_.size(); }
    void add(std::size_t from, std::size_t to);
    bool has(std::size_t from, std::size_t to) const;
    const std::vector<std::size_t>& successors(std::size_t from) const { return succ_.at(from); }
    std::size_t pair_count() const;

    bool is_identity() const;
    bool is_reflexive() const;
    bool is_symmetric() const;
    bool is_transitive() const;
    bool is_equivalence() const { return is_reflexive() && is_symmetric() && is_transitive(); }

    // Relation restricted to `keep` (old indices, in new order).
    Relation induced(const std::vector<std::size_t>& keep) const;

    friend bool operator==(const Relation& a, const Relation& b) { return a.succ_ == b.succ_; }

private:
    std::vector<std::vector<std::size_t>> succ_;
};

// Finite Kripke structure. An agent without an entry in `relations` is treated as
// having the identity relation; loaders always fill declared agents explicitly.
struct EpistemicModel {
    std::vector<std::string> names;
    std::vector<Valuation> valuations;
    std::map<std::string, Relation> relations;

    std::size_t size() const noexcept { return names.size(); }
    bool empty() const noexcept { return names.empty(); }

    std::size_t add_world(std::string name, Valuation v);
    std::size_t index_of(const std::string& name) const; // throws InputError
    // Returns the stored relation, or an identity relation for unknown agents.
    Relation relation(const std::string& agent) const;
    std::vector<std::string> agents() const;
};

struct PointedModel {
    EpistemicModel model;
    std::size_t point = 0;

    const Valuation& point_valuation() const { return model.valuations.at(point); }
};

// Truth value of `f` at every world, computed bottom-up.
std::vector<bool> truth_set(const EpistemicModel& m, const Formula& f);
bool eval(const EpistemicModel& m, std::size_t world, const Formula& f);
bool eval(const PointedModel& pm, const Formula& f);

bool is_s5(const EpistemicModel& m);

// Worlds reachable from `seeds` along the union of all relations in either direction, sorted.
std::vector<std::size_t> component_of(const EpistemicModel& m, const std::vector<std::size_t>& seeds);
EpistemicModel induced_submodel(const EpistemicModel& m, const std::vector<std::size_t>& keep);
PointedModel restrict_to_component(const PointedModel& pm);

// Block index per world for the coarsest bisimulation refining `initial` (worlds with
// different initial labels are never merged). Blocks are numbered by first occurrence.
std::vector<std::size_t> bisimulation_classes(const EpistemicModel& m, const std::vector<std::size_t>& initial);
std::vector<std::size_t> bisimulation_classes(const EpistemicModel& m);
// Quotient by `blocks`; each block keeps the name of its lowest-indexed world.
EpistemicModel quotient(const EpistemicModel& m, const std::vector<std::size_t>& blocks);
PointedModel bisim_contract(const PointedModel& pm);

// Canonical identifier of a pointed model up to bisimulation and renaming: the key of the
// point-generated component, contracted, with the point marked. With `contract` false
// the key identifies the component up to isomorphism only.
std::string canonical_key(const PointedModel& pm, bool contract = true);

// Isomorphism-invariant key of a whole model whose worlds carry integer marks.
std::string canonical_key_marked(const EpistemicModel& m, const std::vector<int>& marks);

} // namespace delg
