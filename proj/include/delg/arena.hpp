#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delg/action.hpp"
#include "delg/model.hpp"

namespace delg {

// What happens at a universal position with no move: `Lose` counts it as a loss for the
// existential side (the literal "fail if no such action"), `Vacuous` as a win.
enum class DeadlockMode { Lose, Vacuous };
const char* to_string(DeadlockMode d);
DeadlockMode parse_deadlock(const std::string& s); // throws InputError

// Two-player arena with epistemic relations. Vertex names are stable descriptors;
// `labels[v][k]` names the action behind edge `succ[v][k]`.
struct GameArena {
    std::vector<std::string> names;
    std::vector<int> player; // 0 or 1
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::string>> labels;
    std::map<std::string, Relation> relations;
    std::vector<Valuation> valuations;

    std::size_t size() const noexcept { return names.size(); }
    std::size_t edge_count() const;
    std::optional<std::size_t> find(const std::string& name) const;
};

struct AttractorResult {
    std::vector<bool> winning;
    std::vector<std::size_t> rank;                // meaningful on winning vertices
    std::vector<std::optional<std::size_t>> move; // successor position for winning player-0 vertices
};

AttractorResult solve_attractor(const std::vector<int>& player, const std::vector<std::vector<std::size_t>>& succ,
                                const std::vector<bool>& goal, DeadlockMode deadlock);
AttractorResult solve_attractor(const GameArena& g, const std::vector<bool>& goal, DeadlockMode deadlock);

// Arena simulating the generated structure for propositional actions. Vertices are the
// model's worlds plus (action, valuation, side-to-move) triples reachable from any world;
// controller actions are side 0, environment actions side 1.
GameArena build_arena(const PointedModel& pm, const ActionModel& a);
std::size_t arena_size_bound(std::size_t worlds, std::size_t actions, std::size_t atoms);

// Knowledge expansion for objectives of modal depth at most one: each vertex is paired
// with the information sets of the agents mentioned under a modality.
struct ExpandedArena {
    GameArena arena;
    std::vector<std::size_t> base;             // underlying vertex per expanded vertex
    std::vector<std::string> agents;           // agents tracked
    std::vector<std::vector<std::vector<std::size_t>>> info; // [vertex][agent] sorted base vertices
    std::vector<Valuation> base_valuations;
    std::vector<bool> goal;
};

ExpandedArena expand_knowledge_depth1(const GameArena& g, const Formula& goal);
// Truth of a depth-one formula at an expanded vertex.
bool eval_expanded(const ExpandedArena& x, std::size_t vertex, const Formula& f);

// Arena for several players: the vertex owner is the agent whose turn atom holds.
struct MultiArena {
    std::vector<std::string> names;
    std::vector<std::string> owner;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::string>> labels;
    std::map<std::string, Relation> relations;
    std::vector<Valuation> valuations;

    std::size_t size() const noexcept { return names.size(); }
};

MultiArena build_multiplayer_arena(const PointedModel& pm, const ActionModel& a, const FiniteDomainVar& turn);
std::size_t multiarena_size_bound(std::size_t worlds, std::size_t actions, std::size_t atoms);

// "alpha/p+q/1" style descriptor of a valuation (a dash stands for the empty set).
std::string valuation_token(const Valuation& v);

} // namespace delg
