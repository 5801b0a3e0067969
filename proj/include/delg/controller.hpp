#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delg/action.hpp"
#include "delg/arena.hpp"
#include "delg/model.hpp"

namespace delg {

enum class StrategyKind { PointedModelMap, ArenaVertexMap, ExpandedVertexMap };
const char* to_string(StrategyKind k);
StrategyKind parse_strategy_kind(const std::string& s);

// How pointed-model strategy keys are suffixed: by round number or by side to move.
enum class IndexMode { Round, Parity };

// Positional controller strategy. Pointed-model keys are "<canonical key>#<index>";
// arena keys are vertex descriptors of the (expanded) arena.
struct ControllerStrategy {
    StrategyKind kind = StrategyKind::PointedModelMap;
    IndexMode index = IndexMode::Parity;
    std::map<std::string, std::string> entries; // key -> action name
};

struct ControllerOptions {
    DeadlockMode deadlock = DeadlockMode::Lose;
    std::optional<std::size_t> rounds; // explicit round bound for the announcement search
    bool literal_round_bound = false;  // bound the announcement search by |W| instead of 2|W|
    std::size_t horizon = 10;          // bounded search for expanding instances
    std::size_t node_budget = 2000000;
};

struct ControllerResult {
    Tri verdict = Tri::Unknown;
    std::string method;
    std::optional<ControllerStrategy> strategy;
    std::optional<std::size_t> bound;
    std::size_t nodes = 0;
    std::string note;
};

// Memoized AND-OR recursion on (pointed model, round). Requires public announcements.
ControllerResult solve_controller_announcements(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                                const ControllerOptions& opts = {});
// Reachability fixpoint over (pointed model, side to move). Requires public or separable actions.
ControllerResult solve_controller_public(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                         const ControllerOptions& opts = {});
// Arena pipeline for propositional actions; depth >= 2 objectives fall back to bounded search.
ControllerResult solve_controller_propositional(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                                const ControllerOptions& opts = {});
// Round-indexed AND-OR search cut at `opts.horizon`; Unknown when the cut matters.
ControllerResult solve_controller_bounded(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                          const ControllerOptions& opts = {});

// method: auto, fig2, fig3, arena, bounded.
ControllerResult solve_controller(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                  const std::string& method, const ControllerOptions& opts = {});

struct VerifyResult {
    Tri status = Tri::Unknown; // Yes = verified, No = refuted, Unknown = inconclusive
    std::string message;
    std::vector<std::string> trace; // actions leading to the failure
};

// Expands every play that follows `s` against an unconstrained environment.
VerifyResult verify_controller_strategy(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                        const ControllerStrategy& s, DeadlockMode deadlock = DeadlockMode::Lose,
                                        std::size_t fuel = 10000);

} // namespace delg
