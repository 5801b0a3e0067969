#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "delg/action.hpp"
#include "delg/arena.hpp"
#include "delg/controller.hpp"
#include "delg/model.hpp"

namespace delg {

struct TeamSplit {
    std::set<std::string> existential;
    std::set<std::string> universal;

    bool is_existential(const std::string& agent) const { return existential.count(agent) != 0; }
    // Throws InputError unless the teams are disjoint, cover `agents`, and own every action.
    void validate(const std::vector<std::string>& agents, const ActionModel& a) const;
};

// One-hot turn variable over the agents plus the team split.
struct Game {
    PointedModel initial;
    ActionModel actions;
    FiniteDomainVar turn;
    TeamSplit split;
    Formula goal;
};

struct HypothesisCheck {
    Tri status = Tri::Unknown; // Yes = holds, No = violated
    std::string witness;
};

struct HypothesesReport {
    HypothesisCheck h1;   // the starting player is known
    HypothesisCheck h2;   // related actions hand the turn to the same agent
    HypothesisCheck h3;   // indistinguishable turns offer the same executable actions
    HypothesisCheck turn; // preconditions entail the owner's turn, turn posts are constant

    bool all_pass() const
    {
        return h1.status == Tri::Yes && h2.status == Tri::Yes && h3.status == Tri::Yes && turn.status == Tri::Yes;
    }
};

struct HypothesesOptions {
    std::size_t horizon = 8;         // exploration depth for expanding, non-propositional instances
    std::size_t node_budget = 200000;
};

HypothesesReport check_hypotheses(const Game& g, const HypothesesOptions& opts = {});
// Throws HypothesisError when H1, H2, turn discipline or H3 is violated.
void require_hypotheses(const HypothesesReport& r);

// Agent whose turn atom holds at `v`; throws InputError when there is none or several.
std::string mover_at(const FiniteDomainVar& turn, const Valuation& v);

// Key of what `agent` knows at the point: the contracted component with the agent's
// indistinguishability cell marked. Equal for all worlds of the cell.
std::string info_state_key(const PointedModel& pm, const std::string& agent);

enum class StrategyKeying { InfoRound, InfoState, HistoryClass };
const char* to_string(StrategyKeying k);
StrategyKeying parse_strategy_keying(const std::string& s);

// One uniform strategy per existential agent, keyed by information state (or by the
// names of the histories in a class). Conflicting assignments are rejected.
class DistributedStrategy {
public:
    StrategyKeying keying = StrategyKeying::InfoState;

    void assign(const std::string& agent, const std::string& key, const std::string& action);
    std::optional<std::string> lookup(const std::string& agent, const std::string& key) const;
    const std::map<std::string, std::map<std::string, std::string>>& entries() const { return entries_; }
    std::size_t size() const;

private:
    std::map<std::string, std::map<std::string, std::string>> entries_;
};

struct DistributedOptions {
    DeadlockMode deadlock = DeadlockMode::Lose;
    std::optional<std::size_t> rounds; // explicit round bound for the announcement search
    bool literal_round_bound = false;  // bound by |W| instead of |Agt|·|W|(|W|+1)/2
    std::size_t horizon = 6;           // tree search depth
    std::size_t node_budget = 2000000;
    bool check_hypotheses = true;
};

struct DistributedResult {
    Tri verdict = Tri::Unknown;
    std::string method;
    std::optional<DistributedStrategy> strategy;
    std::optional<std::size_t> bound;
    std::size_t nodes = 0;
    std::string note;
    bool no_within_bound = false; // Unknown because no strategy wins before the horizon
};

// Round-bounded AND-OR search with universal re-pointing inside the mover's cell.
DistributedResult solve_distributed_announcements(const Game& g, const DistributedOptions& opts = {});
// Reachability fixpoint over points, cells and cell options.
DistributedResult solve_distributed_public(const Game& g, const DistributedOptions& opts = {});
// Direct enumeration of uniform strategies on the history tree up to `opts.horizon`.
// No only when every play ends before the horizon; a loss caused by the cut gives
// Unknown with `no_within_bound` set.
DistributedResult strategy_tree_search(const Game& g, const DistributedOptions& opts = {});
// method: auto, fig4, fig5, tree.
DistributedResult solve_distributed(const Game& g, const std::string& method, const DistributedOptions& opts = {});

VerifyResult verify_distributed_strategy(const Game& g, const DistributedStrategy& s,
                                         DeadlockMode deadlock = DeadlockMode::Lose, std::size_t fuel = 10000);

struct HierarchyResult {
    bool hierarchical = false;
    std::vector<std::string> order;                 // finest information first
    std::optional<std::pair<std::string, std::string>> incomparable;
};

HierarchyResult is_hierarchical(const EpistemicModel& m, const ActionModel& a, const TeamSplit& split);

// Every action is an announcement up to constant assignments of turn atoms.
bool announcements_modulo_turn(const ActionModel& a, const FiniteDomainVar& turn);

} // namespace delg
