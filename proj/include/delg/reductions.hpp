#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delg/action.hpp"
#include "delg/distributed.hpp"
#include "delg/model.hpp"

namespace delg {

// Controller instance produced by an encoder. Actions are owned by ctr or env.
struct EncodedController {
    PointedModel initial;
    ActionModel actions;
    Formula goal;
    std::string note; // caveat carried into the emitted problem file
};

// ── quantified Boolean formulas ──

struct QbfInstance {
    std::vector<std::pair<bool, std::string>> prefix; // (existential?, variable)
    Formula matrix;
};

// Lines `exists x y`, `forall z` and `matrix <formula>`; `#` starts a comment.
QbfInstance parse_qbf(std::string_view text);
bool is_normalized(const QbfInstance& q);
// Inserts fresh dummy variables until the prefix alternates ∃∀ from the start and has even length.
QbfInstance normalize_qbf(const QbfInstance& q);
bool qbf_brute_force(const QbfInstance& q);
// Announcement game with 4k+1 worlds and 4k announcements; throws InputError unless normalized.
EncodedController qbf_to_controller(const QbfInstance& q);

// ── G4 ──

struct G4Instance {
    std::size_t k = 0;
    std::vector<std::vector<std::pair<std::string, bool>>> terms; // literals over p1..pk, q1..qk
    Valuation initial;
};

// Lines `k <n>`, `init <atoms>`, `term <literals>` with literals written `p1` or `!q2`.
G4Instance parse_g4(std::string_view text);
void validate_g4(const G4Instance& g);
Formula g4_formula(const G4Instance& g);
// The controller flips p atoms, the environment flips q atoms; the goal is the DNF.
EncodedController g4_to_controller(const G4Instance& g);
// Exhaustive minimax over (valuation, mover) with the encoded game's rules: the goal is
// tested before every move and the controller moves first.
bool g4_brute_force(const G4Instance& g);

// ── conditional planning ──

struct CondPlanAction {
    std::string name;
    Formula pre;
    std::vector<PostMap> outcomes; // nondeterministic effects, at least one
};

struct CondPlanInstance {
    std::set<std::string> atoms;
    Valuation initial;
    std::vector<CondPlanAction> actions;
    Formula goal;
};

// Lines `atoms ...`, `init ...`, `action <n> pre <f>`, `outcome <n> p := f, q := g`, `goal <f>`.
CondPlanInstance parse_condplan(std::string_view text);
void validate_condplan(const CondPlanInstance& c);
// The controller picks an action and records it in a finite-domain variable; the
// environment then applies one of its outcomes and clears the record.
EncodedController condplan_to_controller(const CondPlanInstance& c);
// Least fixpoint over valuations: the goal holds, or some applicable action has every
// outcome winning.
bool condplan_brute_force(const CondPlanInstance& c);

// ── TEAM DFA games ──

struct TeamDfaInstance {
    std::vector<std::string> states;
    std::string initial;
    std::map<std::pair<std::string, int>, std::string> delta;
    std::set<std::string> f_exists;
    std::set<std::string> f_forall;
};

struct TeamDfaOptions {
    bool binary = false;  // binary state encoding instead of one-hot
    // Give the β-learning actions to the learning agents as in the textbook construction.
    // That variant violates H2 and H3; the default lets the universal player reveal.
    bool literal = false;
};

// Lines `states ...`, `initial q`, `delta q 0 -> r`, `Fexists ...`, `Fforall ...`.
TeamDfaInstance parse_teamdfa(std::string_view text);
void validate_teamdfa(const TeamDfaInstance& t);
// Agents a, b (existential) and forall (universal); 14 actions, six steps per round.
Game teamdfa_to_distributed(const TeamDfaInstance& t, const TeamDfaOptions& opts = {});
enum class BoundedVerdict { Yes, NoWithinBound, Unknown };
const char* to_string(BoundedVerdict v);

// Tree search on the encoding with horizon 6·rounds.
BoundedVerdict teamdfa_bounded(const TeamDfaInstance& t, std::size_t rounds, const TeamDfaOptions& opts = {},
                    std::size_t node_budget = 2000000);

// Controller game recast as a distributed game: agents ctr (existential) and env
// (universal) with identity relations, and a turn variable alternating between them.
Game controller_as_distributed(const PointedModel& pm, const ActionModel& a, const Formula& goal);

} // namespace delg
