#include <algorithm>
#include <deque>
#include <unordered_set>

#include "delg/distributed.hpp"
#include "delg/error.hpp"

namespace delg {

void TeamSplit::validate(const std::vector<std::string>& agents, const ActionModel& a) const
{
    for (const auto& x : existential)
        if (universal.count(x)) throw InputError("agent '" + x + "' is on both teams");
    std::set<std::string> all(existential.begin(), existential.end());
    all.insert(universal.begin(), universal.end());
    for (const auto& x : agents)
        if (!all.count(x)) throw InputError("agent '" + x + "' belongs to no team");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Owner& o = a.owners[i];
        if (o.kind != OwnerKind::Agent || !all.count(o.agent))
            throw InputError("action '" + a.names[i] + "' must be owned by a team member");
    }
}

std::string mover_at(const FiniteDomainVar& turn, const Valuation& v)
{
    auto who = turn.decode(v);
    if (!who) throw InputError("no unique turn atom holds in valuation {" + valuation_token(v) + "}");
    return *who;
}

bool announcements_modulo_turn(const ActionModel& a, const FiniteDomainVar& turn)
{
    if (!all_relations_identity(a)) return false;
    const auto atoms = turn.atoms();
    for (const auto& post : a.post) {
        for (const auto& [p, f] : normalized_post(post)) {
            if (std::find(atoms.begin(), atoms.end(), p) == atoms.end()) return false;
            if (!f.is_constant()) return false;
        }
    }
    return true;
}

namespace {

std::string join(const std::vector<std::string>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i];
    }
    return out + "}";
}

// Agent that moves after `x`, or nullopt with `problem` set when the turn posts are malformed.
std::optional<std::string> next_turn(const ActionModel& a, std::size_t x, const FiniteDomainVar& turn,
                                     std::string& problem)
{
    const auto atoms = turn.atoms();
    const PostMap& post = a.post[x];
    std::size_t assigned = 0;
    std::vector<std::string> on;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        auto it = post.find(atoms[k]);
        if (it == post.end()) continue;
        ++assigned;
        if (!it->second.is_constant()) {
            problem = "action '" + a.names[x] + "' assigns " + atoms[k] + " a non-constant formula";
            return std::nullopt;
        }
        if (it->second.kind() == FormulaKind::True) on.push_back(turn.domain()[k]);
    }
    if (assigned == 0) {
        if (a.owners[x].kind != OwnerKind::Agent) {
            problem = "action '" + a.names[x] + "' has no agent owner";
            return std::nullopt;
        }
        return a.owners[x].agent;
    }
    if (assigned != atoms.size() || on.size() != 1) {
        problem = "action '" + a.names[x] + "' must assign every turn atom with exactly one true";
        return std::nullopt;
    }
    return on.front();
}

std::vector<std::string> executable_names(std::size_t w, const ActionModel& a, const std::vector<std::size_t>& owned,
                                          const std::vector<std::vector<bool>>& exec)
{
    std::vector<std::string> out;
    for (std::size_t x : owned)
        if (exec[x][w]) out.push_back(a.names[x]);
    return out;
}

struct Reachable {
    std::vector<PointedModel> models;
    bool closed = true;
};

// Contracted pointed models reachable by executable actions, optionally depth-limited.
Reachable reachable_configurations(const Game& g, std::optional<std::size_t> depth_limit, std::size_t budget)
{
    Reachable r;
    std::unordered_set<std::string> seen;
    std::deque<std::pair<std::size_t, std::size_t>> queue; // (model index, depth)
    PointedModel start = bisim_contract(restrict_to_component(g.initial));
    seen.insert(canonical_key(start));
    r.models.push_back(std::move(start));
    queue.emplace_back(0, 0);
    while (!queue.empty()) {
        auto [id, depth] = queue.front();
        queue.pop_front();
        if (depth_limit && depth >= *depth_limit) {
            r.closed = false;
            continue;
        }
        for (std::size_t x = 0; x < g.actions.size(); ++x) {
            if (!executable(r.models[id], g.actions, x)) continue;
            PointedModel next = apply_pointed(r.models[id], g.actions, x);
            if (!seen.insert(canonical_key(next)).second) continue;
            if (r.models.size() >= budget) {
                r.closed = false;
                return r;
            }
            r.models.push_back(std::move(next));
            queue.emplace_back(r.models.size() - 1, depth + 1);
        }
    }
    return r;
}

bool non_expanding(const ActionModel& a) { return all_public_actions(a) || classify(a).separable == Tri::Yes; }

// H3 on configurations: worlds related for the mover offer the same executable actions.
HypothesisCheck h3_on_configurations(const Game& g, const Reachable& reach, bool exact)
{
    for (const auto& pm : reach.models) {
        const EpistemicModel& m = pm.model;
        std::vector<std::vector<bool>> exec;
        for (const auto& pre : g.actions.pre) exec.push_back(truth_set(m, pre));
        for (std::size_t w = 0; w < m.size(); ++w) {
            auto who = g.turn.decode(m.valuations[w]);
            if (!who) continue; // turn discipline reports this
            const auto owned = g.actions.owned_by(Owner::of(*who));
            const auto here = executable_names(w, g.actions, owned, exec);
            const Relation rel = m.relation(*who);
            for (std::size_t u : rel.successors(w)) {
                const auto there = executable_names(u, g.actions, owned, exec);
                if (here != there)
                    return {Tri::No, "agent " + *who + " cannot tell worlds " + m.names[w] + " and " + m.names[u] +
                                         " apart but may execute " + join(here) + " vs " + join(there)};
            }
        }
    }
    if (exact) return {Tri::Yes, {}};
    return {Tri::Unknown, "no violation within the explored horizon"};
}

// H3 on the multi-player arena, tracking every agent's information set along histories.
HypothesisCheck h3_on_arena(const Game& g, std::size_t budget)
{
    MultiArena arena;
    try {
        arena = build_multiplayer_arena(g.initial, g.actions, g.turn);
    } catch (const InputError& e) {
        return {Tri::Unknown, e.what()};
    }
    std::vector<std::string> agents = g.turn.domain();
    std::vector<Relation> rels;
    for (const auto& b : agents) {
        auto it = arena.relations.find(b);
        rels.push_back(it == arena.relations.end() ? Relation::identity(arena.size()) : it->second);
    }
    auto exec_of = [&](std::size_t v, const std::string& who) {
        std::vector<std::string> out;
        for (std::size_t x : g.actions.owned_by(Owner::of(who)))
            if (eval_valuation(arena.valuations[v], g.actions.pre[x])) out.push_back(g.actions.names[x]);
        return out;
    };
    using State = std::pair<std::size_t, std::vector<std::vector<std::size_t>>>;
    std::set<State> seen;
    std::deque<State> queue;
    for (std::size_t w = 0; w < g.initial.model.size(); ++w) {
        State s{w, {}};
        for (const auto& r : rels) s.second.push_back(r.successors(w));
        if (seen.insert(s).second) queue.push_back(std::move(s));
    }
    while (!queue.empty()) {
        State s = std::move(queue.front());
        queue.pop_front();
        const std::size_t v = s.first;
        const std::string& who = arena.owner[v];
        const std::size_t bi = static_cast<std::size_t>(std::find(agents.begin(), agents.end(), who) - agents.begin());
        const auto here = exec_of(v, who);
        for (std::size_t u : s.second[bi]) {
            const auto there = exec_of(u, who);
            if (here != there)
                return {Tri::No, "agent " + who + " cannot tell " + arena.names[v] + " from " + arena.names[u] +
                                     " but may execute " + join(here) + " vs " + join(there)};
        }
        for (std::size_t u : arena.succ[v]) {
            State next{u, {}};
            for (std::size_t b = 0; b < rels.size(); ++b) {
                std::vector<std::size_t> set;
                for (std::size_t u2 : rels[b].successors(u)) {
                    for (std::size_t from : s.second[b]) {
                        const auto& succ = arena.succ[from];
                        if (std::find(succ.begin(), succ.end(), u2) != succ.end()) {
                            set.push_back(u2);
                            break;
                        }
                    }
                }
                next.second.push_back(std::move(set));
            }
            if (seen.size() >= budget) return {Tri::Unknown, "information-set exploration exceeded its budget"};
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
    return {Tri::Yes, {}};
}

} // namespace

HypothesesReport check_hypotheses(const Game& g, const HypothesesOptions& opts)
{
    HypothesesReport r;
    const EpistemicModel& m = g.initial.model;
    const ActionModel& a = g.actions;

    // H1
    r.h1 = {Tri::Yes, {}};
    std::optional<std::pair<std::string, std::size_t>> first;
    for (std::size_t w = 0; w < m.size() && r.h1.status == Tri::Yes; ++w) {
        auto who = g.turn.decode(m.valuations[w]);
        if (!who) {
            r.h1 = {Tri::No, "world " + m.names[w] + " has no unique turn atom"};
        } else if (!first) {
            first = std::make_pair(*who, w);
        } else if (first->first != *who) {
            r.h1 = {Tri::No, "worlds " + m.names[first->second] + " (turn=" + first->first + ") and " + m.names[w] +
                                 " (turn=" + *who + ") disagree"};
        }
    }

    // Turn discipline, and the next-turn table used by H2.
    r.turn = {Tri::Yes, {}};
    std::vector<std::optional<std::string>> next(a.size());
    std::optional<Reachable> reach;
    const bool nonexp = non_expanding(a);
    auto reachable = [&]() -> const Reachable& {
        if (!reach) reach = reachable_configurations(g, nonexp ? std::nullopt : std::optional(opts.horizon), opts.node_budget);
        return *reach;
    };
    for (std::size_t x = 0; x < a.size(); ++x) {
        std::string problem;
        next[x] = next_turn(a, x, g.turn, problem);
        if (!next[x] && r.turn.status != Tri::No) r.turn = {Tri::No, problem};
        if (a.owners[x].kind != OwnerKind::Agent) {
            r.turn = {Tri::No, "action '" + a.names[x] + "' has no agent owner"};
            continue;
        }
        const std::string& owner = a.owners[x].agent;
        const auto& dom = g.turn.domain();
        if (std::find(dom.begin(), dom.end(), owner) == dom.end()) {
            r.turn = {Tri::No, "owner '" + owner + "' of action '" + a.names[x] + "' is not a turn value"};
            continue;
        }
        if (r.turn.status == Tri::No) continue;
        Tri sat = satisfiable({a.pre[x], neg(g.turn.test(owner))});
        if (sat == Tri::No) continue;
        if (is_propositional(a.pre[x]) && sat == Tri::Yes) {
            r.turn = {Tri::No, "pre(" + a.names[x] + ") does not entail turn=" + owner};
            continue;
        }
        const Reachable& rc = reachable();
        for (const auto& pm : rc.models) {
            const auto pre = truth_set(pm.model, a.pre[x]);
            const auto mine = truth_set(pm.model, g.turn.test(owner));
            for (std::size_t w = 0; w < pm.model.size(); ++w) {
                if (pre[w] && !mine[w]) {
                    r.turn = {Tri::No, "action '" + a.names[x] + "' is executable at reachable world " +
                                           pm.model.names[w] + " where it is not " + owner + "'s turn"};
                    break;
                }
            }
            if (r.turn.status == Tri::No) break;
        }
        if (r.turn.status != Tri::No && !rc.closed)
            r.turn = {Tri::Unknown, "could not decide whether pre(" + a.names[x] + ") entails turn=" + owner};
    }

    // H2
    r.h2 = {Tri::Yes, {}};
    for (const auto& [agent, rel] : a.relations) {
        for (std::size_t x = 0; x < a.size() && r.h2.status == Tri::Yes; ++x) {
            for (std::size_t y : rel.successors(x)) {
                if (!next[x] || !next[y]) {
                    r.h2 = {Tri::Unknown, "turn postconditions are malformed"};
                    break;
                }
                if (*next[x] != *next[y]) {
                    r.h2 = {Tri::No, "agent " + agent + " confuses '" + a.names[x] + "' (next turn " + *next[x] +
                                         ") with '" + a.names[y] + "' (next turn " + *next[y] + ")"};
                    break;
                }
            }
        }
        if (r.h2.status != Tri::Yes) break;
    }

    // H3
    if (all_propositional(a)) {
        r.h3 = h3_on_arena(g, opts.node_budget);
    } else {
        const Reachable& rc = reachable();
        r.h3 = h3_on_configurations(g, rc, rc.closed);
    }
    return r;
}

void require_hypotheses(const HypothesesReport& r)
{
    if (r.h1.status == Tri::No) throw HypothesisError("H1 violated: " + r.h1.witness);
    if (r.h2.status == Tri::No) throw HypothesisError("H2 violated: " + r.h2.witness);
    if (r.turn.status == Tri::No) throw HypothesisError("turn discipline violated: " + r.turn.witness);
    if (r.h3.status == Tri::No) throw HypothesisError("H3 violated: " + r.h3.witness);
}

HierarchyResult is_hierarchical(const EpistemicModel& m, const ActionModel& a, const TeamSplit& split)
{
    auto included = [](const Relation& r1, const Relation& r2) {
        for (std::size_t i = 0; i < r1.size(); ++i)
            for (std::size_t j : r1.successors(i))
                if (!r2.has(i, j)) return false;
        return true;
    };
    auto finer = [&](const std::string& x, const std::string& y) {
        return included(m.relation(x), m.relation(y)) && included(a.relation(x), a.relation(y));
    };
    HierarchyResult r;
    std::vector<std::string> rest(split.existential.begin(), split.existential.end());
    while (!rest.empty()) {
        auto pick = std::find_if(rest.begin(), rest.end(), [&](const std::string& x) {
            return std::all_of(rest.begin(), rest.end(), [&](const std::string& y) { return finer(x, y); });
        });
        if (pick == rest.end()) {
            for (std::size_t i = 0; i < rest.size() && !r.incomparable; ++i)
                for (std::size_t j = i + 1; j < rest.size(); ++j)
                    if (!finer(rest[i], rest[j]) && !finer(rest[j], rest[i])) {
                        r.incomparable = std::make_pair(rest[i], rest[j]);
                        break;
                    }
            r.order.clear();
            return r;
        }
        r.order.push_back(*pick);
        rest.erase(pick);
    }
    r.hierarchical = true;
    return r;
}

} // namespace delg
