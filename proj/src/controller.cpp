#include "delg/controller.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "delg/error.hpp"

namespace delg {

const char* to_string(StrategyKind k)
{
    switch (k) {
    case StrategyKind::PointedModelMap: return "pointed-model-map";
    case StrategyKind::ArenaVertexMap: return "arena-vertex-map";
    case StrategyKind::ExpandedVertexMap: return "expanded-vertex-map";
    }
    return "pointed-model-map";
}

StrategyKind parse_strategy_kind(const std::string& s)
{
    if (s == "pointed-model-map") return StrategyKind::PointedModelMap;
    if (s == "arena-vertex-map") return StrategyKind::ArenaVertexMap;
    if (s == "expanded-vertex-map") return StrategyKind::ExpandedVertexMap;
    throw InputError("unknown strategy kind '" + s + "'");
}

namespace {

struct BudgetExceeded {};

void require_two_sided(const ActionModel& a)
{
    for (std::size_t x = 0; x < a.size(); ++x) {
        const auto k = a.owners[x].kind;
        if (k != OwnerKind::Controller && k != OwnerKind::Environment)
            throw InputError("action '" + a.names[x] + "' must be owned by ctr or env");
    }
}

std::vector<std::size_t> executable_moves(const PointedModel& pm, const ActionModel& a,
                                          const std::vector<std::size_t>& side)
{
    std::vector<std::size_t> out;
    for (std::size_t x : side)
        if (executable(pm, a, x)) out.push_back(x);
    return out;
}

// Depth-bounded AND-OR search on (pointed model, round). Controller moves at even
// rounds. When `exact` is false, reaching the bound yields Unknown instead of No.
class RoundSearch {
public:
    RoundSearch(const ActionModel& a, const Formula& goal, std::size_t bound, bool exact,
                const ControllerOptions& opts)
        : a_(a), goal_(goal), bound_(bound), exact_(exact), opts_(opts),
          ctr_(a.owned_by(Owner::controller())), env_(a.owned_by(Owner::environment()))
    {
    }

    Tri solve(const PointedModel& pm, std::size_t i)
    {
        if (eval(pm, goal_)) return Tri::Yes;
        if (i >= bound_) {
            if (!exact_) cut_ = true;
            return exact_ ? Tri::No : Tri::Unknown;
        }
        const std::string key = canonical_key(pm) + "#" + std::to_string(i);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second.first;
        if (++nodes_ > opts_.node_budget) throw BudgetExceeded{};

        const bool ctr_turn = i % 2 == 0;
        const auto moves = executable_moves(pm, a_, ctr_turn ? ctr_ : env_);
        Tri result;
        std::size_t choice = SIZE_MAX;
        if (moves.empty()) {
            result = (!ctr_turn && opts_.deadlock == DeadlockMode::Vacuous) ? Tri::Yes : Tri::No;
        } else if (ctr_turn) {
            result = Tri::No;
            for (std::size_t x : moves) {
                Tri r = solve(apply_pointed(pm, a_, x), i + 1);
                if (r == Tri::Yes) {
                    result = Tri::Yes;
                    choice = x;
                    break;
                }
                if (r == Tri::Unknown) result = Tri::Unknown;
            }
        } else {
            result = Tri::Yes;
            for (std::size_t x : moves) {
                Tri r = solve(apply_pointed(pm, a_, x), i + 1);
                if (r == Tri::No) {
                    result = Tri::No;
                    break;
                }
                if (r == Tri::Unknown) result = Tri::Unknown;
            }
        }
        memo_.emplace(key, std::make_pair(result, choice));
        return result;
    }

    // Collects the entries used by plays that follow the strategy; `pm` must be winning.
    void extract(const PointedModel& pm, std::size_t i, ControllerStrategy& s)
    {
        if (eval(pm, goal_) || i >= bound_) return;
        const std::string key = canonical_key(pm) + "#" + std::to_string(i);
        if (!visited_.insert(key).second) return;
        if (i % 2 == 0) {
            const std::size_t x = memo_.at(key).second;
            s.entries[key] = a_.names[x];
            extract(apply_pointed(pm, a_, x), i + 1, s);
        } else {
            for (std::size_t x : executable_moves(pm, a_, env_)) extract(apply_pointed(pm, a_, x), i + 1, s);
        }
    }

    std::size_t nodes() const { return nodes_; }
    bool cut() const { return cut_; }

private:
    const ActionModel& a_;
    const Formula& goal_;
    std::size_t bound_;
    bool exact_;
    const ControllerOptions& opts_;
    std::vector<std::size_t> ctr_, env_;
    std::unordered_map<std::string, std::pair<Tri, std::size_t>> memo_;
    std::unordered_set<std::string> visited_;
    std::size_t nodes_ = 0;
    bool cut_ = false;
};

ControllerResult run_round_search(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                  std::size_t bound, bool exact, const ControllerOptions& opts, std::string method)
{
    ControllerResult r;
    r.method = std::move(method);
    r.bound = bound;
    RoundSearch search(a, goal, bound, exact, opts);
    try {
        r.verdict = search.solve(pm, 0);
    } catch (const BudgetExceeded&) {
        r.verdict = Tri::Unknown;
        r.note = "node budget exhausted";
    }
    r.nodes = search.nodes();
    if (r.verdict == Tri::Yes) {
        ControllerStrategy s;
        s.kind = StrategyKind::PointedModelMap;
        s.index = IndexMode::Round;
        search.extract(pm, 0, s);
        r.strategy = std::move(s);
    }
    return r;
}

} // namespace

ControllerResult solve_controller_announcements(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                                const ControllerOptions& opts)
{
    require_two_sided(a);
    if (!all_public_announcements(a))
        throw InputError("the announcement solver requires every action to be a public announcement");
    // Each world-deleting move may be preceded by at most one move that deletes nothing
    // before a configuration repeats, so 2|W| rounds cover every shortest win.
    const std::size_t w = pm.model.size();
    const std::size_t bound = opts.rounds ? *opts.rounds : opts.literal_round_bound ? w : 2 * w;
    return run_round_search(pm, a, goal, bound, true, opts, "fig2");
}

ControllerResult solve_controller_bounded(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                          const ControllerOptions& opts)
{
    require_two_sided(a);
    ControllerResult r = run_round_search(pm, a, goal, opts.horizon, false, opts, "bounded");
    if (r.verdict == Tri::Unknown && r.note.empty()) r.note = "horizon " + std::to_string(opts.horizon) + " reached";
    return r;
}

// ── configuration-graph fixpoint ───────────────────────────────────────────

ControllerResult solve_controller_public(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                         const ControllerOptions& opts)
{
    require_two_sided(a);
    if (!all_public_actions(a) && classify(a).separable != Tri::Yes)
        throw InputError("the public-action solver requires public or separable actions");
    ControllerResult r;
    r.method = "fig3";
    const auto ctr = a.owned_by(Owner::controller());
    const auto env = a.owned_by(Owner::environment());

    std::vector<PointedModel> models;
    std::vector<std::string> keys;
    std::vector<int> player;
    std::vector<bool> goal_at;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::string>> labels;
    std::unordered_map<std::string, std::size_t> index;
    std::deque<std::size_t> queue;

    auto intern = [&](PointedModel m, int side) {
        std::string key = canonical_key(m) + "#" + std::to_string(side);
        if (auto it = index.find(key); it != index.end()) return it->second;
        const std::size_t id = models.size();
        goal_at.push_back(eval(m, goal));
        models.push_back(std::move(m));
        keys.push_back(key);
        player.push_back(side);
        succ.emplace_back();
        labels.emplace_back();
        index.emplace(std::move(key), id);
        queue.push_back(id);
        return id;
    };

    intern(pm, 0);
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        if (goal_at[v]) continue;
        if (models.size() > opts.node_budget) {
            r.verdict = Tri::Unknown;
            r.note = "node budget exhausted";
            r.nodes = models.size();
            return r;
        }
        const int side = player[v];
        for (std::size_t x : executable_moves(models[v], a, side == 0 ? ctr : env)) {
            PointedModel next = apply_pointed(models[v], a, x);
            const std::size_t t = intern(std::move(next), 1 - side);
            succ[v].push_back(t);
            labels[v].push_back(a.names[x]);
        }
    }
    r.nodes = models.size();
    // The pointed models are no longer needed; the fixpoint works on the graph alone.
    models.clear();

    const AttractorResult att = solve_attractor(player, succ, goal_at, opts.deadlock);
    r.verdict = att.winning[0] ? Tri::Yes : Tri::No;
    if (r.verdict == Tri::Yes) {
        ControllerStrategy s;
        s.kind = StrategyKind::PointedModelMap;
        s.index = IndexMode::Parity;
        std::vector<bool> seen(player.size(), false);
        std::deque<std::size_t> walk{0};
        seen[0] = true;
        while (!walk.empty()) {
            const std::size_t v = walk.front();
            walk.pop_front();
            if (goal_at[v]) continue;
            std::vector<std::size_t> next;
            if (player[v] == 0) {
                const std::size_t k = *att.move[v];
                s.entries[keys[v]] = labels[v][k];
                next.push_back(succ[v][k]);
            } else {
                next = succ[v];
            }
            for (std::size_t t : next)
                if (!seen[t]) {
                    seen[t] = true;
                    walk.push_back(t);
                }
        }
        r.strategy = std::move(s);
    }
    return r;
}

// ── arena pipeline ─────────────────────────────────────────────────────────

ControllerResult solve_controller_propositional(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                                const ControllerOptions& opts)
{
    require_two_sided(a);
    if (!all_propositional(a)) throw InputError("the arena solver requires a propositional action model");
    if (modal_depth(goal) >= 2) {
        ControllerResult r = solve_controller_bounded(pm, a, goal, opts);
        r.method = "arena+bounded";
        return r;
    }
    ControllerResult r;
    r.method = "arena";
    const GameArena g = build_arena(pm, a);
    const ExpandedArena x = expand_knowledge_depth1(g, goal);
    r.nodes = x.arena.size();
    const AttractorResult att = solve_attractor(x.arena, x.goal, opts.deadlock);
    r.verdict = att.winning[x.arena.initial] ? Tri::Yes : Tri::No;
    if (r.verdict == Tri::Yes) {
        ControllerStrategy s;
        s.kind = x.agents.empty() ? StrategyKind::ArenaVertexMap : StrategyKind::ExpandedVertexMap;
        std::vector<bool> seen(x.arena.size(), false);
        std::deque<std::size_t> walk{x.arena.initial};
        seen[x.arena.initial] = true;
        while (!walk.empty()) {
            const std::size_t v = walk.front();
            walk.pop_front();
            if (x.goal[v]) continue;
            std::vector<std::size_t> next;
            if (x.arena.player[v] == 0) {
                const std::size_t k = *att.move[v];
                s.entries[x.arena.names[v]] = x.arena.labels[v][k];
                next.push_back(x.arena.succ[v][k]);
            } else {
                next = x.arena.succ[v];
            }
            for (std::size_t t : next)
                if (!seen[t]) {
                    seen[t] = true;
                    walk.push_back(t);
                }
        }
        r.strategy = std::move(s);
    }
    return r;
}

ControllerResult solve_controller(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                  const std::string& method, const ControllerOptions& opts)
{
    if (method == "fig2") return solve_controller_announcements(pm, a, goal, opts);
    if (method == "fig3") return solve_controller_public(pm, a, goal, opts);
    if (method == "arena") return solve_controller_propositional(pm, a, goal, opts);
    if (method == "bounded") return solve_controller_bounded(pm, a, goal, opts);
    if (method != "auto") throw InputError("unknown controller method '" + method + "'");
    if (all_public_announcements(a)) return solve_controller_announcements(pm, a, goal, opts);
    if (all_public_actions(a) || classify(a).separable == Tri::Yes) return solve_controller_public(pm, a, goal, opts);
    if (all_propositional(a)) return solve_controller_propositional(pm, a, goal, opts);
    return solve_controller_bounded(pm, a, goal, opts);
}

// ── verification ───────────────────────────────────────────────────────────

namespace {

struct Refuted {
    std::string message;
};
struct OutOfFuel {};

class ModelMapVerifier {
public:
    ModelMapVerifier(const ActionModel& a, const Formula& goal, const ControllerStrategy& s, DeadlockMode deadlock,
                     std::size_t fuel)
        : a_(a), goal_(goal), s_(s), deadlock_(deadlock), fuel_(fuel),
          env_(a.owned_by(Owner::environment()))
    {
    }

    void visit(const PointedModel& pm, std::size_t i)
    {
        if (eval(pm, goal_)) return;
        if (i > fuel_) throw OutOfFuel{};
        const std::size_t idx = s_.index == IndexMode::Round ? i : i % 2;
        const std::string key = canonical_key(pm) + "#" + std::to_string(idx);
        if (done_.count(key)) return;
        if (!on_path_.insert(key).second)
            throw Refuted{"a configuration repeats before the goal holds"};
        if (i % 2 == 0) {
            auto it = s_.entries.find(key);
            if (it == s_.entries.end()) throw Refuted{"no strategy entry for reachable configuration " + key};
            std::size_t x;
            try {
                x = a_.index_of(it->second);
            } catch (const InputError&) {
                throw Refuted{"strategy names unknown action '" + it->second + "'"};
            }
            if (a_.owners[x].kind != OwnerKind::Controller)
                throw Refuted{"strategy prescribes non-controller action '" + it->second + "'"};
            if (!executable(pm, a_, x)) throw Refuted{"prescribed action '" + it->second + "' is not executable"};
            trace.push_back(it->second);
            visit(apply_pointed(pm, a_, x), i + 1);
            trace.pop_back();
        } else {
            const auto moves = executable_moves(pm, a_, env_);
            if (moves.empty() && deadlock_ == DeadlockMode::Lose)
                throw Refuted{"the environment has no move and the goal does not hold"};
            for (std::size_t x : moves) {
                trace.push_back(a_.names[x]);
                visit(apply_pointed(pm, a_, x), i + 1);
                trace.pop_back();
            }
        }
        on_path_.erase(key);
        done_.insert(key);
    }

    std::vector<std::string> trace;

private:
    const ActionModel& a_;
    const Formula& goal_;
    const ControllerStrategy& s_;
    DeadlockMode deadlock_;
    std::size_t fuel_;
    std::vector<std::size_t> env_;
    std::unordered_set<std::string> done_, on_path_;
};

// Replays the generated structure and the expanded arena side by side, so that goal
// truth is always decided by model checking rather than by the arena predicate.
class ArenaVerifier {
public:
    ArenaVerifier(const ActionModel& a, const Formula& goal, const ControllerStrategy& s, const ExpandedArena& x,
                  DeadlockMode deadlock, std::size_t fuel)
        : a_(a), goal_(goal), s_(s), x_(x), deadlock_(deadlock), fuel_(fuel), on_path_(x.arena.size(), false),
          env_(a.owned_by(Owner::environment()))
    {
    }

    void visit(std::size_t v, const PointedModel& pm, std::size_t depth)
    {
        const bool holds = eval(pm, goal_);
        if (holds != x_.goal[v])
            throw Refuted{"arena vertex " + x_.arena.names[v] + " disagrees with the model on the goal"};
        if (holds) return;
        if (depth > fuel_) throw OutOfFuel{};
        const std::string memo = std::to_string(v) + "|" + canonical_key(pm);
        if (done_.count(memo)) return;
        if (on_path_[v]) throw Refuted{"play revisits arena vertex " + x_.arena.names[v] + " before the goal holds"};
        on_path_[v] = true;
        const auto& labels = x_.arena.labels[v];
        if (x_.arena.player[v] == 0) {
            auto it = s_.entries.find(x_.arena.names[v]);
            if (it == s_.entries.end()) throw Refuted{"no strategy entry for arena vertex " + x_.arena.names[v]};
            auto pos = std::find(labels.begin(), labels.end(), it->second);
            if (pos == labels.end())
                throw Refuted{"prescribed action '" + it->second + "' has no edge at " + x_.arena.names[v]};
            std::size_t act = a_.index_of(it->second);
            if (!executable(pm, a_, act))
                throw Refuted{"prescribed action '" + it->second + "' is not executable in the model"};
            trace.push_back(it->second);
            visit(x_.arena.succ[v][static_cast<std::size_t>(pos - labels.begin())], apply_pointed(pm, a_, act),
                  depth + 1);
            trace.pop_back();
        } else {
            const auto moves = executable_moves(pm, a_, env_);
            std::vector<std::string> names;
            for (std::size_t m : moves) names.push_back(a_.names[m]);
            std::vector<std::string> sorted_labels = labels;
            std::sort(names.begin(), names.end());
            std::sort(sorted_labels.begin(), sorted_labels.end());
            if (names != sorted_labels)
                throw Refuted{"arena moves at " + x_.arena.names[v] + " differ from the executable actions"};
            if (moves.empty() && deadlock_ == DeadlockMode::Lose)
                throw Refuted{"the environment has no move and the goal does not hold"};
            for (std::size_t m : moves) {
                auto pos = std::find(labels.begin(), labels.end(), a_.names[m]);
                trace.push_back(a_.names[m]);
                visit(x_.arena.succ[v][static_cast<std::size_t>(pos - labels.begin())], apply_pointed(pm, a_, m),
                      depth + 1);
                trace.pop_back();
            }
        }
        on_path_[v] = false;
        done_.insert(memo);
    }

    std::vector<std::string> trace;

private:
    const ActionModel& a_;
    const Formula& goal_;
    const ControllerStrategy& s_;
    const ExpandedArena& x_;
    DeadlockMode deadlock_;
    std::size_t fuel_;
    std::vector<bool> on_path_;
    std::vector<std::size_t> env_;
    std::unordered_set<std::string> done_;
};

} // namespace

VerifyResult verify_controller_strategy(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                        const ControllerStrategy& s, DeadlockMode deadlock, std::size_t fuel)
{
    require_two_sided(a);
    VerifyResult r;
    if (s.kind == StrategyKind::PointedModelMap) {
        ModelMapVerifier v(a, goal, s, deadlock, fuel);
        try {
            v.visit(pm, 0);
            r.status = Tri::Yes;
            r.message = "every play reaches the goal";
        } catch (const Refuted& e) {
            r.status = Tri::No;
            r.message = e.message;
            r.trace = v.trace;
        } catch (const OutOfFuel&) {
            r.status = Tri::Unknown;
            r.message = "fuel exhausted after " + std::to_string(fuel) + " steps";
            r.trace = v.trace;
        }
        return r;
    }
    if (modal_depth(goal) > 1) throw InputError("arena strategies only exist for objectives of modal depth at most 1");
    const GameArena g = build_arena(pm, a);
    const ExpandedArena x = expand_knowledge_depth1(g, goal);
    ArenaVerifier v(a, goal, s, x, deadlock, fuel);
    try {
        v.visit(x.arena.initial, pm, 0);
        r.status = Tri::Yes;
        r.message = "every play reaches the goal";
    } catch (const Refuted& e) {
        r.status = Tri::No;
        r.message = e.message;
        r.trace = v.trace;
    } catch (const OutOfFuel&) {
        r.status = Tri::Unknown;
        r.message = "fuel exhausted after " + std::to_string(fuel) + " steps";
        r.trace = v.trace;
    }
    return r;
}

} // namespace delg
