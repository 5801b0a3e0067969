#include "delg/distributed.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "delg/error.hpp"

namespace delg {

const char* to_string(StrategyKeying k)
{
    switch (k) {
    case StrategyKeying::InfoRound: return "info-round";
    case StrategyKeying::InfoState: return "info-state";
    case StrategyKeying::HistoryClass: return "history-class";
    }
    return "info-state";
}

StrategyKeying parse_strategy_keying(const std::string& s)
{
    if (s == "info-round") return StrategyKeying::InfoRound;
    if (s == "info-state") return StrategyKeying::InfoState;
    if (s == "history-class") return StrategyKeying::HistoryClass;
    throw InputError("unknown strategy keying '" + s + "'");
}

void DistributedStrategy::assign(const std::string& agent, const std::string& key, const std::string& action)
{
    auto [it, inserted] = entries_[agent].emplace(key, action);
    if (!inserted && it->second != action)
        throw InputError("non-uniform strategy: agent " + agent + " is assigned both '" + it->second + "' and '" +
                         action + "' in information state " + key);
}

std::optional<std::string> DistributedStrategy::lookup(const std::string& agent, const std::string& key) const
{
    auto a = entries_.find(agent);
    if (a == entries_.end()) return std::nullopt;
    auto it = a->second.find(key);
    if (it == a->second.end()) return std::nullopt;
    return it->second;
}

std::size_t DistributedStrategy::size() const
{
    std::size_t n = 0;
    for (const auto& [agent, m] : entries_) n += m.size();
    return n;
}

namespace {

// Copy of an agent's successor list; EpistemicModel::relation returns by value.
std::vector<std::size_t> cell_of(const EpistemicModel& m, const std::string& agent, std::size_t w)
{
    return m.relation(agent).successors(w);
}

} // namespace

std::string info_state_key(const PointedModel& pm, const std::string& agent)
{
    const PointedModel r = restrict_to_component(pm);
    const auto blocks = bisimulation_classes(r.model);
    const EpistemicModel q = quotient(r.model, blocks);
    std::vector<int> marks(q.size(), 0);
    for (std::size_t w : cell_of(r.model, agent, r.point)) marks[blocks[w]] = 1;
    return canonical_key_marked(q, marks);
}

namespace {

struct BudgetExceeded {};

void prepare(const Game& g, const DistributedOptions& opts)
{
    g.split.validate(g.turn.domain(), g.actions);
    if (opts.check_hypotheses) require_hypotheses(check_hypotheses(g));
}

std::vector<std::size_t> executable_owned(const PointedModel& pm, const ActionModel& a, const std::string& agent)
{
    std::vector<std::size_t> out;
    for (std::size_t x : a.owned_by(Owner::of(agent)))
        if (executable(pm, a, x)) out.push_back(x);
    return out;
}

PointedModel repoint(const PointedModel& pm, std::size_t w)
{
    PointedModel out = pm;
    out.point = w;
    return out;
}

[[noreturn]] void h3_abort(const Game& g, const PointedModel& pm, const std::string& agent, std::size_t x,
                           std::size_t w)
{
    throw HypothesisError("H3 violated: '" + g.actions.names[x] + "' is executable at " +
                          pm.model.names[pm.point] + " but not at " + pm.model.names[w] + ", which " + agent +
                          " cannot tell apart");
}

// Round-bounded search; existential moves branch universally over the mover's cell.
class CellSearch {
public:
    CellSearch(const Game& g, std::size_t bound, const DistributedOptions& opts) : g_(g), bound_(bound), opts_(opts) {}

    Tri solve(const PointedModel& pm, std::size_t i)
    {
        if (eval(pm, g_.goal)) return Tri::Yes;
        if (i >= bound_) return Tri::No;
        const std::string x = mover_at(g_.turn, pm.point_valuation());
        const bool ex = g_.split.is_existential(x);
        const std::string key =
            (ex ? "E" + x + "|" + info_state_key(pm, x) : "U|" + canonical_key(pm)) + "#" + std::to_string(i);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second.first;
        if (++nodes_ > opts_.node_budget) throw BudgetExceeded{};

        const auto moves = executable_owned(pm, g_.actions, x);
        Tri result;
        std::size_t choice = SIZE_MAX;
        if (moves.empty()) {
            result = (!ex && opts_.deadlock == DeadlockMode::Vacuous) ? Tri::Yes : Tri::No;
        } else if (ex) {
            const auto cell = cell_of(pm.model, x, pm.point);
            result = Tri::No;
            for (std::size_t a : moves) {
                Tri r = Tri::Yes;
                for (std::size_t w : cell) {
                    PointedModel there = repoint(pm, w);
                    if (!executable(there, g_.actions, a)) h3_abort(g_, pm, x, a, w);
                    Tri sub = solve(apply_pointed(there, g_.actions, a), i + 1);
                    if (sub == Tri::No) {
                        r = Tri::No;
                        break;
                    }
                    if (sub == Tri::Unknown) r = Tri::Unknown;
                }
                if (r == Tri::Yes) {
                    result = Tri::Yes;
                    choice = a;
                    break;
                }
                if (r == Tri::Unknown) result = Tri::Unknown;
            }
        } else {
            result = Tri::Yes;
            for (std::size_t a : moves) {
                Tri sub = solve(apply_pointed(pm, g_.actions, a), i + 1);
                if (sub == Tri::No) {
                    result = Tri::No;
                    break;
                }
                if (sub == Tri::Unknown) result = Tri::Unknown;
            }
        }
        memo_.emplace(key, std::make_pair(result, choice));
        return result;
    }

    void extract(const PointedModel& pm, std::size_t i, DistributedStrategy& s)
    {
        if (eval(pm, g_.goal) || i >= bound_) return;
        const std::string x = mover_at(g_.turn, pm.point_valuation());
        const bool ex = g_.split.is_existential(x);
        if (ex) {
            const std::string info = info_state_key(pm, x);
            const std::string key = "E" + x + "|" + info + "#" + std::to_string(i);
            if (!visited_.insert(key + "@" + canonical_key(pm)).second) return;
            const std::size_t a = memo_.at(key).second;
            s.assign(x, info + "#" + std::to_string(i), g_.actions.names[a]);
            for (std::size_t w : cell_of(pm.model, x, pm.point))
                extract(apply_pointed(repoint(pm, w), g_.actions, a), i + 1, s);
        } else {
            if (!visited_.insert("U|" + canonical_key(pm) + "#" + std::to_string(i)).second) return;
            for (std::size_t a : executable_owned(pm, g_.actions, x)) extract(apply_pointed(pm, g_.actions, a), i + 1, s);
        }
    }

    std::size_t nodes() const { return nodes_; }

private:
    const Game& g_;
    std::size_t bound_;
    const DistributedOptions& opts_;
    std::unordered_map<std::string, std::pair<Tri, std::size_t>> memo_;
    std::unordered_set<std::string> visited_;
    std::size_t nodes_ = 0;
};

} // namespace

DistributedResult solve_distributed_announcements(const Game& g, const DistributedOptions& opts)
{
    if (!announcements_modulo_turn(g.actions, g.turn))
        throw InputError("the announcement solver requires public announcements (turn assignments excepted)");
    prepare(g, opts);
    DistributedResult r;
    r.method = "fig4";
    // Along a winning play no (model, point) pair repeats; models only shrink and the
    // turn value is common to all worlds, which bounds the play length.
    const std::size_t w = g.initial.model.size();
    const std::size_t agents = g.turn.domain().size();
    const std::size_t bound = opts.rounds ? *opts.rounds : opts.literal_round_bound ? w : agents * w * (w + 1) / 2;
    r.bound = bound;
    CellSearch search(g, bound, opts);
    try {
        r.verdict = search.solve(g.initial, 0);
    } catch (const BudgetExceeded&) {
        r.verdict = Tri::Unknown;
        r.note = "node budget exhausted";
    }
    r.nodes = search.nodes();
    if (r.verdict == Tri::Yes) {
        DistributedStrategy s;
        s.keying = StrategyKeying::InfoRound;
        search.extract(g.initial, 0, s);
        r.strategy = std::move(s);
    }
    return r;
}

// ── fixpoint over points, cells and options ────────────────────────────────

DistributedResult solve_distributed_public(const Game& g, const DistributedOptions& opts)
{
    if (!all_public_actions(g.actions) && classify(g.actions).separable != Tri::Yes)
        throw InputError("the public-action solver requires public or separable actions");
    prepare(g, opts);
    DistributedResult r;
    r.method = "fig5";

    struct Vertex {
        int player = 1;
        bool goal = false;
        std::vector<std::size_t> succ;
        std::vector<std::string> labels;
        std::string agent; // existential mover at cell vertices
        std::string info;  // information-state key at cell vertices
    };
    std::vector<Vertex> vs;
    std::unordered_map<std::string, std::size_t> index;
    std::deque<std::pair<std::size_t, PointedModel>> pending;

    vs.push_back({1, true, {}, {}, {}, {}}); // shared goal vertex
    auto resolve = [&](const PointedModel& pm) -> std::size_t {
        if (eval(pm, g.goal)) return 0;
        const std::string x = mover_at(g.turn, pm.point_valuation());
        const bool ex = g.split.is_existential(x);
        std::string info = ex ? info_state_key(pm, x) : std::string();
        std::string key = ex ? "E" + x + "|" + info : "U|" + canonical_key(pm);
        if (auto it = index.find(key); it != index.end()) return it->second;
        const std::size_t id = vs.size();
        vs.push_back({ex ? 0 : 1, false, {}, {}, ex ? x : std::string(), std::move(info)});
        index.emplace(std::move(key), id);
        pending.emplace_back(id, pm);
        return id;
    };

    const std::size_t root = resolve(g.initial);
    try {
        while (!pending.empty()) {
            auto [id, pm] = std::move(pending.front());
            pending.pop_front();
            if (vs.size() > opts.node_budget) throw BudgetExceeded{};
            const std::string x = mover_at(g.turn, pm.point_valuation());
            const auto moves = executable_owned(pm, g.actions, x);
            if (vs[id].player == 1) {
                for (std::size_t a : moves) {
                    const std::size_t t = resolve(apply_pointed(pm, g.actions, a));
                    vs[id].succ.push_back(t);
                    vs[id].labels.push_back(g.actions.names[a]);
                }
                continue;
            }
            const auto cell = cell_of(pm.model, x, pm.point);
            for (std::size_t a : moves) {
                std::vector<std::size_t> outcomes;
                for (std::size_t w : cell) {
                    PointedModel there = repoint(pm, w);
                    if (!executable(there, g.actions, a)) h3_abort(g, pm, x, a, w);
                    outcomes.push_back(resolve(apply_pointed(there, g.actions, a)));
                }
                const std::size_t opt = vs.size();
                vs.push_back({1, false, std::move(outcomes), {}, {}, {}});
                vs[id].succ.push_back(opt);
                vs[id].labels.push_back(g.actions.names[a]);
            }
        }
    } catch (const BudgetExceeded&) {
        r.verdict = Tri::Unknown;
        r.note = "node budget exhausted";
        r.nodes = vs.size();
        return r;
    }
    r.nodes = vs.size();

    std::vector<int> player;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<bool> goal;
    for (const auto& v : vs) {
        player.push_back(v.player);
        succ.push_back(v.succ);
        goal.push_back(v.goal);
    }
    const AttractorResult att = solve_attractor(player, succ, goal, opts.deadlock);
    r.verdict = att.winning[root] ? Tri::Yes : Tri::No;
    if (r.verdict == Tri::Yes) {
        DistributedStrategy s;
        s.keying = StrategyKeying::InfoState;
        std::vector<bool> seen(vs.size(), false);
        std::deque<std::size_t> walk{root};
        seen[root] = true;
        while (!walk.empty()) {
            const std::size_t v = walk.front();
            walk.pop_front();
            if (vs[v].goal) continue;
            std::vector<std::size_t> next;
            if (player[v] == 0) {
                const std::size_t k = *att.move[v];
                s.assign(vs[v].agent, vs[v].info, vs[v].labels[k]);
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

// ── direct strategy enumeration on the history tree ────────────────────────

namespace {

// Histories are kept uncontracted so that every world of a layer is one history and
// world names spell out the actions taken. Live histories are those consistent with the
// strategy under construction that have not yet reached the goal.
class TreeSearch {
public:
    TreeSearch(const Game& g, const DistributedOptions& opts) : g_(g), opts_(opts) {}

    Tri solve_layer(const EpistemicModel& m, std::vector<bool> live, std::size_t remaining)
    {
        Tri acc = Tri::Yes;
        for (auto& [sub, sublive] : split_layer(m, live, remaining)) {
            Tri r = solve_component(sub, sublive, remaining);
            if (r == Tri::No) return Tri::No;
            if (r == Tri::Unknown) acc = Tri::Unknown;
        }
        return acc;
    }

    void extract_layer(const EpistemicModel& m, std::vector<bool> live, std::size_t remaining, DistributedStrategy& s)
    {
        for (auto& [sub, sublive] : split_layer(m, live, remaining)) extract_component(sub, sublive, remaining, s);
    }

    std::size_t nodes() const { return nodes_; }
    bool cut() const { return cut_; }

private:
    struct Group {
        std::string agent;
        std::string class_key;
        std::vector<std::size_t> members; // live histories of the class
        std::vector<std::size_t> options;
    };

    struct Expansion {
        bool dead = false; // some existential class or universal history has no move
        std::vector<Group> groups;
        std::vector<std::pair<std::size_t, std::size_t>> forced; // universal (history, action)
        Product next;
        std::vector<std::vector<std::size_t>> index; // [world][action] -> product world
    };

    // Drops histories that reached the goal and splits the rest by connected component.
    // Returns no parts when nothing is live; throws Lost when the horizon is exhausted.
    std::vector<std::pair<EpistemicModel, std::vector<bool>>> split_layer(const EpistemicModel& m,
                                                                          std::vector<bool>& live,
                                                                          std::size_t remaining)
    {
        const auto goal = truth_set(m, g_.goal);
        std::vector<std::size_t> seeds;
        for (std::size_t w = 0; w < m.size(); ++w) {
            if (live[w] && goal[w]) live[w] = false;
            if (live[w]) seeds.push_back(w);
        }
        std::vector<std::pair<EpistemicModel, std::vector<bool>>> parts;
        if (seeds.empty()) return parts;
        if (remaining == 0) {
            parts.emplace_back(EpistemicModel{}, std::vector<bool>{}); // empty part marks a loss
            return parts;
        }
        std::vector<bool> taken(m.size(), false);
        for (std::size_t s : seeds) {
            if (taken[s]) continue;
            auto comp = component_of(m, {s});
            std::vector<bool> sublive;
            for (std::size_t w : comp) {
                taken[w] = true;
                sublive.push_back(live[w]);
            }
            parts.emplace_back(induced_submodel(m, comp), std::move(sublive));
        }
        return parts;
    }

    Expansion expand(const EpistemicModel& c, const std::vector<bool>& live)
    {
        Expansion e;
        const ActionModel& a = g_.actions;
        std::vector<std::vector<bool>> exec;
        for (const auto& pre : a.pre) exec.push_back(truth_set(c, pre));
        std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> group_of;
        for (std::size_t h = 0; h < c.size(); ++h) {
            if (!live[h]) continue;
            const std::string x = mover_at(g_.turn, c.valuations[h]);
            const auto owned = a.owned_by(Owner::of(x));
            if (g_.split.is_existential(x)) {
                const auto cls = cell_of(c, x, h);
                auto key = std::make_pair(x, cls);
                auto it = group_of.find(key);
                if (it == group_of.end()) {
                    std::vector<std::string> names;
                    for (std::size_t u : cls) names.push_back(c.names[u]);
                    std::sort(names.begin(), names.end());
                    std::string ck;
                    for (const auto& n : names) ck += (ck.empty() ? "" : ",") + n;
                    it = group_of.emplace(key, e.groups.size()).first;
                    e.groups.push_back({x, ck, {}, owned});
                }
                Group& grp = e.groups[it->second];
                grp.members.push_back(h);
                std::erase_if(grp.options, [&](std::size_t y) { return !exec[y][h]; });
            } else {
                bool any = false;
                for (std::size_t y : owned) {
                    if (!exec[y][h]) continue;
                    e.forced.emplace_back(h, y);
                    any = true;
                }
                if (!any && opts_.deadlock == DeadlockMode::Lose) e.dead = true;
            }
        }
        for (const auto& grp : e.groups)
            if (grp.options.empty()) e.dead = true;
        if (e.dead) return e;
        e.next = product_with_origin(c, a);
        e.index.assign(c.size(), std::vector<std::size_t>(a.size(), SIZE_MAX));
        for (std::size_t k = 0; k < e.next.origin.size(); ++k)
            e.index[e.next.origin[k].first][e.next.origin[k].second] = k;
        return e;
    }

    std::vector<bool> successor_live(const Expansion& e, const std::vector<std::size_t>& choice) const
    {
        std::vector<bool> live(e.next.model.size(), false);
        for (std::size_t k = 0; k < e.groups.size(); ++k)
            for (std::size_t h : e.groups[k].members) live[e.index[h][e.groups[k].options[choice[k]]]] = true;
        for (auto [h, y] : e.forced) live[e.index[h][y]] = true;
        return live;
    }

    static bool advance(std::vector<std::size_t>& choice, const std::vector<Group>& groups)
    {
        for (std::size_t k = choice.size(); k-- > 0;) {
            if (++choice[k] < groups[k].options.size()) return true;
            choice[k] = 0;
        }
        return false;
    }

    Tri solve_component(const EpistemicModel& c, const std::vector<bool>& live, std::size_t remaining)
    {
        if (c.empty()) { // horizon reached with live histories
            cut_ = true;
            return Tri::No;
        }
        std::vector<int> marks(live.begin(), live.end());
        const std::string key = canonical_key_marked(c, marks) + "#" + std::to_string(remaining);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (++nodes_ > opts_.node_budget) throw BudgetExceeded{};

        Expansion e = expand(c, live);
        Tri result = Tri::No;
        if (!e.dead) {
            std::vector<std::size_t> choice(e.groups.size(), 0);
            do {
                Tri r = solve_layer(e.next.model, successor_live(e, choice), remaining - 1);
                if (r == Tri::Yes) {
                    result = Tri::Yes;
                    break;
                }
                if (r == Tri::Unknown) result = Tri::Unknown;
            } while (advance(choice, e.groups));
        }
        memo_.emplace(key, result);
        return result;
    }

    void extract_component(const EpistemicModel& c, const std::vector<bool>& live, std::size_t remaining,
                           DistributedStrategy& s)
    {
        if (c.empty()) return;
        Expansion e = expand(c, live);
        if (e.dead) return;
        std::vector<std::size_t> choice(e.groups.size(), 0);
        do {
            auto next_live = successor_live(e, choice);
            if (solve_layer(e.next.model, next_live, remaining - 1) == Tri::Yes) {
                for (std::size_t k = 0; k < e.groups.size(); ++k)
                    s.assign(e.groups[k].agent, e.groups[k].class_key,
                             g_.actions.names[e.groups[k].options[choice[k]]]);
                extract_layer(e.next.model, next_live, remaining - 1, s);
                return;
            }
        } while (advance(choice, e.groups));
    }

    const Game& g_;
    const DistributedOptions& opts_;
    std::unordered_map<std::string, Tri> memo_;
    std::size_t nodes_ = 0;
    bool cut_ = false;
};

} // namespace

DistributedResult strategy_tree_search(const Game& g, const DistributedOptions& opts)
{
    g.split.validate(g.turn.domain(), g.actions);
    DistributedResult r;
    r.method = "tree";
    r.bound = opts.horizon;
    const PointedModel start = restrict_to_component(g.initial);
    std::vector<bool> live(start.model.size(), false);
    live[start.point] = true;
    TreeSearch search(g, opts);
    try {
        r.verdict = search.solve_layer(start.model, live, opts.horizon);
    } catch (const BudgetExceeded&) {
        r.verdict = Tri::Unknown;
        r.note = "node budget exhausted";
    }
    r.nodes = search.nodes();
    if (r.verdict == Tri::No && search.cut()) {
        r.verdict = Tri::Unknown;
        r.no_within_bound = true;
        r.note = "no uniform strategy wins within " + std::to_string(opts.horizon) + " steps";
    }
    if (r.verdict == Tri::Yes) {
        DistributedStrategy s;
        s.keying = StrategyKeying::HistoryClass;
        search.extract_layer(start.model, live, opts.horizon, s);
        r.strategy = std::move(s);
    }
    return r;
}

DistributedResult solve_distributed(const Game& g, const std::string& method, const DistributedOptions& opts)
{
    if (method == "fig4") return solve_distributed_announcements(g, opts);
    if (method == "fig5") return solve_distributed_public(g, opts);
    if (method == "tree") return strategy_tree_search(g, opts);
    if (method != "auto") throw InputError("unknown distributed method '" + method + "'");
    if (announcements_modulo_turn(g.actions, g.turn)) return solve_distributed_announcements(g, opts);
    if (all_public_actions(g.actions) || classify(g.actions).separable == Tri::Yes)
        return solve_distributed_public(g, opts);
    return strategy_tree_search(g, opts);
}

// ── verification ───────────────────────────────────────────────────────────

namespace {

struct Refuted {
    std::string message;
};
struct OutOfFuel {};

class InfoVerifier {
public:
    InfoVerifier(const Game& g, const DistributedStrategy& s, DeadlockMode deadlock, std::size_t fuel)
        : g_(g), s_(s), deadlock_(deadlock), fuel_(fuel)
    {
    }

    void visit(const PointedModel& pm, std::size_t i)
    {
        if (eval(pm, g_.goal)) return;
        if (i > fuel_) throw OutOfFuel{};
        const bool rounds = s_.keying == StrategyKeying::InfoRound;
        const std::string state = canonical_key(pm) + (rounds ? "#" + std::to_string(i) : std::string());
        if (done_.count(state)) return;
        if (!on_path_.insert(state).second) throw Refuted{"a configuration repeats before the goal holds"};
        const std::string x = mover_at(g_.turn, pm.point_valuation());
        if (g_.split.is_existential(x)) {
            const std::string key = info_state_key(pm, x) + (rounds ? "#" + std::to_string(i) : std::string());
            auto act = s_.lookup(x, key);
            if (!act) throw Refuted{"no strategy entry for agent " + x + " in information state " + key};
            std::size_t a;
            try {
                a = g_.actions.index_of(*act);
            } catch (const InputError&) {
                throw Refuted{"strategy names unknown action '" + *act + "'"};
            }
            if (!(g_.actions.owners[a] == Owner::of(x))) throw Refuted{"action '" + *act + "' is not owned by " + x};
            if (!executable(pm, g_.actions, a)) throw Refuted{"prescribed action '" + *act + "' is not executable"};
            trace.push_back(*act);
            visit(apply_pointed(pm, g_.actions, a), i + 1);
            trace.pop_back();
        } else {
            const auto moves = executable_owned(pm, g_.actions, x);
            if (moves.empty() && deadlock_ == DeadlockMode::Lose)
                throw Refuted{"agent " + x + " has no move and the goal does not hold"};
            for (std::size_t a : moves) {
                trace.push_back(g_.actions.names[a]);
                visit(apply_pointed(pm, g_.actions, a), i + 1);
                trace.pop_back();
            }
        }
        on_path_.erase(state);
        done_.insert(state);
    }

    std::vector<std::string> trace;

private:
    const Game& g_;
    const DistributedStrategy& s_;
    DeadlockMode deadlock_;
    std::size_t fuel_;
    std::unordered_set<std::string> done_, on_path_;
};

// Layer-by-layer replay on uncontracted histories for strategies keyed by history classes.
void verify_layers(const Game& g, const DistributedStrategy& s, DeadlockMode deadlock, std::size_t fuel,
                   EpistemicModel m, std::vector<bool> live, std::vector<std::string>& trace)
{
    for (std::size_t depth = 0;; ++depth) {
        const auto goal = truth_set(m, g.goal);
        std::vector<std::size_t> seeds;
        for (std::size_t w = 0; w < m.size(); ++w) {
            if (live[w] && goal[w]) live[w] = false;
            if (live[w]) seeds.push_back(w);
        }
        if (seeds.empty()) return;
        if (depth >= fuel) throw OutOfFuel{};
        const auto keep = component_of(m, seeds);
        EpistemicModel c = induced_submodel(m, keep);
        std::vector<bool> clive;
        for (std::size_t w : keep) clive.push_back(live[w]);

        Product p = product_with_origin(c, g.actions);
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
        for (std::size_t k = 0; k < p.origin.size(); ++k) index[p.origin[k]] = k;
        std::vector<bool> next(p.model.size(), false);
        for (std::size_t h = 0; h < c.size(); ++h) {
            if (!clive[h]) continue;
            const std::string x = mover_at(g.turn, c.valuations[h]);
            if (g.split.is_existential(x)) {
                std::vector<std::string> names;
                for (std::size_t u : cell_of(c, x, h)) names.push_back(c.names[u]);
                std::sort(names.begin(), names.end());
                std::string key;
                for (const auto& n : names) key += (key.empty() ? "" : ",") + n;
                auto act = s.lookup(x, key);
                if (!act) throw Refuted{"no strategy entry for agent " + x + " at history " + c.names[h]};
                const std::size_t a = g.actions.index_of(*act);
                if (!(g.actions.owners[a] == Owner::of(x)))
                    throw Refuted{"action '" + *act + "' is not owned by " + x};
                auto it = index.find({h, a});
                if (it == index.end())
                    throw Refuted{"prescribed action '" + *act + "' is not executable after " + c.names[h]};
                next[it->second] = true;
            } else {
                bool any = false;
                for (std::size_t a : g.actions.owned_by(Owner::of(x))) {
                    auto it = index.find({h, a});
                    if (it == index.end()) continue;
                    next[it->second] = true;
                    any = true;
                }
                if (!any && deadlock == DeadlockMode::Lose) {
                    trace.push_back(c.names[h]);
                    throw Refuted{"agent " + x + " has no move after " + c.names[h] + " and the goal does not hold"};
                }
            }
        }
        m = std::move(p.model);
        live = std::move(next);
    }
}

} // namespace

VerifyResult verify_distributed_strategy(const Game& g, const DistributedStrategy& s, DeadlockMode deadlock,
                                         std::size_t fuel)
{
    g.split.validate(g.turn.domain(), g.actions);
    VerifyResult r;
    std::vector<std::string> trace;
    try {
        if (s.keying == StrategyKeying::HistoryClass) {
            const PointedModel start = restrict_to_component(g.initial);
            std::vector<bool> live(start.model.size(), false);
            live[start.point] = true;
            verify_layers(g, s, deadlock, fuel, start.model, live, trace);
        } else {
            InfoVerifier v(g, s, deadlock, fuel);
            try {
                v.visit(g.initial, 0);
            } catch (...) {
                trace = v.trace;
                throw;
            }
        }
        r.status = Tri::Yes;
        r.message = "every outcome reaches the goal";
    } catch (const Refuted& e) {
        r.status = Tri::No;
        r.message = e.message;
    } catch (const OutOfFuel&) {
        r.status = Tri::Unknown;
        r.message = "fuel exhausted after " + std::to_string(fuel) + " steps";
    }
    r.trace = std::move(trace);
    return r;
}

} // namespace delg
