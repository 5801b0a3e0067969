#include "delg/arena.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "delg/error.hpp"

namespace delg {

const char* to_string(DeadlockMode d) { return d == DeadlockMode::Lose ? "lose" : "vacuous"; }

DeadlockMode parse_deadlock(const std::string& s)
{
    if (s == "lose") return DeadlockMode::Lose;
    if (s == "vacuous") return DeadlockMode::Vacuous;
    throw InputError("deadlock mode must be 'lose' or 'vacuous', got '" + s + "'");
}

std::size_t GameArena::edge_count() const
{
    std::size_t n = 0;
    for (const auto& s : succ) n += s.size();
    return n;
}

std::optional<std::size_t> GameArena::find(const std::string& name) const
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::string valuation_token(const Valuation& v)
{
    if (v.empty()) return "-";
    std::string out;
    for (const auto& p : v) {
        if (!out.empty()) out += '+';
        out += p;
    }
    return out;
}

// ── attractor ──────────────────────────────────────────────────────────────

AttractorResult solve_attractor(const std::vector<int>& player, const std::vector<std::vector<std::size_t>>& succ,
                                const std::vector<bool>& goal, DeadlockMode deadlock)
{
    const std::size_t n = player.size();
    AttractorResult r;
    r.winning.assign(n, false);
    r.rank.assign(n, 0);
    r.move.assign(n, std::nullopt);

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pred(n); // (vertex, edge position)
    std::vector<std::size_t> pending(n);
    for (std::size_t v = 0; v < n; ++v) {
        pending[v] = succ[v].size();
        for (std::size_t k = 0; k < succ[v].size(); ++k) pred[succ[v][k]].emplace_back(v, k);
    }
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (goal[v] || (player[v] == 1 && succ[v].empty() && deadlock == DeadlockMode::Vacuous)) {
            r.winning[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (auto [u, k] : pred[v]) {
            if (r.winning[u]) continue;
            if (player[u] == 0) {
                r.winning[u] = true;
                r.rank[u] = r.rank[v] + 1;
                r.move[u] = k;
                queue.push_back(u);
            } else if (--pending[u] == 0) {
                r.winning[u] = true;
                r.rank[u] = r.rank[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return r;
}

AttractorResult solve_attractor(const GameArena& g, const std::vector<bool>& goal, DeadlockMode deadlock)
{
    return solve_attractor(g.player, g.succ, goal, deadlock);
}

// ── arena construction ─────────────────────────────────────────────────────

namespace {

std::set<std::string> agents_of(const EpistemicModel& m, const ActionModel& a)
{
    std::set<std::string> out;
    for (const auto& [agent, rel] : m.relations) out.insert(agent);
    for (const auto& [agent, rel] : a.relations) out.insert(agent);
    return out;
}

std::size_t saturating_bound(std::size_t worlds, std::size_t actions, std::size_t exponent)
{
    if (exponent >= 60) return std::numeric_limits<std::size_t>::max();
    std::size_t pow = std::size_t{1} << exponent;
    if (actions != 0 && pow > (std::numeric_limits<std::size_t>::max() - worlds) / actions)
        return std::numeric_limits<std::size_t>::max();
    return worlds + actions * pow;
}

} // namespace

std::size_t arena_size_bound(std::size_t worlds, std::size_t actions, std::size_t atoms)
{
    return saturating_bound(worlds, actions, atoms + 1);
}

std::size_t multiarena_size_bound(std::size_t worlds, std::size_t actions, std::size_t atoms)
{
    return saturating_bound(worlds, actions, atoms);
}

GameArena build_arena(const PointedModel& pm, const ActionModel& a)
{
    if (!all_propositional(a)) throw InputError("arena construction needs a propositional action model");
    const EpistemicModel& m = pm.model;
    GameArena g;
    struct Key {
        std::size_t action;
        Valuation v;
        int side;
        bool operator<(const Key& o) const
        {
            if (action != o.action) return action < o.action;
            if (side != o.side) return side < o.side;
            return v < o.v;
        }
    };
    std::map<Key, std::size_t> index;
    std::vector<Key> keys;
    for (std::size_t w = 0; w < m.size(); ++w) {
        g.names.push_back("w:" + m.names[w]);
        g.player.push_back(0);
        g.valuations.push_back(m.valuations[w]);
        keys.push_back({SIZE_MAX, {}, 0});
    }
    g.succ.resize(m.size());
    g.labels.resize(m.size());
    g.initial = pm.point;

    auto intern = [&](std::size_t action, Valuation v, int side) {
        Key k{action, std::move(v), side};
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        std::size_t id = g.names.size();
        g.names.push_back(a.names[action] + "/" + valuation_token(k.v) + "/" + std::to_string(side));
        g.player.push_back(side);
        g.valuations.push_back(k.v);
        g.succ.emplace_back();
        g.labels.emplace_back();
        keys.push_back(k);
        index.emplace(std::move(k), id);
        return id;
    };

    const auto ctr = a.owned_by(Owner::controller());
    const auto env = a.owned_by(Owner::environment());
    std::deque<std::size_t> queue;
    for (std::size_t w = 0; w < m.size(); ++w) {
        for (std::size_t x : ctr) {
            if (!eval_valuation(m.valuations[w], a.pre[x])) continue;
            std::size_t before = g.names.size();
            std::size_t t = intern(x, post_valuation(m.valuations[w], a, x), 1);
            g.succ[w].push_back(t);
            g.labels[w].push_back(a.names[x]);
            if (t == before) queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        const int side = g.player[v];
        const Valuation val = g.valuations[v];
        for (std::size_t x : side == 0 ? ctr : env) {
            if (!eval_valuation(val, a.pre[x])) continue;
            std::size_t before = g.names.size();
            std::size_t t = intern(x, post_valuation(val, a, x), 1 - side);
            g.succ[v].push_back(t);
            g.labels[v].push_back(a.names[x]);
            if (t == before) queue.push_back(t);
        }
    }

    const std::size_t n = g.names.size();
    for (const auto& agent : agents_of(m, a)) {
        Relation rm = m.relation(agent);
        Relation ra = a.relation(agent);
        Relation r(n);
        for (std::size_t w = 0; w < m.size(); ++w)
            for (std::size_t u : rm.successors(w)) r.add(w, u);
        for (std::size_t v = m.size(); v < n; ++v)
            for (std::size_t u = m.size(); u < n; ++u)
                if (keys[v].side == keys[u].side && ra.has(keys[v].action, keys[u].action)) r.add(v, u);
        g.relations.emplace(agent, std::move(r));
    }
    return g;
}

// ── depth-one knowledge expansion ──────────────────────────────────────────

namespace {

bool eval_info(const Formula& f, const Valuation& here, const std::vector<std::string>& agents,
               const std::vector<std::vector<std::size_t>>& info, const std::vector<Valuation>& vals)
{
    switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return here.count(f.name()) != 0;
    case FormulaKind::Not: return !eval_info(f.child(), here, agents, info, vals);
    case FormulaKind::And:
        return eval_info(f.lhs(), here, agents, info, vals) && eval_info(f.rhs(), here, agents, info, vals);
    case FormulaKind::Or:
        return eval_info(f.lhs(), here, agents, info, vals) || eval_info(f.rhs(), here, agents, info, vals);
    case FormulaKind::Implies:
        return !eval_info(f.lhs(), here, agents, info, vals) || eval_info(f.rhs(), here, agents, info, vals);
    case FormulaKind::Knows:
    case FormulaKind::Poss: {
        auto it = std::find(agents.begin(), agents.end(), f.name());
        const auto& set = info.at(static_cast<std::size_t>(it - agents.begin()));
        const bool universal = f.kind() == FormulaKind::Knows;
        for (std::size_t u : set)
            if (eval_valuation(vals[u], f.child()) != universal) return !universal;
        return universal;
    }
    }
    return false;
}

} // namespace

ExpandedArena expand_knowledge_depth1(const GameArena& g, const Formula& goal)
{
    if (modal_depth(goal) > 1) throw InputError("knowledge expansion supports objectives of modal depth at most 1");
    ExpandedArena x;
    x.base_valuations = g.valuations;
    for (const auto& agent : delg::agents_of(goal)) x.agents.push_back(agent);

    std::vector<Relation> rels;
    for (const auto& agent : x.agents) {
        auto it = g.relations.find(agent);
        rels.push_back(it == g.relations.end() ? Relation::identity(g.size()) : it->second);
    }

    using State = std::pair<std::size_t, std::vector<std::vector<std::size_t>>>;
    std::map<State, std::size_t> index;
    std::deque<std::size_t> queue;
    auto intern = [&](State s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        std::size_t id = x.base.size();
        std::string name = g.names[s.first];
        for (std::size_t b = 0; b < x.agents.size(); ++b) {
            name += ";" + x.agents[b] + "=";
            for (std::size_t k = 0; k < s.second[b].size(); ++k) {
                if (k) name += ',';
                name += g.names[s.second[b][k]];
            }
        }
        x.arena.names.push_back(std::move(name));
        x.arena.player.push_back(g.player[s.first]);
        x.arena.valuations.push_back(g.valuations[s.first]);
        x.arena.succ.emplace_back();
        x.arena.labels.emplace_back();
        x.base.push_back(s.first);
        x.info.push_back(s.second);
        index.emplace(std::move(s), id);
        queue.push_back(id);
        return id;
    };

    State init{g.initial, {}};
    for (const auto& r : rels) init.second.push_back(r.successors(g.initial));
    x.arena.initial = intern(std::move(init));

    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        const std::size_t v = x.base[id];
        for (std::size_t k = 0; k < g.succ[v].size(); ++k) {
            const std::size_t u = g.succ[v][k];
            State next{u, {}};
            for (std::size_t b = 0; b < rels.size(); ++b) {
                std::vector<std::size_t> set;
                for (std::size_t u2 : rels[b].successors(u)) {
                    for (std::size_t from : x.info[id][b]) {
                        const auto& s = g.succ[from];
                        if (std::find(s.begin(), s.end(), u2) != s.end()) {
                            set.push_back(u2);
                            break;
                        }
                    }
                }
                next.second.push_back(std::move(set));
            }
            std::size_t t = intern(std::move(next));
            x.arena.succ[id].push_back(t);
            x.arena.labels[id].push_back(g.labels[v][k]);
        }
    }
    for (std::size_t v = 0; v < x.base.size(); ++v) x.goal.push_back(eval_expanded(x, v, goal));
    return x;
}

bool eval_expanded(const ExpandedArena& x, std::size_t vertex, const Formula& f)
{
    if (modal_depth(f) > 1) throw InputError("expanded arenas evaluate formulas of modal depth at most 1");
    for (const auto& agent : delg::agents_of(f))
        if (std::find(x.agents.begin(), x.agents.end(), agent) == x.agents.end())
            throw InputError("agent '" + agent + "' is not tracked by this expansion");
    return eval_info(f, x.arena.valuations[vertex], x.agents, x.info[vertex], x.base_valuations);
}

// ── multi-player arena ─────────────────────────────────────────────────────

MultiArena build_multiplayer_arena(const PointedModel& pm, const ActionModel& a, const FiniteDomainVar& turn)
{
    if (!all_propositional(a)) throw InputError("arena construction needs a propositional action model");
    const EpistemicModel& m = pm.model;
    MultiArena g;
    auto owner_of = [&](const Valuation& v, const std::string& where) {
        auto who = turn.decode(v);
        if (!who) throw InputError("vertex " + where + " does not determine whose turn it is");
        return *who;
    };
    std::map<std::pair<std::size_t, Valuation>, std::size_t> index;
    std::vector<std::size_t> action_of;
    for (std::size_t w = 0; w < m.size(); ++w) {
        g.names.push_back("w:" + m.names[w]);
        g.owner.push_back(owner_of(m.valuations[w], g.names.back()));
        g.valuations.push_back(m.valuations[w]);
        g.succ.emplace_back();
        g.labels.emplace_back();
        action_of.push_back(SIZE_MAX);
    }
    g.initial = pm.point;
    std::deque<std::size_t> queue;
    for (std::size_t w = 0; w < m.size(); ++w) queue.push_back(w);
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        const Valuation val = g.valuations[v];
        for (std::size_t x = 0; x < a.size(); ++x) {
            if (!eval_valuation(val, a.pre[x])) continue;
            auto key = std::make_pair(x, post_valuation(val, a, x));
            auto it = index.find(key);
            std::size_t t;
            if (it == index.end()) {
                t = g.names.size();
                g.names.push_back(a.names[x] + "/" + valuation_token(key.second));
                g.owner.push_back(owner_of(key.second, g.names.back()));
                g.valuations.push_back(key.second);
                g.succ.emplace_back();
                g.labels.emplace_back();
                action_of.push_back(x);
                index.emplace(std::move(key), t);
                queue.push_back(t);
            } else {
                t = it->second;
            }
            g.succ[v].push_back(t);
            g.labels[v].push_back(a.names[x]);
        }
    }
    const std::size_t n = g.names.size();
    for (const auto& agent : agents_of(m, a)) {
        Relation rm = m.relation(agent);
        Relation ra = a.relation(agent);
        Relation r(n);
        for (std::size_t w = 0; w < m.size(); ++w)
            for (std::size_t u : rm.successors(w)) r.add(w, u);
        for (std::size_t v = m.size(); v < n; ++v)
            for (std::size_t u = m.size(); u < n; ++u)
                if (ra.has(action_of[v], action_of[u])) r.add(v, u);
        g.relations.emplace(agent, std::move(r));
    }
    return g;
}

} // namespace delg
