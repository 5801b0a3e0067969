#pragma once

// Test-only reference implementations. They follow the definitions literally and
// share no code with the solvers beyond the data types.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "delg/action.hpp"
#include "delg/arena.hpp"
#include "delg/model.hpp"

namespace delg::testing {

using Mask = std::uint32_t;

inline bool rel_has(const EpistemicModel& m, const std::string& agent, std::size_t u, std::size_t v)
{
    auto it = m.relations.find(agent);
    if (it == m.relations.end()) return u == v;
    return it->second.has(u, v);
}

// Truth at `w` in the submodel induced by the worlds of `alive`.
inline bool naive_eval(const EpistemicModel& m, Mask alive, std::size_t w, const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return m.valuations[w].count(f.name()) != 0;
    case FormulaKind::Not: return !naive_eval(m, alive, w, f.child());
    case FormulaKind::And: return naive_eval(m, alive, w, f.lhs()) && naive_eval(m, alive, w, f.rhs());
    case FormulaKind::Or: return naive_eval(m, alive, w, f.lhs()) || naive_eval(m, alive, w, f.rhs());
    case FormulaKind::Implies: return !naive_eval(m, alive, w, f.lhs()) || naive_eval(m, alive, w, f.rhs());
    case FormulaKind::Knows:
        for (std::size_t u = 0; u < m.size(); ++u)
            if ((alive >> u & 1) && rel_has(m, f.name(), w, u) && !naive_eval(m, alive, u, f.child())) return false;
        return true;
    case FormulaKind::Poss:
        for (std::size_t u = 0; u < m.size(); ++u)
            if ((alive >> u & 1) && rel_has(m, f.name(), w, u) && naive_eval(m, alive, u, f.child())) return true;
        return false;
    }
    return false;
}

inline Mask full_mask(std::size_t n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

inline bool naive_eval(const EpistemicModel& m, std::size_t w, const Formula& f)
{
    return naive_eval(m, full_mask(m.size()), w, f);
}

struct NaiveProduct {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<Valuation> valuations;
};

// Product update by the textbook definition (worlds only; relations are compared pairwise).
inline NaiveProduct naive_product(const EpistemicModel& m, const ActionModel& a)
{
    NaiveProduct out;
    for (std::size_t w = 0; w < m.size(); ++w)
        for (std::size_t x = 0; x < a.size(); ++x) {
            if (!naive_eval(m, w, a.pre[x])) continue;
            Valuation v = m.valuations[w];
            for (const auto& [p, f] : a.post[x]) {
                if (naive_eval(m, w, f))
                    v.insert(p);
                else
                    v.erase(p);
            }
            out.pairs.emplace_back(w, x);
            out.valuations.push_back(v);
        }
    return out;
}

inline bool action_rel_has(const ActionModel& a, const std::string& agent, std::size_t x, std::size_t y)
{
    auto it = a.relations.find(agent);
    if (it == a.relations.end()) return x == y;
    return it->second.has(x, y);
}

// Controller game with public announcements, solved as a least fixpoint over
// (surviving worlds, side to move). The point is world `pm.point` of the original model.
inline bool announcement_game_oracle(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                     DeadlockMode deadlock)
{
    const EpistemicModel& m = pm.model;
    const std::size_t n = m.size();
    const Mask all = full_mask(n);
    std::vector<Mask> states;
    for (Mask s = 0; s <= all; ++s)
        if (s >> pm.point & 1) states.push_back(s);
    std::set<std::pair<Mask, int>> win;
    for (Mask s : states)
        if (naive_eval(m, s, pm.point, goal)) {
            win.insert({s, 0});
            win.insert({s, 1});
        }
    auto successors = [&](Mask s, int side) {
        std::vector<Mask> out;
        for (std::size_t x = 0; x < a.size(); ++x) {
            const bool mine = a.owners[x].kind == (side == 0 ? OwnerKind::Controller : OwnerKind::Environment);
            if (!mine || !naive_eval(m, s, pm.point, a.pre[x])) continue;
            Mask t = 0;
            for (std::size_t w = 0; w < n; ++w)
                if ((s >> w & 1) && naive_eval(m, s, w, a.pre[x])) t |= Mask{1} << w;
            out.push_back(t);
        }
        return out;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (Mask s : states)
            for (int side = 0; side < 2; ++side) {
                if (win.count({s, side})) continue;
                const auto next = successors(s, side);
                bool ok;
                if (next.empty()) {
                    ok = side == 1 && deadlock == DeadlockMode::Vacuous;
                } else if (side == 0) {
                    ok = false;
                    for (Mask t : next) ok = ok || win.count({t, 1});
                } else {
                    ok = true;
                    for (Mask t : next) ok = ok && win.count({t, 0});
                }
                if (ok) {
                    win.insert({s, side});
                    changed = true;
                }
            }
    }
    return win.count({all, 0}) != 0;
}

} // namespace delg::testing
