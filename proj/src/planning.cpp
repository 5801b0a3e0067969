#include "delg/planning.hpp"

#include <deque>
#include <unordered_set>

#include "delg/error.hpp"

namespace delg {

PlanResult plan_exists(const PointedModel& pm, const ActionModel& a, const Formula& goal, const PlanOptions& opts)
{
    PlanResult r;
    std::optional<std::size_t> bound = opts.bound;
    // Announcements only delete worlds, so |W| steps suffice; other non-expanding
    // models have finitely many keys and need no bound at all.
    bool exact_at_bound = false;
    if (all_public_announcements(a)) {
        r.regime = "announcements";
        if (!bound) bound = pm.model.size();
        exact_at_bound = *bound >= pm.model.size();
    } else if (all_public_actions(a) || classify(a).separable == Tri::Yes) {
        r.regime = "non-expanding";
    } else {
        r.regime = "bounded";
        if (!bound) bound = opts.default_bound;
    }
    r.bound = bound;

    if (eval(pm, goal)) {
        r.verdict = Tri::Yes;
        r.explored = 1;
        return r;
    }

    struct Node {
        PointedModel pm;
        std::size_t depth;
        std::size_t parent;
        std::size_t action;
    };
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    const ApplyOptions apply{true, opts.contract};
    nodes.push_back({pm, 0, SIZE_MAX, SIZE_MAX});
    seen.insert(canonical_key(pm, opts.contract));
    bool cut = false;

    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (bound && nodes[head].depth >= *bound) {
            cut = true;
            continue;
        }
        for (std::size_t x = 0; x < a.size(); ++x) {
            if (!executable(nodes[head].pm, a, x)) continue;
            PointedModel next = apply_pointed(nodes[head].pm, a, x, apply);
            std::string key = canonical_key(next, opts.contract);
            if (!seen.insert(std::move(key)).second) continue;
            const bool done = eval(next, goal);
            nodes.push_back({std::move(next), nodes[head].depth + 1, head, x});
            if (done) {
                r.verdict = Tri::Yes;
                for (std::size_t k = nodes.size() - 1; nodes[k].parent != SIZE_MAX; k = nodes[k].parent)
                    r.plan.insert(r.plan.begin(), a.names[nodes[k].action]);
                r.explored = nodes.size();
                return r;
            }
        }
    }
    r.explored = nodes.size();
    r.verdict = (!cut || exact_at_bound) ? Tri::No : Tri::Unknown;
    return r;
}

PlanCheck verify_plan(const PointedModel& pm, const ActionModel& a, const std::vector<std::string>& plan,
                      const Formula& goal)
{
    PointedModel cur = pm;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        std::size_t x;
        try {
            x = a.index_of(plan[i]);
        } catch (const InputError& e) {
            return {false, "step " + std::to_string(i + 1) + ": " + e.what()};
        }
        if (!executable(cur, a, x))
            return {false, "step " + std::to_string(i + 1) + ": '" + plan[i] + "' is not executable"};
        cur = apply_pointed(cur, a, x);
    }
    if (!eval(cur, goal)) return {false, "goal does not hold after the last step"};
    return {true, {}};
}

} // namespace delg
