#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "delg/action.hpp"
#include "delg/model.hpp"

namespace delg {

struct PlanOptions {
    std::optional<std::size_t> bound; // plan-length bound; defaults depend on the regime
    std::size_t default_bound = 12;   // used when actions may expand the model
    bool contract = true;             // contract models before keying the memo table
};

struct PlanResult {
    Tri verdict = Tri::Unknown;
    std::vector<std::string> plan; // action names, when verdict is Yes
    std::string regime;            // "announcements", "non-expanding" or "bounded"
    std::optional<std::size_t> bound;
    std::size_t explored = 0;
};

// Breadth-first search over pointed models with memoization on canonical keys. The
// shortest plan is returned; among equally short plans the first in action order wins.
PlanResult plan_exists(const PointedModel& pm, const ActionModel& a, const Formula& goal, const PlanOptions& opts = {});

struct PlanCheck {
    bool ok = false;
    std::string message; // first failing step
};

PlanCheck verify_plan(const PointedModel& pm, const ActionModel& a, const std::vector<std::string>& plan,
                      const Formula& goal);

} // namespace delg
