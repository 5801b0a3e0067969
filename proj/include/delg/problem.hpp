#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delg/action.hpp"
#include "delg/distributed.hpp"
#include "delg/model.hpp"

namespace delg {

enum class ProblemMode { Plan, Controller, Distributed };
const char* to_string(ProblemMode m);

// One self-contained instance file.
struct Problem {
    std::vector<std::string> agents;
    PointedModel model;
    ActionModel actions;
    std::optional<std::size_t> action_point;
    ProblemMode mode = ProblemMode::Controller;
    std::optional<FiniteDomainVar> turn;
    TeamSplit split;
    Formula goal;
    std::map<std::string, std::string> options;
    std::vector<std::string> header; // comment lines emitted before the body
};

// Throws ParseError with line and column, or InputError for unresolved references.
Problem parse_problem(std::string_view text);
Problem load_problem(const std::string& path);
std::string print_problem(const Problem& p);

// FNV-1a over the printed problem; binds certificates to instances.
std::uint64_t instance_hash(const Problem& p);
std::string hex64(std::uint64_t v);

// Distributed view of a problem; throws InputError when the turn variable is missing.
Game game_of(const Problem& p);

Problem problem_from_controller(const PointedModel& pm, const ActionModel& a, const Formula& goal,
                                std::vector<std::string> header = {});
Problem problem_from_game(const Game& g, std::vector<std::string> header = {});

} // namespace delg
