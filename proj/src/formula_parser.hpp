#pragma once

#include <string>
#include <vector>

#include "delg/formula.hpp"
#include "lexer.hpp"

namespace delg::detail {

// Parses the longest formula prefix of the stream; stops at the first token that
// cannot continue a formula.
Formula parse_formula(TokenStream& ts, const std::vector<std::string>* agents);

} // namespace delg::detail
