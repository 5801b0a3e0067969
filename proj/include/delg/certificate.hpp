#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "delg/controller.hpp"
#include "delg/distributed.hpp"

namespace delg {

// Text form:
//   delg-strategy 1
//   instance <16 hex digits>
//   method <name>
//   deadlock lose|vacuous
//   kind <strategy kind> / index round|parity      (controller strategies)
//   keying <strategy keying>                       (distributed strategies)
//   key <key> -> <action>                          (controller entries)
//   key <agent> <key> -> <action>                  (distributed entries)
struct Certificate {
    std::uint64_t instance = 0;
    std::string method;
    DeadlockMode deadlock = DeadlockMode::Lose;
    std::variant<ControllerStrategy, DistributedStrategy> strategy;
};

std::string write_certificate(const Certificate& c);
// Throws ParseError on malformed input and InputError on conflicting entries.
Certificate read_certificate(std::string_view text);

} // namespace delg
