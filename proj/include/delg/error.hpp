#pragma once

#include <stdexcept>
#include <string>

namespace delg {

// Raised for malformed concrete syntax (formulas, problem files, reduction inputs).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

// Raised when an input is well-formed but violates the preconditions of an operation.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the distributed solvers when (H1)-(H3) or the turn discipline fail.
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace delg
