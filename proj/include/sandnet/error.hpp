#pragma once

#include <stdexcept>
#include <string>

namespace sandnet {

/// Input or configuration rejected by a contract check. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input; `line()` is the 1-based physical line, 0 when not tied to a line.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An engine invariant broke mid-run (negative sand, runaway cascade). Indicates a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace sandnet
