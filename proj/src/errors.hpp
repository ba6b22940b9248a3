#pragma once

#include <stdexcept>
#include <string>

namespace gca {

// Input that does not conform to a grammar (graph files, head/tail specs).
// Carries a 1-based line number when one is known; 0 means "not line based".
class parse_error : public std::runtime_error {
public:
    parse_error(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Structurally malformed arguments: unknown vertex ids, non-composable
// arrow sequences, dimension mismatches and the like.
class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A mathematical precondition of an operation does not hold for the input
// (graph not simple, NW empty, weight not conservative, ...). These map to
// exit code 3 at the CLI.
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gca
