#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcsparse {

/// Raised on malformed MatrixMarket input. Carries the 1-based line number
/// of the offending line (0 when no line applies, e.g. truncated stream).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Raised when an encoded matrix violates its structural invariants.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on tile/operand dimension mismatches.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on out-of-domain arguments.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tcsparse
