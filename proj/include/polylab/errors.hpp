#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polylab {

/// Malformed polynomial/factor text. Carries the byte offset of the offending token.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A requested computation exceeds the configured table/search budget.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands belong to different prime fields or have mismatched arity.
class field_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation precondition was violated (inverse of zero, bad derivation order, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace polylab
