#pragma once

#include <stdexcept>
#include <string>

namespace eop {

/// A parameter choice violates a constraint of the construction (maps to CLI exit 1).
class ConstraintError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An identity that must hold by construction did not (maps to CLI exit 2).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace eop
