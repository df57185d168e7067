// errors.hpp - exception types shared across the eitmem modules.

#pragma once

#include <stdexcept>
#include <string>

namespace eitmem {

// Malformed SystemConfig (missing schedule, duplicate edge, unknown id, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Time (or other argument) outside the domain of a function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Mixing angles are undefined because some control field vanishes.
struct DegenerateAngleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Schedules violate a protocol requirement (e.g. ratio lock).
struct ProtocolError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dark-subspace dimension changed along a tracked path.
struct DegeneracyCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Zero-norm or rank-deficient quantum state.
struct DegenerateStateError : std::domain_error {
    using std::domain_error::domain_error;
};

// Cat state does not have the structure an operation expects.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Fock-space truncation would be exceeded.
struct TruncationError : std::range_error {
    using std::range_error::range_error;
};

// Fock-space dimension guard exceeded.
struct GuardError : std::length_error {
    using std::length_error::length_error;
};

}  // namespace eitmem
