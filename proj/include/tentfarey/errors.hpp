#pragma once

#include <stdexcept>
#include <string>

namespace tf {

// Bad arguments: out-of-range parameters, malformed strings, wrong representation.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A request that exceeds a backend's documented capacity (e.g. exact-tree depth).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical domain problems such as a vanishing Mobius denominator.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tf
