// errors.hpp — exception types shared by the diamag library

#pragma once

#include <stdexcept>
#include <string>

namespace diamag {

// Invalid lattice, circuit or run configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Charge matrix not positive definite, or the quadratic form has a negative
// eigenvalue / wrong number of zero modes.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Power-law, extrapolation or decoupling-law fit could not be performed.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace diamag
