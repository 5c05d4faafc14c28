#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

// Common base so callers can catch any library error in one handler.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requires a nonzero polynomial (e.g. monic, real_roots).
struct ZeroPolynomialError : Error {
    using Error::Error;
};

// A polynomial that must have all-real zeros does not.  Always thrown,
// never silently repaired.
struct NotHyperbolicError : Error {
    using Error::Error;
};

// Vector arguments have incompatible lengths.
struct LengthMismatchError : Error {
    using Error::Error;
};

}  // namespace hslab
