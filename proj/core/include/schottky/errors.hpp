#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

// Base class for all library failures so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation at (or numerically too close to) the pole of a Moebius map.
struct PoleError : Error {
    using Error::Error;
};

// Invalid or infeasible geometry: overlapping discs, bad pairing, width out
// of range, matrices that do not define a Schottky configuration.
struct GeometryError : Error {
    using Error::Error;
};

// Principal-branch power weights would be ambiguous (affine disc image meets
// the negative real axis and no rotation fixes it).
struct BranchError : Error {
    using Error::Error;
};

// Parameter outside the mathematical domain of an operation (e.g. product
// evaluation left of the convergence abscissa, dimension outside (0,1)).
struct RegionError : Error {
    using Error::Error;
};

// A search exhausted its node budget before completing.
struct BudgetError : Error {
    using Error::Error;
};

// A resonance rectangle is too short for the requested tail tolerance.
struct CoverageError : Error {
    using Error::Error;
};

// Contour integration failed: contour passes through a zero, or the winding
// number does not settle to an integer.
struct ContourError : Error {
    using Error::Error;
};

// Word-length cutoff required to certify completeness exceeds the configured
// maximum; results would be silently truncated.
struct TruncationError : Error {
    using Error::Error;
};

} // namespace schottky
