#pragma once

#include <string>

#include "schottky/schottky_group.hpp"

namespace schottky {

// Topological-pressure estimate at inverse-temperature parameter x.
// `value` is the n-th root estimator log(S_n)/n for the cyclic weighted
// word sum S_n(x); `ratio` is the successive-quotient estimator
// log(S_n) - log(S_{n-1}), which converges geometrically and is exact for
// the combinatorial count at x = 0 on even n.  error_bar is the spread
// between the two.
struct PressureEstimate {
    double x = 0.0;
    double value = 0.0;
    double ratio = 0.0;
    int n_used = 0;
    double error_bar = 0.0;
};

// Dimension of the limit set computed two independent ways: a bisection
// of the pressure ratio estimator in x (word-sum route) and the zero of
// the leading transfer-operator eigenvalue (eigenvalue route).
struct DimensionResult {
    double delta = 0.0;
    double delta_eigenvalue = 0.0;
    std::string method;     // "word-sum" (primary) cross-checked vs "eigenvalue"
    double tolerance = 0.0; // achieved agreement bound
    int n_used = 0;
};

// Pressure of -x log|B'| from cyclically reduced words up to length n_max.
// Requires n_max >= 3; rank-1 groups are rejected (pressure degenerates).
PressureEstimate pressure(const SchottkyGroup& g, double x, int n_max = 14);

// Hausdorff dimension of the limit set as the unique zero of the pressure.
// The word-sum route bisects the ratio estimator at n_max-4, n_max-2 and
// n_max and extrapolates; the eigenvalue route must agree within 10*tol or
// a TruncationError is raised.
DimensionResult hausdorff_dimension(const SchottkyGroup& g, double tol = 1e-6, int n_max = 16);

} // namespace schottky
