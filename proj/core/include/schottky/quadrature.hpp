#pragma once

#include <complex>
#include <functional>

namespace schottky {

// Adaptive Simpson integration to an absolute tolerance.  The recursion
// splits until the Richardson error estimate of each panel is below its
// share of the tolerance; throws TruncationError when max_depth is hit
// before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 40);

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double abs_tol, int max_depth = 40);

// Integral over the whole real line of a rapidly decaying function: the
// symmetric window [-X, X] is doubled until the newly added shells
// contribute less than tail_tol.
double integrate_line(const std::function<double(double)>& f, double initial_half_width,
                      double abs_tol, double tail_tol);

} // namespace schottky
