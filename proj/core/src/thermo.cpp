#include "schottky/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schottky/errors.hpp"
#include "schottky/words.hpp"
#include "schottky/zeta.hpp"

namespace schottky {
namespace {

// Successive-quotient pressure estimator log S_n - log S_{n-1}.
double pressure_ratio(const SchottkyGroup& g, double x, int n) {
    return log_cyclic_word_sum(g, x, n) - log_cyclic_word_sum(g, x, n - 1);
}

// Zero in x of the level-n ratio estimator.  The estimator decreases in x,
// is positive at x = 0 (word counts grow) and negative once x exceeds the
// dimension, so a sign-change bisection applies.
double bisect_ratio_zero(const SchottkyGroup& g, int n, double tol) {
    double lo = 0.0, hi = 1.0;
    if (!(pressure_ratio(g, lo, n) > 0.0))
        throw GeometryError("dimension bisection: pressure at x=0 is not positive");
    while (pressure_ratio(g, hi, n) > 0.0) {
        hi += 0.5;
        if (hi > 4.0) throw GeometryError("dimension bisection: no sign change for x in [0,4]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (pressure_ratio(g, mid, n) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Aitken delta-squared step with guards against non-geometric tails.
double aitken(double a0, double a1, double a2) {
    const double d1 = a1 - a0;
    const double d2 = a2 - a1;
    const double den = d2 - d1;
    if (den == 0.0 || std::abs(den) < 0.05 * std::abs(d2)) return a2;
    const double extr = a2 - d2 * d2 / den;
    if (std::abs(extr - a2) > 10.0 * std::abs(d2)) return a2;
    return extr;
}

} // namespace

PressureEstimate pressure(const SchottkyGroup& g, double x, int n_max) {
    if (n_max < 3) throw std::invalid_argument("pressure: n_max must be at least 3");
    PressureEstimate est;
    est.x = x;
    est.n_used = n_max;
    const double log_sn = log_cyclic_word_sum(g, x, n_max);
    const double log_sp = log_cyclic_word_sum(g, x, n_max - 1);
    est.value = log_sn / n_max;
    est.ratio = log_sn - log_sp;
    est.error_bar = std::abs(est.value - est.ratio);
    return est;
}

DimensionResult hausdorff_dimension(const SchottkyGroup& g, double tol, int n_max) {
    if (g.rank < 2)
        throw std::invalid_argument(
            "hausdorff_dimension: rank-1 groups have a two-point limit set of dimension 0");
    if (n_max < 7) throw std::invalid_argument("hausdorff_dimension: n_max must be at least 7");
    if (!(tol > 0.0)) throw std::invalid_argument("hausdorff_dimension: tol must be positive");

    const double bis_tol = std::min(tol * 1e-3, 1e-11);

    // Two interleaved level ladders, each Aitken-extrapolated; the ladders
    // share no levels, so their spread is an honest error estimate for the
    // word-sum route.
    const double even_extr = aitken(bisect_ratio_zero(g, n_max - 4, bis_tol),
                                    bisect_ratio_zero(g, n_max - 2, bis_tol),
                                    bisect_ratio_zero(g, n_max, bis_tol));
    const double odd_extr = aitken(bisect_ratio_zero(g, n_max - 5, bis_tol),
                                   bisect_ratio_zero(g, n_max - 3, bis_tol),
                                   bisect_ratio_zero(g, n_max - 1, bis_tol));
    const double spread = std::abs(even_extr - odd_extr);
    if (spread > 5.0 * tol)
        throw TruncationError("hausdorff_dimension: word-sum ladders disagree; increase n_max");
    const double delta_words = 0.5 * (even_extr + odd_extr);

    const double delta_eigen = dimension_from_operator(g);
    if (std::abs(delta_words - delta_eigen) > 10.0 * tol)
        throw TruncationError(
            "hausdorff_dimension: word-sum and eigenvalue routes disagree; "
            "increase n_max or the basis order");

    DimensionResult result;
    result.delta = delta_words;
    result.delta_eigenvalue = delta_eigen;
    result.method = "word-sum";
    result.tolerance = std::max(spread, std::abs(delta_words - delta_eigen));
    result.n_used = n_max;
    return result;
}

} // namespace schottky
