#include "schottky/quadrature.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "schottky/errors.hpp"

namespace schottky {
namespace {

// One Simpson panel; recurses while the Richardson estimate exceeds the
// panel tolerance.  Generic over double / complex<double>.
template <typename V>
V simpson_rec(const std::function<V(double)>& f, double a, double b,
              V fa, V fm, V fb, V whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const V flm = f(lm);
    const V frm = f(rm);
    const V left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const V right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const V refined = left + right;
    // Panels can never resolve below roundoff of their own magnitude, so the
    // acceptance threshold is floored there; otherwise kinks (e.g. |f| of an
    // oscillating integrand) recurse past any depth.
    const double floor_tol =
        64.0 * std::numeric_limits<double>::epsilon() *
        (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb)) * (b - a) / 6.0;
    if (std::abs(refined - whole) <= 15.0 * std::max(tol, floor_tol) ||
        (b - a) < 1e-14 * (1.0 + std::abs(m)))
        return refined + (refined - whole) / 15.0;
    if (depth >= max_depth)
        throw TruncationError("adaptive Simpson: max recursion depth reached before tolerance");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

template <typename V>
V simpson(const std::function<V(double)>& f, double a, double b, double abs_tol, int max_depth) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
    if (a == b) return V{};
    const V fa = f(a);
    const V fm = f(0.5 * (a + b));
    const V fb = f(b);
    const V whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    return simpson<double>(f, a, b, abs_tol, max_depth);
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double abs_tol, int max_depth) {
    return simpson<std::complex<double>>(f, a, b, abs_tol, max_depth);
}

double integrate_line(const std::function<double(double)>& f, double initial_half_width,
                      double abs_tol, double tail_tol) {
    if (!(initial_half_width > 0.0)) throw std::invalid_argument("integrate_line: width must be positive");
    double X = initial_half_width;
    double total = integrate(f, -X, X, abs_tol);
    for (int round = 0; round < 24; ++round) {
        const double shell = integrate(f, X, 2.0 * X, abs_tol)
                           + integrate(f, -2.0 * X, -X, abs_tol);
        total += shell;
        X *= 2.0;
        if (std::abs(shell) < tail_tol) return total;
    }
    throw TruncationError("integrate_line: integrand tail does not decay below tolerance");
}

} // namespace schottky
