#include "schottky/trace_formula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "schottky/errors.hpp"
#include "schottky/quadrature.hpp"
#include "schottky/words.hpp"

namespace schottky {
namespace {

double smooth_step_piece(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Exact second derivative of bump, used to evaluate its Fourier transform by
// parts when the direct oscillatory integral would drown in roundoff.
double bump_dd(double x) {
    const double t = std::abs(x);
    if (t <= 1.0 || t >= 2.0) return 0.0;
    const double u = 2.0 - t, v = t - 1.0;
    const double A = std::exp(-1.0 / u), B = std::exp(-1.0 / v);
    if (A == 0.0 || B == 0.0) return 0.0;
    const double iu2 = 1.0 / (u * u), iv2 = 1.0 / (v * v);
    const double g = iu2 + iv2;
    const double h = iv2 - iu2;
    const double gp = 2.0 / (u * u * u) - 2.0 / (v * v * v);
    const double D = A + B;
    const double Dp = B * iv2 - A * iu2;
    return A * B * (-h * g - gp + 2.0 * g * Dp / D) / (D * D);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

MomentWindow window_at(const std::vector<LengthEntry>& entries, double Tc) {
    MomentWindow w;
    w.T = Tc;
    for (const auto& e : entries) {
        if (std::abs(e.ell - Tc) > 1.0) continue;
        w.m_sum += e.multiplicity;
        w.m2_sum += double(e.multiplicity) * double(e.multiplicity);
        ++w.distinct;
    }
    return w;
}

} // namespace

double bump(double x) {
    const double ax = std::abs(x);
    if (ax <= 1.0) return 1.0;
    if (ax >= 2.0) return 0.0;
    const double up = smooth_step_piece(2.0 - ax);
    return up / (up + smooth_step_piece(ax - 1.0));
}

cplx bump_fourier(cplx w) {
    if (std::abs(w.real()) <= 8.0)
        return integrate_complex(
            [w](double u) { return std::exp(-cplx(0.0, 1.0) * w * u) * bump(u); },
            -2.0, 2.0, 1e-12);
    // Integration by parts twice: the transform equals -w^{-2} times the
    // transform of the second derivative, whose integral carries a roundoff
    // floor |w|^2 smaller than the direct form.
    const auto f = [w](double u) { return std::exp(-cplx(0.0, 1.0) * w * u) * bump_dd(u); };
    const cplx parts = integrate_complex(f, -2.0, -1.0, 1e-12) + integrate_complex(f, 1.0, 2.0, 1e-12);
    return -parts / (w * w);
}

cplx psi_eval(const TestFunction& tf, cplx s) {
    const cplx phase = std::exp(cplx(0.0, -tf.xi * tf.T));
    return tf.amplitude * phase * std::exp(s * tf.T) * bump_fourier(tf.xi + cplx(0.0, 1.0) * s);
}

cplx geodesic_side(const SchottkyGroup& g, const TestFunction& tf) {
    const auto entries = length_spectrum(g, tf.T + 2.0);
    cplx sum(0.0, 0.0);
    for (const auto& e : entries) {
        const double f = bump(e.ell - tf.T);
        if (f == 0.0) continue;
        const double w = e.weight_sum / (1.0 - std::exp(-e.ell));
        sum += w * f * std::exp(cplx(0.0, -tf.xi * e.ell));
    }
    return tf.amplitude * sum;
}

TraceCheckReport resonance_check(const SchottkyGroup& g, const TestFunction& tf, double rho,
                                 const std::vector<Resonance>& resonances,
                                 const TraceCheckOptions& opts) {
    if (!(opts.epsilon > 0.0))
        throw std::invalid_argument("resonance_check: epsilon must be positive");

    const auto complete = with_conjugates(resonances);
    const double delta = dimension_from_operator(g);

    TraceCheckReport report;
    report.rho = rho;
    report.geodesic_value = geodesic_side(g, tf);

    cplx res_sum(0.0, 0.0);
    double listed_height = 0.0;
    for (const auto& r : complete) {
        listed_height = std::max(listed_height, std::abs(r.s.imag()));
        if (r.s.real() > rho) res_sum += double(r.order) * psi_eval(tf, r.s);
    }
    report.resonance_value = res_sum;
    report.residual = report.geodesic_value - report.resonance_value;

    // The resonance sum is certified only up to the covered height; estimate
    // the weight the test function leaves above it, with the counting
    // density modeled as 4 (1+x)^delta, and insist it is negligible.
    const double H = opts.covered_height > 0.0 ? opts.covered_height : listed_height;
    const auto tail_f = [&](double x) {
        return 4.0 * std::pow(1.0 + x, delta) * std::abs(psi_eval(tf, cplx(delta, x)));
    };
    double tail = 0.0;
    double X = std::max(H, 1.0);
    bool tail_decayed = false;
    // The shell quadrature only needs to resolve the comparison against
    // tail_tolerance; the floor keeps it above the Fourier-transform noise.
    const double shell_tol = std::max(1e-12, 2.5e-4 * opts.tail_tolerance);
    for (int octave = 0; octave < 3; ++octave) {
        const double shell = 2.0 * integrate(tail_f, X, 2.0 * X, shell_tol);
        tail += shell;
        // |psi| decays faster than any power, so once a shell is small the
        // remaining octaves are dominated by a geometric cover.
        if (shell < 0.25 * opts.tail_tolerance) {
            tail += shell;
            tail_decayed = true;
            break;
        }
        X *= 2.0;
    }
    if (!tail_decayed || tail > opts.tail_tolerance)
        throw CoverageError("resonance_check: resonance list does not reach high enough "
                            "for the requested tail tolerance");

    // Move the verification line off any zero of the determinant.
    double eps_used = opts.epsilon;
    bool line_ok = false;
    for (int shift = 0; shift <= 4; ++shift) {
        eps_used = opts.epsilon * (1.0 + 0.25 * shift);
        const double line_re = rho + eps_used;
        double min_abs = std::numeric_limits<double>::infinity();
        const double hi = std::max(H, 1.0);
        const int samples = 33;
        for (int i = 0; i < samples; ++i) {
            const double x = hi * i / (samples - 1);
            min_abs = std::min(min_abs,
                               std::abs(zeta_fredholm(g, cplx(line_re, x), opts.basis_order).value));
        }
        if (min_abs > opts.min_abs_on_line) { line_ok = true; break; }
    }
    if (!line_ok)
        throw ContourError("resonance_check: every candidate verification line passes "
                           "near a zero; change epsilon");
    report.epsilon_used = eps_used;

    const double line_re = rho + eps_used;
    // psi carries amplitude e^{line_re T}; resolve the bound relative to it.
    const double bound_scale = std::max(1.0, std::exp(line_re * tf.T));
    report.bound_estimate = integrate_line(
        [&](double x) {
            return std::pow(1.0 + std::abs(x), delta) * std::abs(psi_eval(tf, cplx(line_re, x)));
        },
        8.0, 1e-9 * bound_scale, 3e-9 * bound_scale);
    return report;
}

MeanSquare mean_square_G(const SchottkyGroup& g, double sigma, double T) {
    if (!(sigma > 0.0)) throw std::invalid_argument("mean_square_G: sigma must be positive");
    const auto entries = length_spectrum(g, T + 2.0);
    std::vector<double> ell, w;
    for (const auto& e : entries) {
        const double f = bump(e.ell - T);
        if (f == 0.0) continue;
        ell.push_back(e.ell);
        w.push_back(f * e.weight_sum / (1.0 - std::exp(-e.ell)));
    }
    MeanSquare out;
    const double root_pi = std::sqrt(M_PI);
    for (size_t i = 0; i < ell.size(); ++i) {
        out.diagonal += root_pi * w[i] * w[i];
        for (size_t j = 0; j < ell.size(); ++j) {
            const double d = ell[i] - ell[j];
            out.value += root_pi * w[i] * w[j] * std::exp(-d * d / (4.0 * sigma));
        }
    }
    return out;
}

MomentReport multiplicity_moments(const SchottkyGroup& g, double T) {
    if (!(T > 2.0)) throw std::invalid_argument("multiplicity_moments: T must exceed 2");
    const auto entries = length_spectrum(g, T + 1.0);

    MomentReport report;
    report.at_T = window_at(entries, T);
    std::vector<double> ts, log_m2, log_distinct;
    for (double Tc = 3.0; Tc <= T + 1e-9; Tc += 0.5) {
        const MomentWindow w = window_at(entries, Tc);
        if (w.m_sum == 0.0) continue;
        report.ladder.push_back(w);
        ts.push_back(Tc);
        log_m2.push_back(std::log(w.m2_sum));
        log_distinct.push_back(std::log(double(w.distinct)));
    }
    report.m2_exponent = lsq_slope(ts, log_m2);
    report.distinct_exponent = lsq_slope(ts, log_distinct);

    if (g.integer_trace) {
        std::map<long long, int> per_interval;  // floor(trace) -> #distinct traces
        std::vector<double> traces;
        for (const auto& e : entries) traces.push_back(2.0 * std::cosh(0.5 * e.ell));
        std::sort(traces.begin(), traces.end());
        traces.erase(std::unique(traces.begin(), traces.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                     traces.end());
        for (double t : traces) ++per_interval[(long long)std::floor(t)];
        for (const auto& kv : per_interval)
            report.max_trace_cluster = std::max(report.max_trace_cluster, kv.second);
    }
    return report;
}

} // namespace schottky
