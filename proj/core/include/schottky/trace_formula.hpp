#pragma once

#include <complex>
#include <vector>

#include "schottky/schottky_group.hpp"
#include "schottky/zeta.hpp"

namespace schottky {

// Band-limited test data concentrated near length T: the weight applied to
// a geodesic of length x is amplitude * e^{-i xi x} * bump(x - T), and the
// dual weight applied to a resonance s is psi_eval below.
struct TestFunction {
    double xi = 0.0;
    double T = 0.0;
    double amplitude = 1.0;
};

// Plateau bump: 1 on [-1,1], 0 outside (-2,2), smooth in between.
double bump(double x);

// phihat(w) = integral of e^{-i w u} bump(u) over [-2,2]; entire in w.
cplx bump_fourier(cplx w);

// psi(s) = amplitude * e^{-i xi T} e^{s T} phihat(xi + i s).
cplx psi_eval(const TestFunction& tf, cplx s);

// Sum of weight_sum(l)/(1 - e^{-l}) * e^{-i xi l} bump(l - T) over the
// length spectrum; the spectrum is enumerated to T+2, past the bump support.
cplx geodesic_side(const SchottkyGroup& g, const TestFunction& tf);

struct TraceCheckOptions {
    double epsilon = 0.05;        // initial offset of the verification line
    double covered_height = 0.0;  // certified resonance height; 0 = max |Im| in the list
    double tail_tolerance = 1e-10;
    double min_abs_on_line = 1e-6;
    int basis_order = 0;          // for the verification-line zeta values
};

struct TraceCheckReport {
    cplx geodesic_value;
    cplx resonance_value;
    cplx residual;            // geodesic - resonance
    double rho = 0.0;
    double epsilon_used = 0.0;  // final offset after any shifts
    double bound_estimate = 0.0;
};

// Compares the geodesic sum against the resonance sum over {Re s > rho}
// (conjugates completed), and integrates the explicit error bound along
// the line Re s = rho + epsilon after checking that the line avoids zeros
// and the supplied resonance list reaches high enough for the tail.
TraceCheckReport resonance_check(const SchottkyGroup& g, const TestFunction& tf, double rho,
                                 const std::vector<Resonance>& resonances,
                                 const TraceCheckOptions& opts = {});

struct MeanSquare {
    double value = 0.0;     // Gaussian-averaged squared geodesic sum
    double diagonal = 0.0;  // self-pair contribution only
};

// Closed form of sqrt(sigma) * integral e^{-sigma xi^2} |S_{xi,T}|^2 d xi,
// where S is the geodesic side as a function of the frequency xi.
MeanSquare mean_square_G(const SchottkyGroup& g, double sigma, double T);

struct MomentWindow {
    double T = 0.0;
    double m_sum = 0.0;   // sum of multiplicities with ell in [T-1, T+1]
    double m2_sum = 0.0;  // sum of squared multiplicities
    int distinct = 0;     // distinct merged lengths in the window
};

struct MomentReport {
    MomentWindow at_T;
    std::vector<MomentWindow> ladder;  // T' = 3, 3.5, ..., T (empty windows skipped)
    double m2_exponent = 0.0;          // LSQ slope of log m2_sum against T'
    double distinct_exponent = 0.0;    // LSQ slope of log distinct against T'
    int max_trace_cluster = 0;         // integer-trace groups: max #traces per unit interval
};

MomentReport multiplicity_moments(const SchottkyGroup& g, double T);

} // namespace schottky
