#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "schottky/schottky_group.hpp"

namespace schottky {

enum class ZetaMethod { Cycle, Fredholm, Product };

struct ZetaEvaluation {
    cplx s;
    cplx value;
    ZetaMethod method = ZetaMethod::Cycle;
    int order = 0;              // cumulant cutoff N or basis order M
    double error_estimate = 0.0;
    std::vector<std::string> warnings;
};

// Finite section of the weighted composition operator in the per-disc
// monomial bases ((z - c_i)/r_i)^k, k < basis_order; coefficients are
// grouped disc by disc, so the matrix has size (2p * basis_order)^2.
struct TransferMatrix {
    cplx s;
    int basis_order = 0;
    Eigen::MatrixXcd matrix;
    std::vector<std::string> warnings;
};

struct Rect {
    double re_min = 0.0, re_max = 0.0;
    double im_min = 0.0, im_max = 0.0;
};

struct Resonance {
    cplx s;
    int order = 0;
    double newton_residual = 0.0;
};

struct ResonanceSearch {
    std::vector<Resonance> resonances;  // sorted by (Im, Re)
    int boundary_winding = 0;           // argument-principle count on the outer contour
    Rect rect{};                        // contour actually integrated (after nudges)
    double grid_step = 0.0;
    int basis_order = 0;
    double grid_median_abs = 0.0;       // median |Z| on the scan grid, a scale reference
    std::vector<std::string> warnings;
};

struct StripCensus {
    int count = 0;                              // zeros with Re >= sigma, 0 <= Im <= T
    double loglog_slope = 0.0;                  // LSQ slope of log count against log height
    std::vector<std::pair<double, int>> ladder; // (height, cumulative count)
};

struct StripBound {
    double theorem_value = 0.0;     // proved resonance-free half-plane abscissa gap
    double conjectural_value = 0.0; // delta/2, reported separately as conjectural
};

// Trace of the n-th power of the weighted transfer operator at parameter s,
// assembled from primitive conjugacy classes of word length dividing n.
cplx transfer_trace(const SchottkyGroup& g, cplx s, int n);

// Zeta via the cycle expansion: Plemelj-Smithies cumulants of the traces
// up to order N.  error_estimate is the magnitude of the last cumulant;
// warnings flag divergence (three consecutive growing cumulants).
ZetaEvaluation zeta_cycle(const SchottkyGroup& g, cplx s, int N);

// Euler product over primitive classes of length <= T_cut and shifts
// n <= n_cut; only valid in the half-plane Re(s) > delta + 0.1.
ZetaEvaluation zeta_product(const SchottkyGroup& g, cplx s, double T_cut, int n_cut);

TransferMatrix build_transfer_matrix(const SchottkyGroup& g, cplx s, int basis_order);

// Zeta as det(I - L_s) of the finite section; basis_order 0 uses the
// group's default; error_estimate compares orders M and M-2.
ZetaEvaluation zeta_fredholm(const SchottkyGroup& g, cplx s, int basis_order = 0);

// Dominant eigenvalue by power iteration; real positive at real s.
cplx leading_eigenvalue(const TransferMatrix& tm);

// Dimension of the limit set as the parameter where the leading
// eigenvalue equals one (root-finding on [0,1]); cached per group.
double dimension_from_operator(const SchottkyGroup& g, double tol = 1e-10, int basis_order = 0);

// Zero search: coarse |Z| grid scan, Newton refinement with central
// differences, per-zero winding numbers, and a whole-rectangle
// argument-principle cross-check that must match the refined count.
ResonanceSearch find_resonances(const SchottkyGroup& g, const Rect& rect,
                                double grid_step = 0.05, int basis_order = 0);

// Completes a list computed on the upper half of a symmetric box with the
// conjugate partners of every zero off the real axis.
std::vector<Resonance> with_conjugates(const std::vector<Resonance>& upper, double tol = 1e-9);

StripCensus strip_census(const std::vector<Resonance>& resonances, double sigma, double T);

// Proved zero-free strip width for a surface of limit-set dimension delta
// in (0,1), together with the conjectural delta/2 value.
StripBound theorem_strip(double delta);

} // namespace schottky
