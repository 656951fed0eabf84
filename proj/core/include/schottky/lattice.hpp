#pragma once

#include <complex>
#include <vector>

#include "schottky/schottky_group.hpp"

namespace schottky {

struct OrbitElement {
    std::vector<int> letters;
    double distance = 0.0;
};

struct OrbitCount {
    double T = 0.0;
    long long count = 0;          // reduced words (identity included) with d(z, g z') <= T
    long long visited_nodes = 0;  // tree nodes whose orbit point was evaluated
    long long pruned_nodes = 0;   // nodes whose subtree was certified out of range
    std::vector<OrbitElement> elements;  // filled only when requested
};

struct OrbitOptions {
    bool keep_elements = false;
    long long node_budget = 50000000;
    int max_depth = 400;
};

// Exact orbit counting N(T; z, z') by depth-first search over reduced words.
// A subtree is cut only when the closed-form hyperbolic distance from z to
// the disc certified to contain every descendant orbit point exceeds T, so
// the count is exact.  z' must lie outside the Schottky discs (the
// certificate needs it); exceeding the node budget raises BudgetError.
OrbitCount orbit_count(const SchottkyGroup& g, const HPoint& z, const HPoint& zp, double T,
                       const OrbitOptions& options = {});

struct PoincarePartial {
    cplx value;                  // sum of e^{-s d(z, g z')} over words of length <= depth
    double last_shell_abs = 0.0; // magnitude of the deepest shell, a divergence probe
    int depth = 0;
};

// Partial Poincare series by full enumeration (no pruning); depth is capped
// at 16 because the shell sizes grow geometrically.
PoincarePartial poincare_partial(const SchottkyGroup& g, cplx s, const HPoint& z,
                                 const HPoint& zp, int depth);

// One exponential term of a counting model: T^k e^{exponent T} for k up to
// degree.  Exponents are always prescribed, never fitted.
struct ExpansionTerm {
    cplx exponent;
    int degree = 0;
};

struct ExpansionModel {
    std::vector<ExpansionTerm> terms;
    // Fitted coefficients, ordered per term and per degree; complex
    // exponents contribute a cosine and a sine coefficient per degree.
    std::vector<double> coefficients;
    double fit_T_min = 0.0;
    double fit_T_max = 0.0;
};

// Least-squares fit of the coefficients only.  Throws std::invalid_argument
// when the system is degenerate (too few points or rank-deficient basis).
ExpansionModel fit_expansion(const std::vector<OrbitCount>& counts,
                             const std::vector<ExpansionTerm>& terms);

double eval_expansion(const ExpansionModel& model, double T);

struct ResidualReport {
    std::vector<double> T;
    std::vector<double> residual;                    // N(T) - model(T)
    std::vector<std::pair<double, double>> beta_sup; // (beta, sup_T |R(T)| e^{-beta T})
    int sign_changes = 0;
};

ResidualReport residual_analysis(const std::vector<OrbitCount>& counts,
                                 const ExpansionModel& model,
                                 const std::vector<double>& betas);

} // namespace schottky
