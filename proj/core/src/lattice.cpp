#include "schottky/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>

#include "schottky/errors.hpp"

namespace schottky {
namespace {

double hp_distance(cplx z, cplx w) {
    return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

// Distance from z to the region under the disc (center c on the real axis,
// radius r).  The region boundary is a geodesic, so the distance has the
// closed form sinh(d) = (|z-c|^2 - r^2) / (2 r Im z); exact, hence a sound
// pruning certificate.
double distance_to_disc(cplx z, double c, double r) {
    const double q = std::norm(z - c) - r * r;
    if (q <= 0.0) return 0.0;
    return std::asinh(q / (2.0 * r * z.imag()));
}

cplx transfer_coords(const SchottkyGroup& g, const HPoint& pt, const char* who) {
    if (pt.model != g.model) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s: point model does not match the group model", who);
        throw std::invalid_argument(buf);
    }
    const HPoint hp = to_transfer_point(g, pt);
    if (!hp.valid(1e-12)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s: point is not strictly inside the model domain", who);
        throw std::invalid_argument(buf);
    }
    return hp.z;
}

// Basis row of the expansion model at T; layout must match fit_expansion.
void expansion_row(const std::vector<ExpansionTerm>& terms, double T, std::vector<double>& row) {
    row.clear();
    for (const auto& term : terms) {
        double tk = 1.0;
        for (int k = 0; k <= term.degree; ++k) {
            const double base = tk * std::exp(term.exponent.real() * T);
            if (std::abs(term.exponent.imag()) < 1e-15) {
                row.push_back(base);
            } else {
                row.push_back(base * std::cos(term.exponent.imag() * T));
                row.push_back(base * std::sin(term.exponent.imag() * T));
            }
            tk *= T;
        }
    }
}

} // namespace

OrbitCount orbit_count(const SchottkyGroup& g, const HPoint& z, const HPoint& zp, double T,
                       const OrbitOptions& options) {
    if (!(T >= 0.0)) throw std::invalid_argument("orbit_count: T must be nonnegative");
    const cplx zt = transfer_coords(g, z, "orbit_count");
    const cplx zpt = transfer_coords(g, zp, "orbit_count");
    const int A = g.alphabet_size();
    const int p = g.rank;
    const auto& discs = g.transfer.discs;
    for (const auto& d : discs)
        if (std::abs(zpt - d.center) <= d.radius + 1e-12)
            throw std::invalid_argument(
                "orbit_count: z' lies inside a Schottky disc, so subtree pruning "
                "cannot be certified; move the base point");

    OrbitCount out;
    out.T = T;

    // Identity element.
    ++out.visited_nodes;
    if (hp_distance(zt, zpt) <= T) {
        ++out.count;
        if (options.keep_elements) out.elements.push_back({{}, hp_distance(zt, zpt)});
    }

    std::vector<int> w(options.max_depth), cursor(options.max_depth, 0);
    std::vector<Moebius> prod(options.max_depth + 1);
    prod[0] = Moebius();
    int d = 0;
    while (true) {
        int b = cursor[d];
        if (d > 0 && b == (w[d - 1] + p) % A) ++b;
        if (b >= A) {
            if (d == 0) break;
            --d;
            ++cursor[d];
            continue;
        }
        w[d] = b;
        cursor[d] = b;
        prod[d + 1] = prod[d] * g.transfer.branch[b];

        if (++out.visited_nodes > options.node_budget) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "orbit_count: node budget exhausted (partial count %lld at %lld nodes)",
                          out.count, out.visited_nodes);
            throw BudgetError(buf);
        }
        const double dist = hp_distance(zt, prod[d + 1](zpt));
        if (dist <= T) {
            ++out.count;
            if (options.keep_elements)
                out.elements.push_back({std::vector<int>(w.begin(), w.begin() + d + 1), dist});
        }

        // Every proper descendant's orbit point lies in the image under the
        // first d letters of the disc paired with letter b.
        const Disc reach = map_disc(prod[d], discs[(b + p) % A]);
        if (distance_to_disc(zt, reach.center.real(), reach.radius) > T) {
            ++out.pruned_nodes;
            ++cursor[d];
        } else if (d + 1 >= options.max_depth) {
            throw BudgetError("orbit_count: maximum word depth reached");
        } else {
            ++d;
            cursor[d] = 0;
        }
    }
    return out;
}

PoincarePartial poincare_partial(const SchottkyGroup& g, cplx s, const HPoint& z,
                                 const HPoint& zp, int depth) {
    if (depth < 1 || depth > 16)
        throw std::invalid_argument("poincare_partial: depth must be in [1,16]");
    const cplx zt = transfer_coords(g, z, "poincare_partial");
    const cplx zpt = transfer_coords(g, zp, "poincare_partial");
    const int A = g.alphabet_size();
    const int p = g.rank;

    std::vector<cplx> shell(depth + 1, cplx(0.0, 0.0));
    shell[0] = std::exp(-s * hp_distance(zt, zpt));

    std::vector<int> w(depth), cursor(depth, 0);
    std::vector<Moebius> prod(depth + 1);
    prod[0] = Moebius();
    int d = 0;
    while (true) {
        int b = cursor[d];
        if (d > 0 && b == (w[d - 1] + p) % A) ++b;
        if (b >= A) {
            if (d == 0) break;
            --d;
            ++cursor[d];
            continue;
        }
        w[d] = b;
        cursor[d] = b;
        prod[d + 1] = prod[d] * g.transfer.branch[b];
        shell[d + 1] += std::exp(-s * hp_distance(zt, prod[d + 1](zpt)));
        if (d + 1 < depth) {
            ++d;
            cursor[d] = 0;
        } else {
            ++cursor[d];
        }
    }

    PoincarePartial out;
    out.depth = depth;
    for (const cplx& sh : shell) out.value += sh;
    out.last_shell_abs = std::abs(shell[depth]);
    return out;
}

ExpansionModel fit_expansion(const std::vector<OrbitCount>& counts,
                             const std::vector<ExpansionTerm>& terms) {
    if (terms.empty()) throw std::invalid_argument("fit_expansion: no terms");
    std::vector<double> row;
    expansion_row(terms, 1.0, row);
    const int cols = (int)row.size();
    const int n = (int)counts.size();
    if (n < cols)
        throw std::invalid_argument("fit_expansion: fewer count points than coefficients");

    Eigen::MatrixXd X(n, cols);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        expansion_row(terms, counts[i].T, row);
        for (int j = 0; j < cols; ++j) X(i, j) = row[j];
        y(i) = double(counts[i].count);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < cols)
        throw std::invalid_argument("fit_expansion: degenerate design matrix "
                                    "(coincident exponents or too-narrow T range)");
    const Eigen::VectorXd c = qr.solve(y);

    ExpansionModel model;
    model.terms = terms;
    model.coefficients.assign(c.data(), c.data() + cols);
    auto minmax = std::minmax_element(counts.begin(), counts.end(),
                                      [](const OrbitCount& a, const OrbitCount& b) { return a.T < b.T; });
    model.fit_T_min = minmax.first->T;
    model.fit_T_max = minmax.second->T;
    return model;
}

double eval_expansion(const ExpansionModel& model, double T) {
    std::vector<double> row;
    expansion_row(model.terms, T, row);
    if (row.size() != model.coefficients.size())
        throw std::invalid_argument("eval_expansion: model coefficients do not match its terms");
    double v = 0.0;
    for (size_t i = 0; i < row.size(); ++i) v += row[i] * model.coefficients[i];
    return v;
}

ResidualReport residual_analysis(const std::vector<OrbitCount>& counts,
                                 const ExpansionModel& model,
                                 const std::vector<double>& betas) {
    if (counts.empty()) throw std::invalid_argument("residual_analysis: no counts");
    std::vector<const OrbitCount*> sorted;
    for (const auto& c : counts) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(),
              [](const OrbitCount* a, const OrbitCount* b) { return a->T < b->T; });

    ResidualReport report;
    for (const OrbitCount* c : sorted) {
        report.T.push_back(c->T);
        report.residual.push_back(double(c->count) - eval_expansion(model, c->T));
    }
    for (double beta : betas) {
        double sup = 0.0;
        for (size_t i = 0; i < report.T.size(); ++i)
            sup = std::max(sup, std::abs(report.residual[i]) * std::exp(-beta * report.T[i]));
        report.beta_sup.emplace_back(beta, sup);
    }
    double prev = 0.0;
    for (double r : report.residual) {
        if (r == 0.0) continue;
        if (prev != 0.0 && r * prev < 0.0) ++report.sign_changes;
        prev = r;
    }
    return report;
}

} // namespace schottky
