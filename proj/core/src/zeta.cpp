#include "schottky/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "schottky/errors.hpp"
#include "schottky/words.hpp"
#include "group_cache.hpp"

namespace schottky {
namespace {

constexpr double kSampleRadiusFactor = 0.75;

std::vector<int> divisors_of(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

// Fourier analysis matrix F(k, q) = r^{-k} e^{-2 pi i k q / Q} / Q turning
// circle samples into monomial coefficients; depends only on the basis
// order, so it is cached.
const Eigen::MatrixXcd& dft_matrix(int M) {
    static std::mutex mu;
    static std::map<int, Eigen::MatrixXcd> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    const int Q = 4 * M;
    Eigen::MatrixXcd F(M, Q);
    for (int k = 0; k < M; ++k) {
        const double scale = std::pow(kSampleRadiusFactor, -k) / Q;
        for (int q = 0; q < Q; ++q) {
            const double th = -2.0 * M_PI * k * q / Q;
            F(k, q) = scale * cplx(std::cos(th), std::sin(th));
        }
    }
    return cache.emplace(M, std::move(F)).first->second;
}

int effective_order(const SchottkyGroup& g, int basis_order, const char* who) {
    if (basis_order == 0) return g.transfer.default_basis_order;
    if (basis_order < 4) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s: basis order must be at least 4", who);
        throw std::invalid_argument(buf);
    }
    return basis_order;
}

cplx det_of(const SchottkyGroup& g, cplx s, int M) {
    const TransferMatrix tm = build_transfer_matrix(g, s, M);
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Identity(tm.matrix.rows(), tm.matrix.cols()) - tm.matrix;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(K).determinant();
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

// Least-squares slope of y against x.
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
    if (sxx == 0.0) return 0.0;
    return sxy / sxx;
}

// --- argument tracking -----------------------------------------------------

// Raised when the determinant magnitude drops below the floor at a contour
// sample; callers react by nudging or shrinking the contour.
struct NearZeroSample {};

class ContourTracker {
public:
    ContourTracker(const SchottkyGroup& g, int M, double floor_abs)
        : g_(g), M_(M), floor_abs_(floor_abs) {}

    // Total argument increment / 2pi along the closed polyline.
    double winding(const std::vector<cplx>& corners, double initial_spacing) {
        double total = 0.0;
        for (size_t i = 0; i < corners.size(); ++i) {
            const cplx a = corners[i];
            const cplx b = corners[(i + 1) % corners.size()];
            const int pieces = std::max(1, (int)std::ceil(std::abs(b - a) / initial_spacing));
            cplx prev = a;
            cplx fprev = eval(prev);
            for (int k = 1; k <= pieces; ++k) {
                const cplx next = a + (b - a) * (double(k) / pieces);
                const cplx fnext = eval(next);
                total += segment_arg(prev, fprev, next, fnext, 0);
                prev = next;
                fprev = fnext;
            }
        }
        return total / (2.0 * M_PI);
    }

private:
    cplx eval(cplx s) {
        const cplx z = det_of(g_, s, M_);
        if (!(std::abs(z) > floor_abs_)) throw NearZeroSample{};
        return z;
    }

    double segment_arg(cplx a, cplx fa, cplx b, cplx fb, int depth) {
        const double dphi = std::arg(fb / fa);
        const double ratio = std::abs(fb) / std::abs(fa);
        // depth 0 always splits: a piece straddling a zero symmetrically can
        // alias a 2 pi swing to ~0 with ratio ~1, and one split breaks the
        // symmetry so the phase and ratio guards see it.
        if (depth > 0 && std::abs(dphi) <= 0.8 && ratio > 0.25 && ratio < 4.0) return dphi;
        if (depth >= 48)
            throw ContourError("argument tracking did not stabilize; the contour passes near a zero");
        const cplx m = 0.5 * (a + b);
        const cplx fm = eval(m);
        return segment_arg(a, fa, m, fm, depth + 1) + segment_arg(m, fm, b, fb, depth + 1);
    }

    const SchottkyGroup& g_;
    int M_;
    double floor_abs_;
};

std::vector<cplx> rect_corners(const Rect& r) {
    return {cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min),
            cplx(r.re_max, r.im_max), cplx(r.re_min, r.im_max)};
}

} // namespace

// --- traces and cycle expansion ---------------------------------------------

cplx transfer_trace(const SchottkyGroup& g, cplx s, int n) {
    if (n < 1 || n > kMaxWordDepth)
        throw std::invalid_argument("transfer_trace: n out of range");
    cplx sum(0.0, 0.0);
    for (int d : divisors_of(n)) {
        const PrimeLengthTable& tab = prime_classes(g, d);
        const double k = double(n / d);
        for (size_t i = 0; i < tab.length.size(); ++i) {
            const double l = tab.length[i];
            if (s.real() * k * l < -700.0)
                throw TruncationError("transfer_trace: weight e^{-s l} overflows double range");
            const cplx num = std::exp(-s * (k * l));
            const double den = 1.0 - std::exp(-k * l);
            sum += double(d) * double(tab.count[i]) * num / den;
        }
    }
    return sum;
}

ZetaEvaluation zeta_cycle(const SchottkyGroup& g, cplx s, int N) {
    if (N < 2 || N > kMaxWordDepth)
        throw std::invalid_argument("zeta_cycle: cumulant order out of range");
    std::vector<cplx> p(N + 1), e(N + 1);
    double max_trace = 0.0;
    for (int j = 1; j <= N; ++j) {
        p[j] = transfer_trace(g, s, j);
        max_trace = std::max(max_trace, std::abs(p[j]));
    }
    // Plemelj-Smithies recursion for det(I - L) = sum (-1)^k e_k.
    e[0] = 1.0;
    for (int k = 1; k <= N; ++k) {
        cplx acc(0.0, 0.0);
        double sign = 1.0;
        for (int j = 1; j <= k; ++j) {
            acc += sign * e[k - j] * p[j];
            sign = -sign;
        }
        e[k] = acc / double(k);
    }
    ZetaEvaluation out;
    out.s = s;
    out.method = ZetaMethod::Cycle;
    out.order = N;
    cplx value(0.0, 0.0);
    double sign = 1.0;
    for (int k = 0; k <= N; ++k) {
        value += sign * e[k];
        sign = -sign;
    }
    out.value = value;
    out.error_estimate = std::abs(e[N]) + 1e-16 * max_trace;
    int growth_streak = 0;
    bool diverging = false;
    for (int k = 2; k <= N; ++k) {
        growth_streak = std::abs(e[k]) > std::abs(e[k - 1]) ? growth_streak + 1 : 0;
        if (growth_streak >= 3) diverging = true;
    }
    if (diverging)
        out.warnings.push_back("cycle expansion cumulants grow over three consecutive orders; "
                               "the expansion may not converge at this s");
    if (N >= 6 && std::abs(e[N]) > std::abs(e[N - 1]))
        out.warnings.push_back("last cumulant is not decaying; the error estimate is unreliable");
    return out;
}

ZetaEvaluation zeta_product(const SchottkyGroup& g, cplx s, double T_cut, int n_cut) {
    if (!(T_cut > 0.0)) throw std::invalid_argument("zeta_product: T_cut must be positive");
    if (n_cut < 0) throw std::invalid_argument("zeta_product: n_cut must be nonnegative");
    const double delta = dimension_from_operator(g);
    if (!(s.real() > delta + 0.1))
        throw RegionError("zeta_product: Euler product requires Re(s) > delta + 0.1");

    const int depth = required_depth(g, T_cut);
    cplx log_val(0.0, 0.0);
    double shift_tail = 0.0;
    for (int d = 1; d <= depth; ++d) {
        const PrimeLengthTable& tab = prime_classes(g, d);
        for (size_t i = 0; i < tab.length.size(); ++i) {
            const double l = tab.length[i];
            if (l > T_cut + 1e-12) continue;
            const double cnt = double(tab.count[i]);
            for (int n = 0; n <= n_cut; ++n)
                log_val += cnt * std::log(1.0 - std::exp(-(s + double(n)) * l));
            // Dropped shifts n > n_cut: |log(1-w)| <= 2|w| for |w| <= 1/2.
            shift_tail += cnt * 2.0 * std::exp(-(s.real() + n_cut + 1) * l)
                        / (1.0 - std::exp(-l));
        }
    }
    ZetaEvaluation out;
    out.s = s;
    out.method = ZetaMethod::Product;
    out.order = n_cut;
    out.value = std::exp(log_val);
    // Dropped primes l > T_cut, with the class count modeled as e^{delta l}/l.
    double prime_tail = 0.0;
    for (int n = 0; n <= n_cut; ++n) {
        const double a = s.real() + n - delta;
        prime_tail += std::exp(-a * T_cut) / (a * T_cut);
    }
    out.error_estimate = (prime_tail + shift_tail) * std::abs(out.value);
    return out;
}

// --- finite sections ----------------------------------------------------------

TransferMatrix build_transfer_matrix(const SchottkyGroup& g, cplx s, int basis_order) {
    const int M = effective_order(g, basis_order, "build_transfer_matrix");
    const int A = g.alphabet_size();
    if ((int)g.transfer.branch.size() != A)
        throw std::invalid_argument("build_transfer_matrix: group is not finalized");
    const int Q = 4 * M;
    const int p = g.rank;

    TransferMatrix out;
    out.s = s;
    out.basis_order = M;
    out.matrix = Eigen::MatrixXcd::Zero(A * M, A * M);
    const double tail = std::pow(g.transfer.contraction_ratio, M);
    if (tail > 1e-10) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "basis order %d leaves an estimated spectral tail %.2e; "
                      "increase it for full accuracy", M, tail);
        out.warnings.push_back(buf);
    }

    const Eigen::MatrixXcd& F = dft_matrix(M);
    Eigen::MatrixXcd V(Q, M);

    for (int i = 0; i < A; ++i) {
        const double ci = g.transfer.discs[i].center.real();
        const double ri = g.transfer.discs[i].radius;
        for (int m = 0; m < A; ++m) {
            if (m == (i + p) % A) continue;  // the branch undoing letter m is barred here
            const int b = (m + p) % A;
            Moebius u = g.transfer.branch[b];
            // Fix the matrix sign so c z + d stays in the right half-plane
            // on this source disc, keeping the principal power s-weight
            // holomorphic and positive at real s.
            if ((u.c * ci + u.d).real() < 0.0)
                u = Moebius(-u.a, -u.b, -u.c, -u.d, false);
            const double cm = g.transfer.discs[m].center.real();
            const double rm = g.transfer.discs[m].radius;
            for (int q = 0; q < Q; ++q) {
                const double th = 2.0 * M_PI * q / Q;
                const cplx z = ci + kSampleRadiusFactor * ri * cplx(std::cos(th), std::sin(th));
                const cplx den = u.c * z + u.d;
                if (!(den.real() > 0.0))
                    throw BranchError("build_transfer_matrix: branch weight crosses the "
                                      "logarithm cut on a sample circle");
                const cplx w = power_derivative(u, z, s);
                const cplx t = (u(z) - cm) / rm;
                cplx tp(1.0, 0.0);
                for (int k = 0; k < M; ++k) {
                    V(q, k) = w * tp;
                    tp *= t;
                }
            }
            out.matrix.block(i * M, m * M, M, M) = F * V;
        }
    }
    return out;
}

ZetaEvaluation zeta_fredholm(const SchottkyGroup& g, cplx s, int basis_order) {
    int M = effective_order(g, basis_order, "zeta_fredholm");
    if (M < 6) M = 6;  // two orders are compared, the smaller must stay >= 4
    const TransferMatrix tm = build_transfer_matrix(g, s, M);
    Eigen::MatrixXcd K =
        Eigen::MatrixXcd::Identity(tm.matrix.rows(), tm.matrix.cols()) - tm.matrix;
    const cplx det_full = Eigen::PartialPivLU<Eigen::MatrixXcd>(K).determinant();
    const cplx det_small = det_of(g, s, M - 2);

    ZetaEvaluation out;
    out.s = s;
    out.method = ZetaMethod::Fredholm;
    out.order = M;
    out.value = det_full;
    out.error_estimate = std::abs(det_full - det_small);
    out.warnings = tm.warnings;
    return out;
}

cplx leading_eigenvalue(const TransferMatrix& tm) {
    const Eigen::MatrixXcd& A = tm.matrix;
    if (A.rows() == 0) throw std::invalid_argument("leading_eigenvalue: empty matrix");
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.rows());
    v.normalize();
    cplx lambda(0.0, 0.0), prev(0.0, 0.0);
    for (int it = 0; it < 3000; ++it) {
        Eigen::VectorXcd w = A * v;
        const double nw = w.norm();
        if (!(nw > 0.0)) return cplx(0.0, 0.0);
        lambda = v.dot(w);
        v = w / nw;
        if (it > 8 && std::abs(lambda - prev) < 1e-14 * (1.0 + std::abs(lambda)))
            return lambda;
        prev = lambda;
    }
    // Power iteration stalls when the dominant pair is complex; fall back to
    // a dense solve.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    if (es.info() != Eigen::Success)
        throw TruncationError("leading_eigenvalue: eigensolver failed to converge");
    cplx best(0.0, 0.0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i]) > std::abs(best)) best = es.eigenvalues()[i];
    return best;
}

double dimension_from_operator(const SchottkyGroup& g, double tol, int basis_order) {
    if (g.rank < 2) return 0.0;  // two-point limit set
    if (!(tol > 0.0)) throw std::invalid_argument("dimension_from_operator: tol must be positive");
    const int M = effective_order(g, basis_order, "dimension_from_operator");

    if (g.cache) {
        std::lock_guard<std::mutex> lock(g.cache->mu);
        if (g.cache->has_delta_eigen && g.cache->delta_eigen_order == M)
            return g.cache->delta_eigen;
    }

    const auto logl = [&](double sigma) {
        const TransferMatrix tm = build_transfer_matrix(g, cplx(sigma, 0.0), M);
        return std::log(std::abs(leading_eigenvalue(tm)));
    };

    // Illinois-damped regula falsi on the decreasing function log lambda.
    double a = 0.0, b = 1.0;
    double fa = logl(a), fb = logl(b);
    if (!(fa > 0.0) || !(fb < 0.0))
        throw GeometryError("dimension_from_operator: leading eigenvalue does not bracket 1 on [0,1]");
    const double target = std::min(tol, 1e-10);
    int stale = 0;  // +1 when a freezes, -1 when b freezes
    for (int it = 0; it < 120 && b - a > target; ++it) {
        double wa = fa, wb = fb;
        if (stale >= 2) wa *= 0.5;
        if (stale <= -2) wb *= 0.5;
        double x = (a * wb - b * wa) / (wb - wa);
        const double margin = 0.01 * (b - a);
        x = std::min(std::max(x, a + margin), b - margin);
        const double fx = logl(x);
        if (fx > 0.0) {
            a = x; fa = fx;
            stale = stale <= 0 ? -1 : stale - 1;
        } else {
            b = x; fb = fx;
            stale = stale >= 0 ? 1 : stale + 1;
        }
    }
    const double delta = 0.5 * (a + b);

    if (g.cache) {
        std::lock_guard<std::mutex> lock(g.cache->mu);
        g.cache->has_delta_eigen = true;
        g.cache->delta_eigen = delta;
        g.cache->delta_eigen_order = M;
    }
    return delta;
}

// --- zero search ---------------------------------------------------------------

ResonanceSearch find_resonances(const SchottkyGroup& g, const Rect& rect,
                                double grid_step, int basis_order) {
    if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max))
        throw std::invalid_argument("find_resonances: rectangle is degenerate");
    if (!(grid_step > 0.0)) throw std::invalid_argument("find_resonances: grid step must be positive");
    const int M = effective_order(g, basis_order, "find_resonances");

    ResonanceSearch out;
    out.grid_step = grid_step;
    out.basis_order = M;

    // Stage 1: |Z| on the scan grid.
    const int nx = std::max(2, (int)std::lround((rect.re_max - rect.re_min) / grid_step) + 1);
    const int ny = std::max(2, (int)std::lround((rect.im_max - rect.im_min) / grid_step) + 1);
    const double dx = (rect.re_max - rect.re_min) / (nx - 1);
    const double dy = (rect.im_max - rect.im_min) / (ny - 1);
    std::vector<double> absz((size_t)nx * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const cplx s(rect.re_min + ix * dx, rect.im_min + iy * dy);
            absz[(size_t)iy * nx + ix] = std::abs(det_of(g, s, M));
        }
    out.grid_median_abs = median_of(absz);

    // Stage 2: local minima of |Z| over the 8-neighborhood.
    std::vector<cplx> seeds;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double v = absz[(size_t)iy * nx + ix];
            bool minimal = true;
            for (int oy = -1; oy <= 1 && minimal; ++oy)
                for (int ox = -1; ox <= 1 && minimal; ++ox) {
                    if (ox == 0 && oy == 0) continue;
                    const int jx = ix + ox, jy = iy + oy;
                    if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                    if (absz[(size_t)jy * nx + jx] < v) minimal = false;
                }
            if (minimal)
                seeds.emplace_back(rect.re_min + ix * dx, rect.im_min + iy * dy);
        }

    // Stage 3: Newton with central differences.
    struct Refined { cplx s; double resid; };
    std::vector<Refined> zeros;
    const double step_cap = std::max(dx, dy);
    for (const cplx seed : seeds) {
        cplx s = seed;
        bool ok = false;
        double resid = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double h = 1e-6 * (1.0 + std::abs(s));
            const cplx z = det_of(g, s, M);
            const cplx dz = (det_of(g, s + h, M) - det_of(g, s - h, M)) / (2.0 * h);
            if (!std::isfinite(std::abs(z)) || std::abs(dz) == 0.0) break;
            cplx delta = -z / dz;
            if (std::abs(delta) > step_cap) delta *= step_cap / std::abs(delta);
            s += delta;
            if (std::abs(s - seed) > 3.0 * step_cap + 0.05) break;  // left the seed's basin
            if (std::abs(delta) < 1e-10 * (1.0 + std::abs(s))) {
                ok = true;
                resid = std::abs(det_of(g, s, M));
                break;
            }
        }
        if (!ok) continue;
        bool dup = false;
        for (auto& z0 : zeros)
            if (std::abs(z0.s - s) < 1e-6) {
                if (resid < z0.resid) z0 = {s, resid};
                dup = true;
                break;
            }
        if (!dup) zeros.push_back({s, resid});
    }

    // Stage 4: whole-rectangle argument principle, nudging the contour
    // outward (at most three times) if it passes through a zero.
    const double floor_abs = std::max(1e-300, 1e-12 * out.grid_median_abs);
    Rect cont = rect;
    double wind_raw = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt <= 3; ++attempt) {
        try {
            ContourTracker tracker(g, M, floor_abs);
            wind_raw = tracker.winding(rect_corners(cont), 0.5 * grid_step);
            break;
        } catch (const NearZeroSample&) {
            if (attempt == 3)
                throw ContourError("find_resonances: search contour still passes through a "
                                   "zero after three outward nudges");
            const double e = grid_step * 1e-3 * std::pow(8.0, attempt);
            cont = Rect{rect.re_min - e, rect.re_max + e, rect.im_min - e, rect.im_max + e};
            char buf[96];
            std::snprintf(buf, sizeof(buf), "search contour nudged outward by %.1e", e);
            out.warnings.push_back(buf);
        }
    }
    if (std::abs(wind_raw - std::lround(wind_raw)) > 0.05)
        throw ContourError("find_resonances: argument-principle count is not an integer");
    out.boundary_winding = (int)std::lround(wind_raw);
    out.rect = cont;

    // Keep zeros inside the contour actually integrated.
    std::vector<Refined> kept;
    for (const auto& z : zeros)
        if (z.s.real() >= cont.re_min - 1e-12 && z.s.real() <= cont.re_max + 1e-12 &&
            z.s.imag() >= cont.im_min - 1e-12 && z.s.imag() <= cont.im_max + 1e-12)
            kept.push_back(z);

    // Stage 5: per-zero winding numbers give the orders.
    int order_sum = 0;
    for (const auto& z : kept) {
        double r = 0.45 * grid_step;
        for (const auto& other : kept)
            if (std::abs(other.s - z.s) > 1e-12)
                r = std::min(r, 0.4 * std::abs(other.s - z.s));
        int order = -1;
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                ContourTracker tracker(g, M, floor_abs);
                const Rect box{z.s.real() - r, z.s.real() + r, z.s.imag() - r, z.s.imag() + r};
                const double w = tracker.winding(rect_corners(box), r / 2.0);
                if (std::abs(w - std::lround(w)) > 0.05)
                    throw ContourError("find_resonances: zero-order winding is not an integer");
                order = (int)std::lround(w);
                break;
            } catch (const NearZeroSample&) {
                r *= 0.7;
                if (attempt == 3)
                    throw ContourError("find_resonances: contour around a refined zero keeps "
                                       "hitting zeros; reduce grid_step");
            }
        }
        if (order == 0) {
            out.warnings.push_back("a refined minimum has winding number 0 and was dropped");
            continue;
        }
        Resonance res;
        res.s = z.s;
        res.order = order;
        res.newton_residual = z.resid;
        out.resonances.push_back(res);
        order_sum += order;
    }

    if (order_sum != out.boundary_winding)
        throw ContourError("find_resonances: refined zero orders do not add up to the "
                           "argument-principle count; reduce grid_step");

    std::sort(out.resonances.begin(), out.resonances.end(),
              [](const Resonance& a, const Resonance& b) {
                  if (a.s.imag() != b.s.imag()) return a.s.imag() < b.s.imag();
                  return a.s.real() < b.s.real();
              });
    return out;
}

std::vector<Resonance> with_conjugates(const std::vector<Resonance>& upper, double tol) {
    std::vector<Resonance> out = upper;
    for (const auto& r : upper) {
        if (r.s.imag() <= tol) continue;
        const cplx c = std::conj(r.s);
        bool present = false;
        for (const auto& q : upper)
            if (std::abs(q.s - c) < tol) { present = true; break; }
        if (!present) {
            Resonance partner = r;
            partner.s = c;
            out.push_back(partner);
        }
    }
    std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) {
        if (a.s.imag() != b.s.imag()) return a.s.imag() < b.s.imag();
        return a.s.real() < b.s.real();
    });
    return out;
}

StripCensus strip_census(const std::vector<Resonance>& resonances, double sigma, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("strip_census: T must be positive");
    StripCensus out;
    const int rungs = 6;
    std::vector<double> lx, ly;
    for (int i = 1; i <= rungs; ++i) {
        const double h = T * i / rungs;
        int n = 0;
        for (const auto& r : resonances)
            if (r.s.real() >= sigma && r.s.imag() >= 0.0 && r.s.imag() <= h) n += r.order;
        out.ladder.emplace_back(h, n);
        if (n > 0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(double(n)));
        }
    }
    out.count = out.ladder.back().second;
    out.loglog_slope = lsq_slope(lx, ly);
    return out;
}

StripBound theorem_strip(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::domain_error("theorem_strip: delta must lie in (0,1)");
    StripBound out;
    out.theorem_value = delta <= 0.5 ? delta * (1.0 - 2.0 * delta) / 2.0
                                     : delta / 2.0 - 0.25;
    out.conjectural_value = delta / 2.0;
    return out;
}

} // namespace schottky
