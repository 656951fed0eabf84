#include "schottky/moebius.hpp"

#include <cmath>

namespace schottky {

namespace {

constexpr double kPoleTol = 1e-14;

// stable arccosh for x >= 1
double acosh_safe(double x)
{
    if (x < 1.0) x = 1.0;
    return std::acosh(x);
}

} // namespace

bool HPoint::valid(double margin) const
{
    if (model == Model::HalfPlane) return z.imag() > margin;
    return std::abs(z) < 1.0 - margin;
}

Moebius::Moebius(cplx a_, cplx b_, cplx c_, cplx d_, bool renormalize)
    : a(a_), b(b_), c(c_), d(d_)
{
    if (!renormalize) return;
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
        !std::isfinite(b.imag()) || !std::isfinite(c.real()) || !std::isfinite(c.imag()) ||
        !std::isfinite(d.real()) || !std::isfinite(d.imag()))
        throw std::invalid_argument("Moebius: non-finite entry");
    const cplx dt = a * d - b * c;
    if (std::abs(dt) < kPoleTol)
        throw GeometryError("Moebius: singular matrix (determinant ~ 0)");
    const cplx s = std::sqrt(dt); // principal branch; sign ambiguity is PSL
    a /= s; b /= s; c /= s; d /= s;
}

Moebius Moebius::from_real(double a_, double b_, double c_, double d_)
{
    return Moebius(cplx(a_), cplx(b_), cplx(c_), cplx(d_));
}

bool Moebius::is_real(double tol) const
{
    return std::abs(a.imag()) <= tol && std::abs(b.imag()) <= tol &&
           std::abs(c.imag()) <= tol && std::abs(d.imag()) <= tol;
}

bool Moebius::is_identity(double tol) const
{
    const double plus = std::abs(a - 1.0) + std::abs(b) + std::abs(c) + std::abs(d - 1.0);
    const double minus = std::abs(a + 1.0) + std::abs(b) + std::abs(c) + std::abs(d + 1.0);
    return std::min(plus, minus) <= tol;
}

cplx Moebius::operator()(cplx z) const
{
    const cplx den = c * z + d;
    if (std::abs(den) < kPoleTol)
        throw PoleError("Moebius apply: evaluation at the pole of the map");
    return (a * z + b) / den;
}

cplx Moebius::derivative(cplx z) const
{
    const cplx den = c * z + d;
    if (std::abs(den) < kPoleTol)
        throw PoleError("Moebius derivative: evaluation at the pole of the map");
    return 1.0 / (den * den);
}

Moebius Moebius::operator*(const Moebius& rhs) const
{
    // both factors are det-one, so the product is; skip renormalization
    return Moebius(a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                   c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d, false);
}

IsometryClass classify(const Moebius& m)
{
    IsometryClass out;
    out.abs_trace = std::abs(m.trace());
    out.near_parabolic = std::abs(out.abs_trace - 2.0) < 1e-10;
    if (m.is_identity()) {
        out.kind = IsometryKind::Identity;
        return out;
    }
    if (out.abs_trace > 2.0) {
        out.kind = IsometryKind::Hyperbolic;
        out.translation_length = 2.0 * acosh_safe(out.abs_trace / 2.0);
    } else if (out.abs_trace < 2.0) {
        out.kind = IsometryKind::Elliptic;
    } else {
        out.kind = IsometryKind::Parabolic;
    }
    return out;
}

double hyp_distance(const HPoint& z, const HPoint& w)
{
    if (z.model != w.model)
        throw std::invalid_argument("hyp_distance: points from different models");
    if (!z.valid() || !w.valid())
        throw RegionError("hyp_distance: point not inside the model domain");
    const double q = std::norm(z.z - w.z);
    if (z.model == Model::HalfPlane) {
        return acosh_safe(1.0 + q / (2.0 * z.z.imag() * w.z.imag()));
    }
    const double dz = 1.0 - std::norm(z.z);
    const double dw = 1.0 - std::norm(w.z);
    return acosh_safe(1.0 + 2.0 * q / (dz * dw));
}

double sigma_invariant(const HPoint& z, const HPoint& w)
{
    if (z.model != w.model)
        throw std::invalid_argument("sigma_invariant: points from different models");
    if (!z.valid() || !w.valid())
        throw RegionError("sigma_invariant: point not inside the model domain");
    const double q = std::norm(z.z - w.z);
    // cosh^2(d/2) = (1 + cosh d)/2
    if (z.model == Model::HalfPlane)
        return 1.0 + q / (4.0 * z.z.imag() * w.z.imag());
    return 1.0 + q / ((1.0 - std::norm(z.z)) * (1.0 - std::norm(w.z)));
}

cplx power_derivative(const Moebius& m, cplx z, cplx s)
{
    const cplx den = m.c * z + m.d;
    if (std::abs(den) < kPoleTol)
        throw PoleError("power_derivative: evaluation at the pole of the map");
    if (s == cplx(0.0)) return cplx(1.0);
    return std::exp(-2.0 * s * std::log(den));
}

double Disc::orthogonality_defect() const
{
    return std::norm(center) - (1.0 + radius * radius);
}

Disc map_disc(const Moebius& m, const Disc& d)
{
    if (std::abs(m.c) < kPoleTol) {
        // affine map z -> (a z + b)/d
        const cplx f = m.a / m.d;
        return Disc{f * d.center + m.b / m.d, std::abs(f) * d.radius};
    }
    // m(z) = a/c - 1/(c (cz+d)); push the disc through each elementary step.
    const cplx c1 = m.c * d.center + m.d;
    const double r1 = std::abs(m.c) * d.radius;
    const double denom = std::norm(c1) - r1 * r1;
    if (denom <= 0.0)
        throw PoleError("map_disc: pole of the map lies inside the disc");
    const cplx c2 = std::conj(c1) / denom; // inversion w -> 1/w
    const double r2 = r1 / denom;
    return Disc{m.a / m.c - c2 / m.c, r2 / std::abs(m.c)};
}

double branch_margin(const Moebius& m, const Disc& disc)
{
    // affine image: disc with center c*center+d, radius |c|*radius
    const cplx w = m.c * disc.center + m.d;
    const double r = std::abs(m.c) * disc.radius;
    const double dist = (w.real() > 0.0) ? std::abs(w) : std::abs(w.imag());
    return dist - r;
}

FixedPointPair fixed_points(const Moebius& m)
{
    if (std::abs(m.c) < kPoleTol)
        throw GeometryError("fixed_points: c = 0, a fixed point is at infinity");
    const cplx tr = m.trace();
    const cplx disc = std::sqrt(tr * tr - 4.0);
    const cplx lp = (tr + disc) / 2.0;
    const cplx lm = (tr - disc) / 2.0;
    // fixed point for eigenvalue l is (l - d)/c, with multiplier 1/l^2
    const cplx zp = (lp - m.d) / m.c;
    const cplx zm = (lm - m.d) / m.c;
    FixedPointPair out;
    if (std::abs(lp) >= std::abs(lm)) {
        out.attracting = zp;
        out.repelling = zm;
    } else {
        out.attracting = zm;
        out.repelling = zp;
    }
    return out;
}

const Moebius& cayley()
{
    // z -> (z - i)/(z + i), normalized
    static const Moebius C(cplx(1.0), cplx(0.0, -1.0), cplx(1.0), cplx(0.0, 1.0));
    return C;
}

const Moebius& cayley_inv()
{
    static const Moebius Ci = cayley().inverse();
    return Ci;
}

Moebius to_disc_model(const Moebius& m)
{
    // closed form of cayley * m * cayley^{-1} for real (a,b,c,d):
    //   alpha = ((a+d) + (b-c) i)/2,  beta = ((a-d) - (b+c) i)/2
    // valid for complex input as well via the generic product below.
    return cayley() * m * cayley_inv();
}

Moebius to_halfplane_model(const Moebius& u)
{
    Moebius m = cayley_inv() * u * cayley();
    // Remove the common unit phase so the matrix is genuinely real.
    double best = 0.0;
    cplx pivot(1.0);
    for (const cplx& e : {m.a, m.b, m.c, m.d}) {
        if (std::abs(e) > best) {
            best = std::abs(e);
            pivot = e;
        }
    }
    cplx phase = pivot / std::abs(pivot);
    // the matrix is real up to +-phase; align phase^2 with the determinant
    Moebius out(m.a / phase, m.b / phase, m.c / phase, m.d / phase, false);
    const double imag_resid = std::abs(out.a.imag()) + std::abs(out.b.imag()) +
                              std::abs(out.c.imag()) + std::abs(out.d.imag());
    if (imag_resid > 1e-9)
        throw GeometryError("to_halfplane_model: map does not preserve the disc");
    // canonical sign: positive trace, then positive c, then positive b
    double key = out.a.real() + out.d.real();
    if (std::abs(key) < 1e-12) key = out.c.real();
    if (std::abs(key) < 1e-12) key = out.b.real();
    if (key < 0.0) out = Moebius(-out.a, -out.b, -out.c, -out.d, false);
    out.a = cplx(out.a.real());
    out.b = cplx(out.b.real());
    out.c = cplx(out.c.real());
    out.d = cplx(out.d.real());
    return out;
}

HPoint convert_point(const HPoint& p, Model target)
{
    if (p.model == target) return p;
    if (target == Model::Disc) return HPoint{cayley()(p.z), Model::Disc};
    return HPoint{cayley_inv()(p.z), Model::HalfPlane};
}

} // namespace schottky
