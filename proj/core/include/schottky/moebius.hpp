#pragma once

#include <complex>

#include "schottky/errors.hpp"

namespace schottky {

using cplx = std::complex<double>;

// The two conformal models of the hyperbolic plane used throughout.
// Group data is stored as real matrices (half-plane action); disc-model
// groups act through the Cayley-conjugated SU(1,1) form.
enum class Model { HalfPlane, Disc };

// A point together with the model it lives in.
struct HPoint {
    cplx z{0.0, 0.0};
    Model model = Model::Disc;

    // Strictly inside the model domain with the given margin.
    bool valid(double margin = 1e-14) const;
};

// 2x2 complex matrix acting by fractional linear maps, kept normalized to
// determinant one (the PSL ambiguity m ~ -m is harmless and not resolved).
struct Moebius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Moebius() = default;
    Moebius(cplx a_, cplx b_, cplx c_, cplx d_, bool renormalize = true);

    static Moebius from_real(double a_, double b_, double c_, double d_);

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    Moebius inverse() const { return Moebius(d, -b, -c, a, false); }
    bool is_real(double tol = 1e-12) const;
    bool is_identity(double tol = 1e-12) const;

    // Fractional linear action; throws PoleError when |cz+d| < 1e-14.
    cplx operator()(cplx z) const;
    // m'(z) = 1/(cz+d)^2 for det-one matrices.
    cplx derivative(cplx z) const;
    // Matrix product = composition: (m*n)(z) = m(n(z)).
    Moebius operator*(const Moebius& rhs) const;
};

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };

struct IsometryClass {
    IsometryKind kind = IsometryKind::Identity;
    double abs_trace = 2.0;
    // 2*arccosh(|tr|/2); zero unless hyperbolic.
    double translation_length = 0.0;
    // ||tr| - 2| < 1e-10: the classification is ill-conditioned.
    bool near_parabolic = false;
};

IsometryClass classify(const Moebius& m);

// Hyperbolic distance between two points of the same model.  Throws
// std::invalid_argument on model mismatch, RegionError if a point is not
// strictly inside the model domain.
double hyp_distance(const HPoint& z, const HPoint& w);

// The point-pair invariant sigma(z,w) = cosh^2(d(z,w)/2).
double sigma_invariant(const HPoint& z, const HPoint& w);

// (m')^s evaluated as exp(-2 s Log(cz+d)) with the principal logarithm.
// Branch safety across a disc is the caller's responsibility (see
// branch_margin); at the pole this throws PoleError.
cplx power_derivative(const Moebius& m, cplx z, cplx s);

// Euclidean disc; the basic geometric primitive for Schottky data.
struct Disc {
    cplx center{0.0, 0.0};
    double radius = 1.0;

    bool contains(cplx z, double margin = 0.0) const {
        return std::abs(z - center) <= radius - margin;
    }
    // |center|^2 - (1 + radius^2), zero iff orthogonal to the unit circle.
    double orthogonality_defect() const;
};

// Image of a Euclidean disc under a Moebius map, computed in closed form.
// Throws PoleError when the pole lies inside the disc (image unbounded).
Disc map_disc(const Moebius& m, const Disc& d);

// Distance of the affine image {c z + d : z in disc} from the branch cut
// (-inf, 0] of the principal logarithm.  Positive means power_derivative is
// single-valued and holomorphic on the disc.
double branch_margin(const Moebius& m, const Disc& disc);

struct FixedPointPair {
    cplx attracting{0.0, 0.0};
    cplx repelling{0.0, 0.0};
};

// Fixed points of a hyperbolic element with c != 0 (both finite).
FixedPointPair fixed_points(const Moebius& m);

// Cayley transform z -> (z-i)/(z+i) mapping the upper half-plane onto the
// unit disc, and the model conversions it induces by conjugation.
const Moebius& cayley();
const Moebius& cayley_inv();

// Conjugate a real half-plane matrix into its SU(1,1) disc-model form.
Moebius to_disc_model(const Moebius& real_halfplane);

// Inverse conversion; the result is normalized to a real matrix with a
// canonical sign.  Throws GeometryError if the input does not preserve the
// disc (the conjugate would not be real).
Moebius to_halfplane_model(const Moebius& disc_form);

HPoint convert_point(const HPoint& p, Model target);

} // namespace schottky
