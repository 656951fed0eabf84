#include "schottky/schottky_group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "group_cache.hpp"

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;

// Isometric disc of a map with c != 0: center -d/c, radius 1/|c|.
Disc isometric_disc(const Moebius& m) {
    if (std::abs(m.c) < 1e-14) {
        throw GeometryError("generator fixes infinity: no isometric disc");
    }
    return Disc{-m.d / m.c, 1.0 / std::abs(m.c)};
}

// Real rotation matrix whose Cayley conjugate rotates the disc model by phi.
Moebius disc_rotation_real(double phi) {
    const double h = 0.5 * phi;
    return Moebius::from_real(std::cos(h), std::sin(h), -std::sin(h), std::cos(h));
}

// Angular half-width of the boundary arc cut by a disc orthogonal to the
// unit circle.
double arc_half_width(const Disc& d) {
    const double ac = std::abs(d.center);
    if (ac <= 1.0) {
        throw GeometryError("disc center inside the unit circle");
    }
    return std::acos(std::min(1.0, 1.0 / ac));
}

// Rotation angle placing the midpoint of the largest free boundary arc at
// angle zero, so the Cayley transport sends no disc near infinity.
double transport_rotation(const std::vector<Disc>& discs) {
    struct Arc {
        double start, end;
    };
    std::vector<Arc> arcs;
    arcs.reserve(discs.size());
    for (const Disc& d : discs) {
        const double mid = std::arg(d.center);
        const double hw = arc_half_width(d);
        double start = mid - hw;
        if (start < 0.0) start += 2.0 * kPi;
        arcs.push_back({start, start + 2.0 * hw});
    }
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& a, const Arc& b) { return a.start < b.start; });
    double best_gap = -1.0;
    double best_mid = 0.0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const Arc& cur = arcs[i];
        const double next_start =
            (i + 1 < arcs.size()) ? arcs[i + 1].start : arcs[0].start + 2.0 * kPi;
        const double gap = next_start - cur.end;
        if (gap > best_gap + 1e-12) {
            best_gap = gap;
            best_mid = cur.end + 0.5 * gap;
        }
    }
    if (best_gap <= 0.0) {
        throw GeometryError("disc boundary arcs cover the whole circle");
    }
    return -best_mid;
}

// Hyperbolic distance between the geodesics bounding two disjoint discs
// centered on the real axis.
double geodesic_gap(const Disc& a, const Disc& b) {
    const double num =
        std::norm(a.center - b.center) - a.radius * a.radius - b.radius * b.radius;
    const double ch = num / (2.0 * a.radius * b.radius);
    if (ch <= 1.0) return 0.0;
    return std::acosh(ch);
}

void build_transfer(SchottkyGroup& g) {
    TransferGeometry t;
    const int n = g.alphabet_size();
    t.branch.reserve(n);
    t.discs.reserve(n);
    if (g.model == Model::HalfPlane) {
        t.rotation = 0.0;
        t.branch = g.letters;
        t.discs = g.discs;
    } else {
        t.rotation = transport_rotation(g.discs);
        const Moebius k = disc_rotation_real(t.rotation);
        const Moebius kinv = k.inverse();
        for (int b = 0; b < g.rank; ++b) {
            t.branch.push_back(k * g.gens[b] * kinv);
        }
        for (int b = 0; b < g.rank; ++b) {
            t.branch.push_back(t.branch[b].inverse());
        }
        const cplx spin = std::polar(1.0, t.rotation);
        for (int b = 0; b < n; ++b) {
            Disc rotated{g.discs[b].center * spin, g.discs[b].radius};
            Disc img = map_disc(cayley_inv(), rotated);
            if (std::abs(img.center.imag()) > 1e-9 * (1.0 + std::abs(img.center))) {
                throw GeometryError("transported disc is not centered on the real axis");
            }
            img.center = cplx(img.center.real(), 0.0);
            t.discs.push_back(img);
        }
    }

    // Contraction ratio: worst basis-coefficient decay over all valid
    // branch/source pairs, from exact disc images.
    double kappa = 0.0;
    for (int b = 0; b < n; ++b) {
        const int target = g.inverse_letter(b);
        for (int i = 0; i < n; ++i) {
            if (i == b) continue;
            const Disc img = map_disc(t.branch[b], t.discs[i]);
            const Disc& dst = t.discs[target];
            const double ratio =
                (std::abs(img.center - dst.center) + img.radius) / dst.radius;
            kappa = std::max(kappa, ratio);
        }
    }
    if (kappa >= 1.0) {
        throw GeometryError("branch images do not contract into their target discs");
    }
    t.contraction_ratio = kappa;
    int m = 4;
    while (std::pow(kappa, m) >= 1e-12) ++m;
    t.default_basis_order = m;

    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            gap = std::min(gap, geodesic_gap(t.discs[i], t.discs[j]));
        }
    }
    t.min_hyperbolic_gap = gap;
    g.transfer = std::move(t);
}

} // namespace

void finalize_group(SchottkyGroup& g) {
    if (g.rank < 1 || g.gens.size() != static_cast<std::size_t>(g.rank)) {
        throw std::invalid_argument("rank must be >= 1 and match the generator count");
    }
    if (g.rank == 1 && !g.cylinder_mode) {
        throw std::invalid_argument("rank-1 groups are admitted only in cylinder mode");
    }
    for (const Moebius& m : g.gens) {
        if (!m.is_real()) {
            throw std::invalid_argument("stored generators must be real matrices");
        }
        if (std::abs(m.det() - 1.0) > 1e-12) {
            throw std::invalid_argument("stored generators must have determinant one");
        }
    }
    g.letters.clear();
    g.discs.clear();
    const int n = g.alphabet_size();
    g.letters.reserve(n);
    g.discs.reserve(n);
    for (int b = 0; b < g.rank; ++b) {
        g.letters.push_back(g.model == Model::Disc ? to_disc_model(g.gens[b]) : g.gens[b]);
    }
    for (int b = 0; b < g.rank; ++b) {
        g.letters.push_back(g.letters[b].inverse());
    }
    for (int b = 0; b < n; ++b) {
        g.discs.push_back(isometric_disc(g.letters[b]));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(g.discs[i].center - g.discs[j].center) -
                               g.discs[i].radius - g.discs[j].radius;
            if (gap <= kDisjointnessMargin) {
                throw GeometryError("isometric discs intersect: not a Schottky configuration");
            }
        }
    }
    build_transfer(g);
    g.cache = std::make_shared<detail::GroupCache>();
}

ValidationReport validate_schottky(const SchottkyGroup& g) {
    ValidationReport r;
    r.worst_disjointness = std::numeric_limits<double>::infinity();
    r.worst_pairing = 0.0;
    auto add = [&r](const std::string& name, double headroom, double threshold) {
        r.checks.push_back({name, headroom, threshold, headroom > 0.0});
    };

    const int n = static_cast<int>(g.discs.size());
    const bool shape_ok = g.rank >= 1 &&
                          g.letters.size() == static_cast<std::size_t>(2 * g.rank) &&
                          n == 2 * g.rank;
    add("structure: 2p discs and 2p letters", shape_ok ? 1.0 : -1.0, 0.0);
    add("rank: p >= 2 or cylinder mode", (g.rank >= 2 || g.cylinder_mode) ? 1.0 : -1.0, 0.0);
    if (!shape_ok) {
        r.pass = false;
        r.suggestion = "group is structurally incomplete; run finalize_group first";
        return r;
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(g.discs[i].center - g.discs[j].center) -
                               g.discs[i].radius - g.discs[j].radius;
            r.worst_disjointness = std::min(r.worst_disjointness, gap);
            add("disjoint discs " + std::to_string(i) + "," + std::to_string(j),
                gap - kDisjointnessMargin, kDisjointnessMargin);
        }
    }

    constexpr int kSamples = 64;
    for (int b = 0; b < g.rank; ++b) {
        const Disc& src = g.discs[b];
        const Disc& dst = g.discs[g.inverse_letter(b)];
        double boundary_dev = 0.0;
        double exterior_headroom = std::numeric_limits<double>::infinity();
        for (int q = 0; q < kSamples; ++q) {
            const double ang = 2.0 * kPi * q / kSamples;
            const cplx on = src.center + std::polar(src.radius, ang);
            boundary_dev = std::max(
                boundary_dev, std::abs(std::abs(g.letters[b](on) - dst.center) - dst.radius));
            const cplx inside = src.center + std::polar(0.5 * src.radius, ang);
            exterior_headroom = std::min(
                exterior_headroom, std::abs(g.letters[b](inside) - dst.center) - dst.radius);
        }
        r.worst_pairing = std::max(r.worst_pairing, boundary_dev);
        add("pairing: letter " + std::to_string(b) + " boundary onto partner",
            kPairingTolerance - boundary_dev, kPairingTolerance);
        add("pairing: letter " + std::to_string(b) + " interior to exterior",
            exterior_headroom, 0.0);
    }

    if (g.model == Model::Disc) {
        for (int i = 0; i < n; ++i) {
            add("orthogonality of disc " + std::to_string(i),
                kPairingTolerance - std::abs(g.discs[i].orthogonality_defect()),
                kPairingTolerance);
        }
    }

    r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const ValidationCheck& c) { return c.pass; });
    if (!r.pass) {
        if (r.worst_disjointness <= kDisjointnessMargin) {
            r.suggestion = "discs are closer than the disjointness margin; increase the "
                           "separation of the configuration";
        } else {
            r.suggestion = "pairing deviation exceeds tolerance; check the generator order "
                           "and disc labels";
        }
    }
    return r;
}

SchottkyGroup symmetric_group(int p, double width) {
    if (p < 2) {
        throw std::invalid_argument("symmetric_group requires p >= 2");
    }
    if (!(width > 0.0)) {
        throw std::invalid_argument("width must be positive");
    }
    if (width >= kPi / (2.0 * p)) {
        throw GeometryError("width too large: boundary arcs of adjacent discs overlap");
    }
    // Generator translating along a diameter; its boundary arc has angular
    // half-width `width`, giving translation length t = 2*asinh(cot(width)).
    // Stored as the real diagonal diag(e^{-t/2}, e^{t/2}), whose disc-model
    // conjugate owns the disc at angle zero.
    const double sh = 1.0 / std::tan(width);  // sinh(t/2)
    const double ch = std::sqrt(1.0 + sh * sh);
    const Moebius base = Moebius::from_real(ch - sh, 0.0, 0.0, ch + sh);
    SchottkyGroup g;
    g.model = Model::Disc;
    g.rank = p;
    for (int j = 0; j < p; ++j) {
        const Moebius k = disc_rotation_real(kPi * j / p);
        g.gens.push_back(k * base * k.inverse());
    }
    finalize_group(g);
    return g;
}

SchottkyGroup group_from_matrices(const std::vector<Moebius>& mats, const GroupOptions& opts) {
    if (mats.empty()) {
        throw std::invalid_argument("group_from_matrices requires at least one matrix");
    }
    SchottkyGroup g;
    g.model = Model::HalfPlane;
    g.rank = static_cast<int>(mats.size());
    g.cylinder_mode = (g.rank == 1);
    g.label = opts.label;
    for (const Moebius& m : mats) {
        if (!m.is_real()) {
            throw std::invalid_argument("generators must be real matrices");
        }
        const IsometryClass cls = classify(m);
        if (cls.kind != IsometryKind::Hyperbolic) {
            throw GeometryError("generator is not hyperbolic");
        }
        g.gens.push_back(m);
    }
    if (opts.detect_integer_trace) {
        bool integral = true;
        for (const Moebius& m : g.gens) {
            for (const cplx e : {m.a, m.b, m.c, m.d}) {
                if (std::abs(e.real() - std::round(e.real())) > 1e-9) integral = false;
            }
        }
        g.integer_trace = integral;
    }
    finalize_group(g);
    return g;
}

Moebius generator_pairing_discs(double src, double dst, double radius) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("radius must be positive");
    }
    if (std::abs(dst - src) <= 2.0 * radius) {
        throw GeometryError("paired discs overlap: no hyperbolic generator exists");
    }
    return Moebius::from_real(dst / radius, -src * dst / radius - radius, 1.0 / radius,
                              -src / radius);
}

CodingInterval coding_interval(const SchottkyGroup& g, int letter) {
    if (letter < 0 || letter >= g.alphabet_size()) {
        throw std::invalid_argument("letter out of range");
    }
    const Disc& d = g.discs[letter];
    if (g.model == Model::HalfPlane) {
        return {d.center.real(), d.radius};
    }
    return {std::arg(d.center), arc_half_width(d)};
}

BowenStep bowen_map(const SchottkyGroup& g, const HPoint& x) {
    if (x.model != g.model) {
        throw std::invalid_argument("point model does not match the group model");
    }
    const double boundary_tol = 1e-9;
    if (g.model == Model::HalfPlane) {
        if (std::abs(x.z.imag()) > boundary_tol) {
            throw RegionError("point is not on the boundary line");
        }
    } else if (std::abs(std::abs(x.z) - 1.0) > boundary_tol) {
        throw RegionError("point is not on the boundary circle");
    }
    for (int b = 0; b < g.alphabet_size(); ++b) {
        if (!g.discs[b].contains(x.z)) continue;
        BowenStep step;
        step.branch = b;
        step.derivative_abs = std::abs(g.letters[b].derivative(x.z));
        cplx img = g.letters[b](x.z);
        // Project back onto the boundary to keep long orbits from drifting.
        img = (g.model == Model::HalfPlane) ? cplx(img.real(), 0.0) : img / std::abs(img);
        step.point = HPoint{img, g.model};
        return step;
    }
    throw RegionError("boundary point lies in no coding interval");
}

HPoint to_transfer_point(const SchottkyGroup& g, const HPoint& p) {
    if (p.model != g.model) {
        throw std::invalid_argument("point model does not match the group model");
    }
    if (g.model == Model::HalfPlane) return p;
    const cplx rotated = p.z * std::polar(1.0, g.transfer.rotation);
    return HPoint{cayley_inv()(rotated), Model::HalfPlane};
}

} // namespace schottky
