#pragma once

#include <memory>
#include <string>
#include <vector>

#include "schottky/moebius.hpp"

namespace schottky {

namespace detail {
// Memoized word-length tables, owned by the group and filled on demand by
// the words module.  Shared so copies of a group reuse the same tables.
class GroupCache;
}

// Real half-plane conjugate of the group used by the transfer-operator
// discretization: all 2p branch discs are centered on the real axis, so the
// operator blocks are built from real matrices and the determinant inherits
// Z(conj s) = conj Z(s) exactly.
struct TransferGeometry {
    // Disc-model rotation applied before the Cayley transport (0 when the
    // group is stored in half-plane form already).  Recorded so the
    // conjugation from stored matrices to transfer matrices is reproducible.
    double rotation = 0.0;
    // 2p determinant-one real matrices; branch[b] maps every disc i != b
    // into disc (b+p) mod 2p.
    std::vector<Moebius> branch;
    // 2p pairwise disjoint discs with real centers; disc b is the expanding
    // domain of branch[b].
    std::vector<Disc> discs;
    // kappa: max over branch/source-disc pairs of
    // (|image center - target center| + image radius) / target radius,
    // computed from exact disc images.  Governs the basis-coefficient decay.
    double contraction_ratio = 0.0;
    // Smallest M with kappa^M < 1e-12.
    int default_basis_order = 0;
    // c_g: minimum hyperbolic distance between the boundary geodesics of
    // distinct discs; every reduced word of length n displaces points of the
    // coding domain by at least n*c_g.
    double min_hyperbolic_gap = 0.0;
};

// Schottky data: p free generators pairing 2p disjoint discs.  Generators are
// stored as real determinant-one matrices; a Disc-model group acts through
// the Cayley conjugates of the stored matrices.  Letters 0..p-1 are the
// generators, letters p..2p-1 their inverses; letter b owns disc b and maps
// its interior onto the exterior of disc (b+p) mod 2p.
struct SchottkyGroup {
    Model model = Model::HalfPlane;
    int rank = 0;
    std::vector<Moebius> gens;  // p stored real matrices
    std::string label;          // empty when absent
    bool integer_trace = false;
    bool cylinder_mode = false;  // rank 1 is admitted only as a cylinder

    // Derived, filled by finalize_group: 2p maps in the native model and the
    // 2p native-model discs (isometric discs of the letters).
    std::vector<Moebius> letters;
    std::vector<Disc> discs;
    TransferGeometry transfer;
    std::shared_ptr<detail::GroupCache> cache;

    int alphabet_size() const { return 2 * rank; }
    int inverse_letter(int b) const { return (b + rank) % (2 * rank); }
    // Letter b as a real half-plane matrix regardless of the native model.
    const Moebius& real_letter(int b) const { return transfer.branch[b]; }
};

struct ValidationCheck {
    std::string name;
    double margin = 0.0;     // positive means the check passes
    double threshold = 0.0;  // margin must exceed this
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = false;
    double worst_disjointness = 0.0;
    double worst_pairing = 0.0;
    std::string suggestion;  // tolerance adjustment hint, empty when clean
};

// Margins used by validation and by the constructors.
inline constexpr double kDisjointnessMargin = 1e-10;
inline constexpr double kPairingTolerance = 1e-8;

// Checks disc disjointness, the pairing of disc boundaries and interiors,
// disc-model orthogonality, and the rank/cylinder rule.  Failures are
// reported, never thrown.
ValidationReport validate_schottky(const SchottkyGroup& g);

// Derives letters, discs, and the transfer geometry from model/rank/gens.
// Throws std::invalid_argument on malformed input (wrong sizes, non-real or
// singular generators), GeometryError when a generator has no isometric disc
// (c = 0) or the discs are not pairwise disjoint.
void finalize_group(SchottkyGroup& g);

// Rotationally symmetric disc-model group: 2p disc centers equally spaced on
// the unit circle, each generator translating along a diameter; every funnel
// geodesic has the same length 2*asinh(cot(width)).  width is the angular
// half-width of each boundary arc and must satisfy 0 < width < pi/(2p).
// Throws GeometryError when the arcs would overlap, std::invalid_argument
// for p < 2.
SchottkyGroup symmetric_group(int p, double width);

struct GroupOptions {
    std::string label;
    // Force the integer-trace flag off even if all entries are integral.
    bool detect_integer_trace = true;
};

// Builds a half-plane group from hyperbolic real matrices; discs are the
// isometric discs of the maps and their inverses.  A single matrix yields a
// rank-1 cylinder group.  Sets the integer-trace flag when every entry is
// integral.  Throws GeometryError for non-hyperbolic generators or
// intersecting isometric discs.
SchottkyGroup group_from_matrices(const std::vector<Moebius>& mats,
                                  const GroupOptions& opts = {});

// Half-plane generator whose isometric disc is centered at src and whose
// inverse's isometric disc is centered at dst, both of the given radius.
// Hyperbolic exactly when |dst - src| > 2*radius.
Moebius generator_pairing_discs(double src, double dst, double radius);

// One step of the boundary expanding map.
struct BowenStep {
    HPoint point;
    int branch = -1;           // letter applied
    double derivative_abs = 0.0;  // |B'(x)| at the input point
};

// Applies the letter owning the disc that contains the boundary point x.
// Throws RegionError when x lies in no coding interval.
BowenStep bowen_map(const SchottkyGroup& g, const HPoint& x);

// The boundary intervals I_b of the coding domain, as midpoint/half-width in
// the angular coordinate (disc model) or the real coordinate (half-plane).
struct CodingInterval {
    double mid = 0.0;
    double half_width = 0.0;
};
CodingInterval coding_interval(const SchottkyGroup& g, int letter);

// Converts a native-model point into the half-plane coordinates in which the
// transfer matrices act; hyperbolic distances are preserved exactly.
HPoint to_transfer_point(const SchottkyGroup& g, const HPoint& p);

} // namespace schottky
