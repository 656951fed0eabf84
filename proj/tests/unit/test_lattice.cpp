#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "schottky/lattice.hpp"
#include "schottky/words.hpp"

using namespace schottky;
using doctest::Approx;

namespace {

const SchottkyGroup& generic_group() {
    static SchottkyGroup g = group_from_matrices(
        {generator_pairing_discs(-3.0, 0.5, 0.55), generator_pairing_discs(3.5, 7.25, 0.6)});
    return g;
}

const SchottkyGroup& sym_group() {
    static SchottkyGroup g = symmetric_group(2, 0.45);
    return g;
}

// Brute-force orbit count: enumerate every reduced word up to `depth` with
// plain matrix products and measure each image point.  Also reports the
// closest approach on the deepest level so a caller can certify that the
// truncation lost nothing.
struct BruteCount {
    long long count = 0;
    double deepest_min = 1e300;
};

BruteCount brute_orbit(const SchottkyGroup& g, const HPoint& z, const HPoint& zp, double T,
                       int depth) {
    BruteCount out;
    if (hyp_distance(z, zp) <= T) ++out.count;  // the identity word
    std::vector<int> stack;
    const int q = g.alphabet_size();
    const std::function<void(const Moebius&, int)> walk = [&](const Moebius& m, int last) {
        const int n = int(stack.size());
        if (n > 0) {
            const double d = hyp_distance(z, HPoint{m(zp.z), g.model});
            if (d <= T) ++out.count;
            if (n == depth) {
                out.deepest_min = std::min(out.deepest_min, d);
                return;
            }
        }
        for (int b = 0; b < q; ++b) {
            if (last >= 0 && b == g.inverse_letter(last)) continue;
            stack.push_back(b);
            walk(m * g.letters[b], b);
            stack.pop_back();
        }
    };
    walk(Moebius(), -1);
    return out;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("pruned counting equals exhaustive enumeration") {
    struct Case {
        const SchottkyGroup* g;
        HPoint z, zp;
        double T;
        int depth;
    };
    const std::vector<Case> cases{
        {&generic_group(), {cplx(0.3, 1.8), Model::HalfPlane}, {cplx(0.3, 1.8), Model::HalfPlane}, 7.0, 5},
        {&generic_group(), {cplx(-0.5, 2.2), Model::HalfPlane}, {cplx(1.0, 1.5), Model::HalfPlane}, 8.0, 5},
        {&generic_group(), {cplx(0.0, 1.0), Model::HalfPlane}, {cplx(0.2, 2.5), Model::HalfPlane}, 5.0, 4},
        {&sym_group(), {cplx(0.0, 0.0), Model::Disc}, {cplx(0.1, 0.2), Model::Disc}, 6.0, 6},
    };
    for (const Case& c : cases) {
        const BruteCount brute = brute_orbit(*c.g, c.z, c.zp, c.T, c.depth);
        // The enumeration depth really was deep enough to see everything.
        REQUIRE(brute.deepest_min > c.T + 1.0);
        const OrbitCount fast = orbit_count(*c.g, c.z, c.zp, c.T);
        CHECK(fast.count == brute.count);
        CHECK(fast.count > 0);  // at least the identity
        CHECK(fast.pruned_nodes > 0);
        CHECK(fast.T == c.T);
    }
}

TEST_CASE("counting is symmetric in the two base points") {
    const HPoint z{cplx(0.3, 1.8), Model::HalfPlane};
    const HPoint zp{cplx(1.0, 1.5), Model::HalfPlane};
    for (const double T : {4.0, 6.0, 8.0})
        CHECK(orbit_count(generic_group(), z, zp, T).count ==
              orbit_count(generic_group(), zp, z, T).count);
}

TEST_CASE("input validation: base points, radius, and budget") {
    const HPoint ok{cplx(0.0, 1.0), Model::HalfPlane};
    CHECK_THROWS_AS(orbit_count(generic_group(), ok, ok, -1.0), std::invalid_argument);
    // A base point inside a Schottky disc breaks the pruning certificate.
    const HPoint inside{cplx(-3.0, 0.3), Model::HalfPlane};
    CHECK_THROWS_AS(orbit_count(generic_group(), ok, inside, 2.0), std::invalid_argument);
    // Model mismatch.
    CHECK_THROWS_AS(orbit_count(sym_group(), ok, ok, 2.0), std::invalid_argument);

    OrbitOptions tiny;
    tiny.node_budget = 10;
    const HPoint o{cplx(0.0, 0.0), Model::Disc};
    CHECK_THROWS_AS(orbit_count(sym_group(), o, o, 10.0, tiny), BudgetError);
}

TEST_CASE("kept elements reproduce their own distances") {
    OrbitOptions opts;
    opts.keep_elements = true;
    const HPoint o{cplx(0.0, 0.0), Model::Disc};
    const OrbitCount oc = orbit_count(sym_group(), o, o, 6.0, opts);
    REQUIRE(oc.elements.size() == size_t(oc.count));
    bool identity_seen = false;
    for (const OrbitElement& e : oc.elements) {
        CHECK(e.distance <= 6.0 + 1e-12);
        if (e.letters.empty()) {
            identity_seen = true;
            CHECK(e.distance == 0.0);
            continue;
        }
        CHECK(is_reduced(e.letters, sym_group().rank));
        const Moebius m = word_element(sym_group(), e.letters);
        CHECK(hyp_distance(o, HPoint{m(o.z), Model::Disc}) == Approx(e.distance).epsilon(1e-9));
    }
    CHECK(identity_seen);
}

TEST_CASE("partial Poincare series matches a manual word sum on the cylinder") {
    static SchottkyGroup cyl = group_from_matrices({Moebius::from_real(
        std::cosh(1.0), -std::sinh(1.0), -std::sinh(1.0), std::cosh(1.0))});
    const HPoint z{cplx(0.0, 1.0), Model::HalfPlane};
    const cplx s(0.8, 0.3);
    const int depth = 4;
    cplx oracle = 1.0;  // identity term
    for (int b : {0, 1})
        for (int n = 1; n <= depth; ++n) {
            const Moebius m = word_element(cyl, std::vector<int>(n, b));
            oracle += std::exp(-s * hyp_distance(z, HPoint{m(z.z), Model::HalfPlane}));
        }
    const PoincarePartial pp = poincare_partial(cyl, s, z, z, depth);
    CHECK(std::abs(pp.value - oracle) < 1e-12 * (1.0 + std::abs(oracle)));
    CHECK(pp.depth == depth);
    CHECK(pp.last_shell_abs > 0.0);

    // Larger Re(s) damps the deepest shell.
    CHECK(poincare_partial(cyl, cplx(1.5, 0.0), z, z, depth).last_shell_abs <
          poincare_partial(cyl, cplx(0.3, 0.0), z, z, depth).last_shell_abs);
    CHECK_THROWS_AS(poincare_partial(cyl, s, z, z, 17), std::invalid_argument);
    CHECK_THROWS_AS(poincare_partial(cyl, s, z, z, 0), std::invalid_argument);
}

TEST_CASE("prescribed-exponent fits recover synthetic coefficients") {
    std::vector<OrbitCount> counts;
    for (const double T : {2.0, 4.0, 6.0, 8.0, 10.0, 12.0}) {
        OrbitCount oc;
        oc.T = T;
        oc.count = llround(3.0 * std::exp(0.5 * T) + 2.0);
        counts.push_back(oc);
    }
    const std::vector<ExpansionTerm> terms{{cplx(0.5, 0.0), 0}, {cplx(0.0, 0.0), 0}};
    const ExpansionModel model = fit_expansion(counts, terms);
    REQUIRE(model.coefficients.size() == 2);
    CHECK(model.coefficients[0] == Approx(3.0).epsilon(2e-3));
    CHECK(model.fit_T_min == 2.0);
    CHECK(model.fit_T_max == 12.0);
    for (const OrbitCount& oc : counts)
        CHECK(std::abs(eval_expansion(model, oc.T) - double(oc.count)) < 1.0);
}

TEST_CASE("oscillatory terms absorb a rotating exponential") {
    std::vector<OrbitCount> counts;
    for (int i = 0; i < 12; ++i) {
        const double T = 3.0 + 0.75 * i;
        OrbitCount oc;
        oc.T = T;
        oc.count = llround(50.0 * std::exp(0.2 * T) * std::cos(3.0 * T) + 1000.0);
        counts.push_back(oc);
    }
    const std::vector<ExpansionTerm> terms{{cplx(0.2, 3.0), 0}, {cplx(0.0, 0.0), 0}};
    const ExpansionModel model = fit_expansion(counts, terms);
    for (const OrbitCount& oc : counts)
        CHECK(std::abs(eval_expansion(model, oc.T) - double(oc.count)) < 2.0);
}

TEST_CASE("degenerate fit systems are rejected") {
    std::vector<OrbitCount> counts(1);
    counts[0].T = 5.0;
    counts[0].count = 10;
    const std::vector<ExpansionTerm> two{{cplx(0.5, 0.0), 0}, {cplx(0.0, 0.0), 0}};
    CHECK_THROWS_AS(fit_expansion(counts, two), std::invalid_argument);
    CHECK_THROWS_AS(fit_expansion(counts, {}), std::invalid_argument);

    // Duplicated exponents make the design matrix rank-deficient.
    std::vector<OrbitCount> more;
    for (const double T : {2.0, 4.0, 6.0, 8.0}) {
        OrbitCount oc;
        oc.T = T;
        oc.count = llround(std::exp(0.4 * T));
        more.push_back(oc);
    }
    const std::vector<ExpansionTerm> dup{{cplx(0.4, 0.0), 0}, {cplx(0.4, 0.0), 0}};
    CHECK_THROWS_AS(fit_expansion(more, dup), std::invalid_argument);
}

TEST_CASE("residual analysis reports scaled suprema and sign changes") {
    std::vector<OrbitCount> counts;
    for (const double T : {1.0, 2.0, 3.0, 4.0}) {
        OrbitCount oc;
        oc.T = T;
        oc.count = (llround(T) % 2 == 1) ? 10 : 0;
        counts.push_back(oc);
    }
    ExpansionModel flat;
    flat.terms = {{cplx(0.0, 0.0), 0}};
    flat.coefficients = {5.0};
    const ResidualReport rep = residual_analysis(counts, flat, {0.0, 0.5});
    REQUIRE(rep.T.size() == 4);
    REQUIRE(rep.beta_sup.size() == 2);
    CHECK(rep.sign_changes == 3);
    for (size_t i = 0; i < rep.T.size(); ++i)
        CHECK(rep.residual[i] == Approx(double(counts[i].count) - 5.0).epsilon(1e-12));
    CHECK(rep.beta_sup[0].second == Approx(5.0).epsilon(1e-12));
    double sup = 0.0;
    for (size_t i = 0; i < rep.T.size(); ++i)
        sup = std::max(sup, std::abs(rep.residual[i]) * std::exp(-0.5 * rep.T[i]));
    CHECK(rep.beta_sup[1].second == Approx(sup).epsilon(1e-12));
}

}  // TEST_SUITE
