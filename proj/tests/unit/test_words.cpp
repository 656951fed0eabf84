#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "schottky/words.hpp"

using namespace schottky;
using doctest::Approx;

namespace {

const SchottkyGroup& sym_group() {
    static SchottkyGroup g = symmetric_group(2, 0.45);
    return g;
}

const SchottkyGroup& integer_group() {
    static SchottkyGroup g = group_from_matrices(
        {Moebius::from_real(2, 1, 1, 1), Moebius::from_real(8, -41, 1, -5)});
    return g;
}

const SchottkyGroup& cylinder() {
    static SchottkyGroup g = group_from_matrices({Moebius::from_real(
        std::cosh(1.0), -std::sinh(1.0), -std::sinh(1.0), std::cosh(1.0))});
    return g;
}

// Independent combinatorial oracle: closed walks in the letter-adjacency
// graph (step i -> j allowed unless j is the inverse of i) count the
// cyclically reduced words of each length.
long long closed_walks(int p, int n) {
    const int q = 2 * p;
    std::vector<std::vector<long long>> a(q, std::vector<long long>(q, 1));
    for (int i = 0; i < q; ++i) a[i][(i + p) % q] = 0;
    std::vector<std::vector<long long>> pw = a;
    for (int step = 1; step < n; ++step) {
        std::vector<std::vector<long long>> nx(q, std::vector<long long>(q, 0));
        for (int i = 0; i < q; ++i)
            for (int k = 0; k < q; ++k)
                for (int j = 0; j < q; ++j) nx[i][j] += pw[i][k] * a[k][j];
        pw = nx;
    }
    long long tr = 0;
    for (int i = 0; i < q; ++i) tr += pw[i][i];
    return tr;
}

int moebius_mu(int n) {
    int mu = 1;
    for (int f = 2; f * f <= n; ++f) {
        if (n % f) continue;
        n /= f;
        if (n % f == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// Necklace count of primitive conjugacy classes of exact word length n.
long long primitive_classes(int p, int n) {
    long long s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += moebius_mu(d) * closed_walks(p, n / d);
    return s / n;
}

}  // namespace

TEST_SUITE("words") {

TEST_CASE("reduction predicates") {
    CHECK(is_reduced({0, 1, 0}, 2));
    CHECK_FALSE(is_reduced({0, 2, 1}, 2));  // 2 inverts 0
    CHECK(is_cyclically_reduced({0, 1}, 2));
    CHECK_FALSE(is_cyclically_reduced({0, 1, 2}, 2));  // last inverts first
    CHECK(is_primitive({0, 0, 1}));
    CHECK_FALSE(is_primitive({0, 1, 0, 1}));
    CHECK(is_primitive({0}));
}

TEST_CASE("canonical rotation is the least rotation and is rotation-invariant") {
    const std::vector<int> w{2, 0, 1, 0};
    std::vector<int> best = w;
    for (size_t r = 1; r < w.size(); ++r) {
        std::vector<int> rot(w.begin() + r, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + r);
        best = std::min(best, rot);
        CHECK(canonical_rotation(rot) == canonical_rotation(w));
    }
    CHECK(canonical_rotation(w) == best);
}

TEST_CASE("enumeration counts match the walk oracle and arrive in lexicographic order") {
    for (int n = 1; n <= 6; ++n) {
        long long reduced = 0, cyclic = 0;
        std::vector<int> prev;
        enumerate_words(sym_group(), n, WordMode::Reduced, [&](const Word& w) {
            ++reduced;
            CHECK(w.reduced);
            CHECK(int(w.letters.size()) == n);
            if (!prev.empty()) CHECK(prev < w.letters);
            prev = w.letters;
            if (w.cyclically_reduced) ++cyclic;
        });
        CHECK(reduced == 4ll * llround(std::pow(3.0, n - 1)));
        CHECK(cyclic == closed_walks(2, n));

        long long cyc_only = 0;
        enumerate_words(sym_group(), n, WordMode::CyclicallyReduced, [&](const Word& w) {
            ++cyc_only;
            CHECK(w.cyclically_reduced);
        });
        CHECK(cyc_only == cyclic);
    }
}

TEST_CASE("word elements multiply letters; the empty word is the identity") {
    const SchottkyGroup& g = sym_group();
    CHECK(word_element(g, {}).is_identity());
    const Moebius direct = g.letters[0] * g.letters[1] * g.letters[0];
    const Moebius via_word = word_element(g, {0, 1, 0});
    const cplx z(0.05, -0.1);
    CHECK(std::abs(via_word(z) - direct(z)) < 1e-13);
}

TEST_CASE("scaled products survive word lengths that overflow plain doubles") {
    const SchottkyGroup& g = integer_group();
    // Direct comparison at moderate depth.
    std::vector<int> w{0, 1, 0, 0, 1};
    const ScaledMoebius sp = scaled_word_product(g, w);
    Moebius direct = g.real_letter(0);
    for (size_t i = 1; i < w.size(); ++i) direct = direct * g.real_letter(w[i]);
    const double scale = std::exp(sp.log_scale);
    CHECK(std::abs(scale * sp.m.a - direct.a) < 1e-9 * std::abs(direct.a));
    CHECK(std::abs(scale * sp.m.b - direct.b) < 1e-9 * std::abs(std::abs(direct.b) + 1.0));

    // g_0^2000 overflows a plain double product (entries ~ e^{1900}); the
    // scaled form stays finite and the length comes out exact.
    std::vector<int> deep(2000, 0);
    const ScaledMoebius big = scaled_word_product(g, deep);
    CHECK(std::isfinite(std::abs(big.m.a)));
    CHECK(big.log_scale > 0.0);
    CHECK(word_length(g, deep) == Approx(2000.0 * 2.0 * std::acosh(1.5)).epsilon(1e-12));
}

TEST_CASE("translation lengths are conjugation, inversion, and rotation invariant") {
    const SchottkyGroup& g = integer_group();
    const double l0 = 2.0 * std::acosh(1.5);
    CHECK(word_length(g, {0}) == Approx(l0).epsilon(1e-13));
    CHECK(word_length(g, {2}) == Approx(l0).epsilon(1e-13));  // the inverse letter

    const double lw = word_length(g, {0, 1});
    CHECK(word_length(g, {1, 0}) == Approx(lw).epsilon(1e-12));        // rotation
    CHECK(word_length(g, {3, 0, 1, 1}) == Approx(lw).epsilon(1e-12));  // conjugate by g_1
}

TEST_CASE("prime class tables match the necklace oracle and are memoized") {
    const SchottkyGroup& g = sym_group();
    for (int n = 1; n <= 6; ++n) {
        const PrimeLengthTable& tab = prime_classes(g, n);
        CHECK(tab.total_classes() == primitive_classes(2, n));
        CHECK(std::is_sorted(tab.length.begin(), tab.length.end()));
        CHECK(tab.length.size() == tab.count.size());
    }
    // Memoization: repeated queries return the same table object.
    CHECK(&prime_classes(g, 4) == &prime_classes(g, 4));
}

TEST_CASE("cyclic word sums at x = 0 reduce to the combinatorial count") {
    const SchottkyGroup& g = sym_group();
    for (int n = 2; n <= 8; ++n)
        CHECK(log_cyclic_word_sum(g, 0.0, n) ==
              Approx(std::log(double(closed_walks(2, n)))).epsilon(1e-12));
    // Positive x damps the sum.
    CHECK(log_cyclic_word_sum(g, 0.5, 6) < log_cyclic_word_sum(g, 0.0, 6));
}

TEST_CASE("certified enumeration depth grows with T and refuses silent truncation") {
    const SchottkyGroup& g = sym_group();
    CHECK(required_depth(g, 5.0) <= required_depth(g, 10.0));
    // Words of length n displace by at least n times the disc gap (2 here).
    CHECK(required_depth(cylinder(), 7.0) == 4);
    CHECK_THROWS_AS(required_depth(g, 100.0), TruncationError);
}

TEST_CASE("cylinder length spectrum is exactly the arithmetic progression of the core length") {
    const auto spec = length_spectrum(cylinder(), 9.0);
    REQUIRE(spec.size() == 4);
    for (size_t k = 0; k < spec.size(); ++k) {
        CHECK(spec[k].ell == Approx(2.0 * double(k + 1)).epsilon(1e-12));
        CHECK(spec[k].prime_length == Approx(2.0).epsilon(1e-12));
        CHECK(spec[k].k == int(k + 1));
        // Both orientations of the core geodesic are distinct classes.
        CHECK(spec[k].multiplicity == 2);
        CHECK(spec[k].weight_sum == Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("integer-trace spectrum merges the four length-one classes exactly") {
    const auto spec = length_spectrum(integer_group(), 4.5);
    const double l0 = 2.0 * std::acosh(1.5);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].ell == Approx(l0).epsilon(1e-12));
    CHECK(spec[0].multiplicity == 4);
    CHECK(spec[0].k == 1);
    CHECK(spec[0].weight_sum == Approx(4.0 * l0).epsilon(1e-12));
    CHECK(spec[1].ell == Approx(2.0 * l0).epsilon(1e-12));
    CHECK(spec[1].k == 2);
    CHECK(spec[1].multiplicity == 4);

    // The representative is a certified prime word of the right length.
    const Word& rep = spec[0].representative;
    CHECK(rep.primitive);
    CHECK(rep.cyclically_reduced);
    CHECK(word_length(integer_group(), rep.letters) == Approx(l0).epsilon(1e-12));
}

TEST_CASE("spectra are sorted and nested as the cutoff grows") {
    const auto small = length_spectrum(sym_group(), 6.0);
    const auto large = length_spectrum(sym_group(), 8.0);
    REQUIRE(small.size() <= large.size());
    for (size_t i = 0; i + 1 < large.size(); ++i) CHECK(large[i].ell <= large[i + 1].ell);
    for (size_t i = 0; i < small.size(); ++i) {
        CHECK(small[i].ell == Approx(large[i].ell).epsilon(1e-14));
        CHECK(small[i].multiplicity == large[i].multiplicity);
        CHECK(small[i].k == large[i].k);
    }
    for (const LengthEntry& e : large) CHECK(e.ell <= 8.0 + 1e-9);
}

}  // TEST_SUITE
