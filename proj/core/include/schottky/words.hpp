#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "schottky/schottky_group.hpp"

namespace schottky {

// Word over the letter alphabet 0..2p-1 (letter b+p is the inverse of b).
struct Word {
    std::vector<int> letters;
    bool reduced = false;             // no letter followed by its inverse
    bool cyclically_reduced = false;  // reduced and last letter != inverse of first
    bool primitive = false;           // not a power of a shorter word
};

enum class WordMode { Reduced, CyclicallyReduced };

bool is_reduced(const std::vector<int>& letters, int p);
bool is_cyclically_reduced(const std::vector<int>& letters, int p);
bool is_primitive(const std::vector<int>& letters);
// Lexicographically smallest rotation (canonical conjugacy representative).
std::vector<int> canonical_rotation(const std::vector<int>& letters);

// Streams every word of exact length n in lexicographic order with flags
// filled in.  Words are enumerated, never stored.
void enumerate_words(const SchottkyGroup& g, int n, WordMode mode,
                     const std::function<void(const Word&)>& visit);

// Group element of a word, acting in the native model.
Moebius word_element(const SchottkyGroup& g, const std::vector<int>& letters);

// Product of real transfer matrices with a log-scale guard: the represented
// matrix is e^{log_scale} * m.  Safe for word lengths beyond double range.
struct ScaledMoebius {
    Moebius m;
    double log_scale = 0.0;
};
ScaledMoebius scaled_word_product(const SchottkyGroup& g, const std::vector<int>& letters);

// Translation length 2*acosh(|tr|/2) of the word's element, overflow-safe.
double word_length(const SchottkyGroup& g, const std::vector<int>& letters);

// Primitive conjugacy classes of exact word length n, aggregated as
// (prime length ascending, class count).  Built once per group and memoized;
// every later query is a table lookup.
struct PrimeLengthTable {
    std::vector<double> length;
    std::vector<long long> count;
    long long total_classes() const;
};
const PrimeLengthTable& prime_classes(const SchottkyGroup& g, int n);

// Largest word depth the tables support (enumeration is exponential in it).
inline constexpr int kMaxWordDepth = 40;

// log of S_n(x) = sum over cyclically reduced words of length n of
// e^{-x * l(word)}, via the necklace decomposition of the primitive tables,
// with a log-sum-exp underflow guard.
double log_cyclic_word_sum(const SchottkyGroup& g, double x, int n);

struct LengthEntry {
    double ell = 0.0;           // geodesic length, possibly k * prime_length
    double prime_length = 0.0;  // prime length of the first merged contributor
    int multiplicity = 1;       // number of (k, prime class) pairs at this ell
    int k = 1;                  // repetition index of the first contributor
    Word representative;        // prime word of the first contributor
    double weight_sum = 0.0;    // sum of contributor prime lengths
};

// Word depth certified to exhaust all geodesics of length <= T: every reduced
// word of length n displaces the coding domain by at least n * c_g.  Throws
// TruncationError when the certified depth exceeds max_depth.
int required_depth(const SchottkyGroup& g, double T, int max_depth = 24);

// Complete length spectrum up to T: primitive classes and their multiples,
// merged within bin_tol (or by exact integer trace keys for integer-trace
// groups), sorted by (ell, representative).
std::vector<LengthEntry> length_spectrum(const SchottkyGroup& g, double T,
                                         double bin_tol = 1e-7);

} // namespace schottky
