#include "schottky/words.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "group_cache.hpp"

namespace schottky {

namespace {

// Plain real 2x2 matrix for the hot enumeration paths.
struct M2 {
    double a, b, c, d;
};

inline M2 mul(const M2& x, const M2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

std::vector<M2> real_letters(const SchottkyGroup& g) {
    std::vector<M2> out;
    out.reserve(g.alphabet_size());
    for (const Moebius& m : g.transfer.branch) {
        out.push_back({m.a.real(), m.b.real(), m.c.real(), m.d.real()});
    }
    return out;
}

// Canonicity of w as a conjugacy-class representative: no rotation is
// lexicographically smaller; primitivity: no nontrivial rotation is equal.
struct NecklaceStatus {
    bool canonical;
    bool primitive;
};

NecklaceStatus necklace_status(const int* w, int n) {
    bool primitive = true;
    for (int r = 1; r < n; ++r) {
        int i = 0;
        int j = r;
        for (; i < n; ++i) {
            if (w[j] != w[i]) break;
            if (++j == n) j = 0;
        }
        if (i == n) {
            primitive = false;
            continue;
        }
        if (w[j] < w[i]) return {false, primitive};
    }
    return {true, primitive};
}

// Smallest divisor period of w, or n when primitive.
int minimal_period(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (int i = d; i < n && periodic; ++i) periodic = (w[i] == w[i - d]);
        if (periodic) return d;
    }
    return n;
}

std::vector<int> divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d) {
        if (n % d == 0) out.push_back(d);
    }
    return out;
}

double acosh_safe(double half_trace, double log_scale) {
    // acosh(x) with x = half_trace * e^{log_scale}, robust for huge scales.
    if (log_scale == 0.0) {
        if (half_trace <= 1.0) {
            throw GeometryError("word element is not hyperbolic");
        }
        return std::acosh(half_trace);
    }
    const double lx = std::log(half_trace) + log_scale;
    double inv2 = 0.0;  // 1/x^2
    if (lx < 300.0) inv2 = std::exp(-2.0 * lx);
    return lx + std::log1p(std::sqrt(std::max(0.0, 1.0 - inv2)));
}

// Fills cache.prime[1..n] by one pass of depth-first enumeration of reduced
// words, keeping each primitive conjugacy class once (minimal rotation).
void build_tables(const SchottkyGroup& g, detail::GroupCache& cache, int n) {
    const int A = g.alphabet_size();
    const int p = g.rank;
    const std::vector<M2> let = real_letters(g);
    std::vector<std::vector<double>> traces(n + 1);  // |tr| per primitive class

    std::vector<int> w(n);
    std::vector<M2> prod(n + 1);
    std::vector<int> cursor(n, 0);
    prod[0] = {1.0, 0.0, 0.0, 1.0};
    int d = 0;
    while (true) {
        int b = cursor[d];
        if (d > 0 && b == (w[d - 1] + p) % A) ++b;  // skip the inverse follower
        if (b >= A) {
            if (d == 0) break;
            --d;
            ++cursor[d];
            continue;
        }
        w[d] = b;
        cursor[d] = b;
        prod[d + 1] = mul(prod[d], let[b]);
        const int len = d + 1;
        if (w[0] != (w[d] + p) % A || len == 1) {
            const NecklaceStatus st = necklace_status(w.data(), len);
            if (st.canonical && st.primitive) {
                const M2& m = prod[len];
                traces[len].push_back(std::abs(m.a + m.d));
            }
        }
        if (len < n) {
            ++d;
            cursor[d] = 0;
        } else {
            ++cursor[d];
        }
    }

    for (int m = cache.filled_depth + 1; m <= n; ++m) {
        std::vector<double>& tr = traces[m];
        std::sort(tr.begin(), tr.end());
        PrimeLengthTable table;
        for (std::size_t i = 0; i < tr.size();) {
            std::size_t j = i;
            if (g.integer_trace) {
                // Exact integer traces: merge everything rounding alike.
                const double key = std::round(tr[i]);
                while (j < tr.size() && std::round(tr[j]) == key) ++j;
            } else {
                while (j < tr.size() && tr[j] == tr[i]) ++j;
            }
            const double atr = tr[i];
            if (atr <= 2.0) {
                throw GeometryError("non-hyperbolic word element in a Schottky group");
            }
            table.length.push_back(2.0 * std::acosh(0.5 * atr));
            table.count.push_back(static_cast<long long>(j - i));
            i = j;
        }
        cache.prime[m] = std::move(table);
    }
    cache.filled_depth = std::max(cache.filled_depth, n);
}

} // namespace

long long PrimeLengthTable::total_classes() const {
    long long t = 0;
    for (const long long c : count) t += c;
    return t;
}

bool is_reduced(const std::vector<int>& letters, int p) {
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
        if (letters[i + 1] == (letters[i] + p) % (2 * p)) return false;
    }
    return true;
}

bool is_cyclically_reduced(const std::vector<int>& letters, int p) {
    if (!is_reduced(letters, p)) return false;
    if (letters.empty()) return true;
    return letters.front() != (letters.back() + p) % (2 * p) || letters.size() == 1;
}

bool is_primitive(const std::vector<int>& letters) {
    if (letters.empty()) return false;
    return minimal_period(letters) == static_cast<int>(letters.size());
}

std::vector<int> canonical_rotation(const std::vector<int>& letters) {
    const int n = static_cast<int>(letters.size());
    if (n == 0) return {};
    int best = 0;
    for (int r = 1; r < n; ++r) {
        for (int i = 0; i < n; ++i) {
            const int x = letters[(r + i) % n];
            const int y = letters[(best + i) % n];
            if (x != y) {
                if (x < y) best = r;
                break;
            }
        }
    }
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = letters[(best + i) % n];
    return out;
}

void enumerate_words(const SchottkyGroup& g, int n, WordMode mode,
                     const std::function<void(const Word&)>& visit) {
    if (n < 1) throw std::invalid_argument("word length must be positive");
    const int A = g.alphabet_size();
    const int p = g.rank;
    Word word;
    word.letters.assign(n, 0);
    word.reduced = true;
    std::vector<int>& w = word.letters;
    std::vector<int> cursor(n, 0);
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
        if (d + 1 < n) {
            ++d;
            cursor[d] = 0;
            continue;
        }
        word.cyclically_reduced = (n == 1) || (w[0] != (w[n - 1] + p) % A);
        if (mode == WordMode::Reduced || word.cyclically_reduced) {
            word.primitive = is_primitive(w);
            visit(word);
        }
        ++cursor[d];
    }
}

Moebius word_element(const SchottkyGroup& g, const std::vector<int>& letters) {
    Moebius m;
    for (const int b : letters) {
        if (b < 0 || b >= g.alphabet_size()) {
            throw std::invalid_argument("letter out of range");
        }
        m = m * g.letters[b];
    }
    return m;
}

ScaledMoebius scaled_word_product(const SchottkyGroup& g, const std::vector<int>& letters) {
    ScaledMoebius out;
    M2 acc{1.0, 0.0, 0.0, 1.0};
    const std::vector<M2> let = real_letters(g);
    for (const int b : letters) {
        if (b < 0 || b >= g.alphabet_size()) {
            throw std::invalid_argument("letter out of range");
        }
        acc = mul(acc, let[b]);
        const double big = std::max(std::max(std::abs(acc.a), std::abs(acc.b)),
                                    std::max(std::abs(acc.c), std::abs(acc.d)));
        if (big > 1e100) {
            acc = {acc.a / big, acc.b / big, acc.c / big, acc.d / big};
            out.log_scale += std::log(big);
        }
    }
    out.m = Moebius(acc.a, acc.b, acc.c, acc.d, false);
    return out;
}

double word_length(const SchottkyGroup& g, const std::vector<int>& letters) {
    if (letters.empty()) throw std::invalid_argument("empty word has no length");
    const ScaledMoebius sm = scaled_word_product(g, letters);
    const double half = 0.5 * std::abs((sm.m.a + sm.m.d).real());
    return 2.0 * acosh_safe(half, sm.log_scale);
}

const PrimeLengthTable& prime_classes(const SchottkyGroup& g, int n) {
    if (n < 1 || n > kMaxWordDepth) {
        throw std::invalid_argument("word depth out of supported range");
    }
    if (!g.cache) throw std::invalid_argument("group is not finalized");
    detail::GroupCache& cache = *g.cache;
    std::lock_guard<std::mutex> lock(cache.mu);
    if (cache.filled_depth < n) build_tables(g, cache, n);
    return cache.prime[n];
}

double log_cyclic_word_sum(const SchottkyGroup& g, double x, int n) {
    if (n < 1) throw std::invalid_argument("word length must be positive");
    // S_n(x) = sum_{d | n} sum_{prime classes of length d} d e^{-x (n/d) l}.
    // Accumulated as exp(shift) * sum e^{e_i - shift} with a running shift so
    // arbitrarily large x never underflows to a zero sum.
    double shift = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    auto add = [&shift, &acc](double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term > shift) {
            acc = acc * std::exp(shift - log_term) + 1.0;
            shift = log_term;
        } else {
            acc += std::exp(log_term - shift);
        }
    };
    for (const int d : divisors(n)) {
        const PrimeLengthTable& t = prime_classes(g, d);
        const double k = static_cast<double>(n) / d;
        const double logd = std::log(static_cast<double>(d));
        for (std::size_t i = 0; i < t.length.size(); ++i) {
            add(logd + std::log(static_cast<double>(t.count[i])) - x * k * t.length[i]);
        }
    }
    if (acc <= 0.0) throw std::invalid_argument("empty cyclic word sum");
    return shift + std::log(acc);
}

int required_depth(const SchottkyGroup& g, double T, int max_depth) {
    if (T < 0.0) throw std::invalid_argument("T must be nonnegative");
    const double cg = g.transfer.min_hyperbolic_gap;
    if (!(cg > 0.0)) throw GeometryError("group has no positive displacement bound");
    const int depth = std::max(1, static_cast<int>(std::ceil(T / cg)));
    if (depth > max_depth) {
        throw TruncationError("certified word depth " + std::to_string(depth) +
                              " exceeds the configured maximum " + std::to_string(max_depth));
    }
    return depth;
}

std::vector<LengthEntry> length_spectrum(const SchottkyGroup& g, double T, double bin_tol) {
    if (bin_tol < 0.0) throw std::invalid_argument("bin_tol must be nonnegative");
    if (T <= 0.0) return {};
    const int depth = required_depth(g, T);
    const int A = g.alphabet_size();
    const int p = g.rank;
    const std::vector<M2> let = real_letters(g);

    // Primitive classes with prime length <= T, with representatives.
    struct Prime {
        double length;
        std::vector<int> word;
    };
    std::vector<Prime> primes;
    std::vector<int> w(depth);
    std::vector<M2> prod(depth + 1);
    std::vector<int> cursor(depth, 0);
    prod[0] = {1.0, 0.0, 0.0, 1.0};
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
        prod[d + 1] = mul(prod[d], let[b]);
        const int len = d + 1;
        if (w[0] != (w[d] + p) % A || len == 1) {
            const NecklaceStatus st = necklace_status(w.data(), len);
            if (st.canonical && st.primitive) {
                const M2& m = prod[len];
                const double atr = std::abs(m.a + m.d);
                if (atr <= 2.0) {
                    throw GeometryError("non-hyperbolic word element in a Schottky group");
                }
                const double ell = 2.0 * std::acosh(0.5 * atr);
                if (ell <= T + 1e-12) {
                    primes.push_back({ell, std::vector<int>(w.begin(), w.begin() + len)});
                }
            }
        }
        if (len < depth) {
            ++d;
            cursor[d] = 0;
        } else {
            ++cursor[d];
        }
    }

    // All multiples k * prime length <= T.
    struct Item {
        double ell;
        double prime_length;
        int k;
        const Prime* prime;
    };
    std::vector<Item> items;
    for (const Prime& pr : primes) {
        for (int k = 1; k * pr.length <= T + 1e-12; ++k) {
            items.push_back({k * pr.length, pr.length, k, &pr});
        }
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        if (x.ell != y.ell) return x.ell < y.ell;
        if (x.k != y.k) return x.k < y.k;
        return x.prime->word < y.prime->word;
    });

    auto same_class = [&g, bin_tol](const Item& anchor, const Item& other) {
        if (g.integer_trace) {
            return std::round(2.0 * std::cosh(0.5 * anchor.ell)) ==
                   std::round(2.0 * std::cosh(0.5 * other.ell));
        }
        return other.ell - anchor.ell <= bin_tol;
    };

    std::vector<LengthEntry> entries;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        LengthEntry e;
        e.ell = items[i].ell;
        e.prime_length = items[i].prime_length;
        e.k = items[i].k;
        e.representative.letters = items[i].prime->word;
        e.representative.reduced = true;
        e.representative.cyclically_reduced = true;
        e.representative.primitive = true;
        e.multiplicity = 0;
        e.weight_sum = 0.0;
        while (j < items.size() && same_class(items[i], items[j])) {
            ++e.multiplicity;
            e.weight_sum += items[j].prime_length;
            ++j;
        }
        entries.push_back(std::move(e));
        i = j;
    }
    return entries;
}

} // namespace schottky
