#pragma once

#include <mutex>
#include <vector>

#include "schottky/words.hpp"

namespace schottky::detail {

// Lazily filled primitive-class tables, indexed by word length.  The outer
// vector is sized once so references to filled tables stay valid while the
// cache grows under the mutex.
class GroupCache {
public:
    GroupCache() : prime(kMaxWordDepth + 1) {}

    std::mutex mu;
    int filled_depth = 0;
    std::vector<PrimeLengthTable> prime;

    // Memoized eigenvalue-route dimension (see dimension_from_operator).
    bool has_delta_eigen = false;
    double delta_eigen = 0.0;
    int delta_eigen_order = 0;
};

} // namespace schottky::detail
