#pragma once

#include <cstdint>

namespace runs {

// Trial i (1-based) lives at bit i-1 of the sequence register.  Bit l of the
// result marks a hit of the window starting at trial l+1: k1 failures then k2
// successes.  Only bits 0..n-k are meaningful; callers mask to taste.
inline std::uint64_t window_hit_mask(std::uint64_t s, int k1, int k2) {
    std::uint64_t acc = ~0ULL;
    for (int j = 0; j < k1; ++j) acc &= ~(s >> j);
    for (int j = k1; j < k1 + k2; ++j) acc &= s >> j;
    return acc;
}

// Mask selecting the windows wholly contained in the first t trials.
inline std::uint64_t prefix_window_mask(long t, int k) {
    if (t < k) return 0;
    const long w = t - k + 1;
    return (w >= 64) ? ~0ULL : ((1ULL << w) - 1);
}

}  // namespace runs
