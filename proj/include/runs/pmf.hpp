#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace runs {

// Finitely supported probability mass function on the non-negative integers.
// `masses[i]` is the probability of `offset + i`.  Exact routes can produce
// tiny negative masses through cancellation; clamp_tiny_negatives() zeroes
// anything in [-1e-14, 0) and counts how often it had to.
struct Pmf {
    long offset = 0;
    std::vector<double> masses;
    int clamped_negatives = 0;

    double prob(long m) const noexcept {
        const long i = m - offset;
        if (i < 0 || i >= static_cast<long>(masses.size())) return 0.0;
        return masses[static_cast<std::size_t>(i)];
    }
    long max_support() const noexcept {
        return offset + static_cast<long>(masses.size()) - 1;
    }

    double sum() const noexcept;
    double mean() const noexcept;
    double variance() const noexcept;

    // Empirical and analytic PMFs alike must be normalized; callers that
    // require it use this guard (tolerance matches the type invariant).
    bool is_normalized(double tol = 1e-10) const noexcept;

    void clamp_tiny_negatives() noexcept;

    // CSV columns: m, probability.
    void write_csv(std::ostream& os, int precision = 17) const;
    std::string to_json() const;
};

}  // namespace runs
