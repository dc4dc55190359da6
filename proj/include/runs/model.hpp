#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace runs {

// A (k1,k2)-window is exactly k1 consecutive failures followed immediately by
// k2 consecutive successes.  B counts such windows over the linear index
// range 1..n-k1-k2+1; the circular statistic M counts all n cyclic windows
// (indices wrap modulo n).
struct RunsSpec {
    int k1 = 1;
    int k2 = 1;
    long n = 1;
    // Identical case: probs has one entry, the common success probability p.
    // Per-trial case: probs has exactly n entries.
    std::vector<double> probs;
    bool identical = true;
    // Probabilities equal to 0 or 1 are accepted but flagged; bound
    // evaluations refuse degenerate specs (they divide by window
    // probabilities and matched parameters).
    bool degenerate = false;

    static RunsSpec iid(int k1, int k2, long n, double p);
    static RunsSpec with_probs(int k1, int k2, std::vector<double> probs);

    int  k() const noexcept { return k1 + k2; }
    long window_count_linear() const noexcept {
        const long w = n - k() + 1;
        return w > 0 ? w : 0;
    }
    long max_count() const noexcept { return n / k(); }

    // Success probability of trial l, 1-based; cyclic lookups wrap mod n.
    double p_at(long l) const noexcept;
    double p_at_cyclic(long l) const noexcept;

    std::string describe() const;
};

struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;
};

enum class PairConvention {
    LinearPairs,  // pairs l < r with r - l <= k1+k2-1, no wrap-around
    CyclicPairs,  // unordered pairs at cyclic distance 1..k1+k2-1
};

// P(window at l occurs) = (1-p_l)...(1-p_{l+k1-1}) * p_{l+k1}...p_{l+k1+k2-1}.
// Identical case: (1-p)^k1 * p^k2.  l is 1-based; linear windows require
// 1 <= l <= n-k1-k2+1, circular windows allow 1 <= l <= n and wrap.
double window_prob(const RunsSpec& spec, long l, bool circular = false);

// Mean and variance of the linear count B.  Identical inputs use the closed
// forms (three-branch overlap count in n vs k); per-trial inputs accumulate
// the pair sums directly with compensated summation.
MomentPair linear_moments(const RunsSpec& spec);

// Mean and variance of the circular count M.  The variance depends on which
// window pairs are treated as overlapping; both conventions are exposed and
// the difference is documented in the README.
MomentPair circular_moments(const RunsSpec& spec,
                            PairConvention convention = PairConvention::CyclicPairs);

}  // namespace runs
