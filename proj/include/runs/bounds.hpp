#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "runs/matching.hpp"
#include "runs/model.hpp"

namespace runs {

// Result of one total-variation bound evaluation.  `value` is reported
// exactly as computed: hypothesis violations flip entries of `preconditions`
// but never abort, and values above 1 (where the bound is weaker than the
// trivial TV bound) are noted, not clamped.
struct BoundReport {
    std::string name;
    double value = 0.0;
    // Matched pseudo-binomial parameters the bound was evaluated against;
    // NaN when the bound involves no matching.
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double p_check = std::numeric_limits<double>::quiet_NaN();
    // (condition, satisfied) in the order the hypotheses are stated.
    std::vector<std::pair<std::string, bool>> preconditions;
    std::vector<std::string> notes;

    bool all_preconditions_met() const noexcept;
    std::string to_json() const;
};

// (k/(k-1))^(k-1) for k = k1+k2 >= 2; grows from 2 toward e.
double k_star(int k);

// p~ = k * a * k_star(k), the success rate of the size-biased comparison
// count for identical trials with window probability a = (1-p)^k1 p^k2.
double p_tilde(const RunsSpec& spec);

// One-moment bound for identical trials against the pseudo-binomial fit
// (alpha, p_check) with alpha * p_check = E(B):
//   (a / floor(alpha) p q) * [ c1 |p~ - p_check| / (1 - 2 p~) + c2 a ],
//   c1 = n (2 k* - 1) + k - 1,
//   c2 = n (k (k* - 2) + 1) - k (k-1) k* + 3 k^2 - 4 k + 1.
BoundReport bound_thm21(const RunsSpec& spec, const MatchResult& match);

// Two-moment bound for identical trials; fits alpha and p_check internally
// so that both the mean and the variance of B are matched.  Carries the
// smoothing clamp min{1, M/(n-3k+3) + sqrt(2/pi) (1/4 + (n-3k+3)a(1-a))^(-1/2)}
// with M = 72 (1 - (2k-1) a) / a.
BoundReport bound_thm22(const RunsSpec& spec);

// Standalone bound on the total variation between B and B+1 for identical
// trials: min{1, 72 (1 - (2k-1)a)/(n a) + sqrt(2/pi) (1/4 + n a (1-a))^(-1/2)}.
BoundReport bound_prop24(const RunsSpec& spec);

// One-moment bound valid for per-trial probabilities:
//   (1 / floor(alpha) p q) * sum_l a_l [ sum_{|u-l| <= k-1} a_u + p_check ].
// Identical inputs keep the full 2k-1 overlap band at every index, matching
// bound_cor41; per-trial inputs truncate u to valid window positions.
BoundReport bound_thm31(const RunsSpec& spec, const MatchResult& match);

// The n-1 cyclic coupling weights, sorted descending:
//   v_l = a_cyc(l) [ p_{l-2}^2 (1 - p_{l-1}) p_l + p_{l+1} p_{l-1}^2 ],
// for l = 2..n with all trial indices taken mod n.
std::vector<double> v_sequence(const RunsSpec& spec);

// Clamp factor min{2, 4.6 / sqrt(T)} where T sums the n-4k+2 smallest
// entries of v_sequence.  Throws std::domain_error unless n >= 4(k1+k2).
double psi(const RunsSpec& spec);

// Bounds for the circular count M against the matched pseudo-binomial law,
// in three nested tiers (tier 1 sharpest, tier 3 fully closed-form).  All
// window sums are cyclic.  Throws std::domain_error unless n >= 4(k1+k2).
BoundReport bound_thm32(const RunsSpec& spec, const MatchResult& match, int tier);

// Distance between the laws of the linear count B and the circular count M:
//   2 * sum_{l=n-k+2}^{n} a_cyc(l) * min{1, 2.3 / sqrt(T)},
// where T sums the n-k-1 smallest entries of v_sequence.
BoundReport bound_thm33(const RunsSpec& spec);

// Closed form of bound_thm31 for identical trials:
//   (n-k+1) a [(2k-1) a + p_check] / (floor(alpha) p q).
BoundReport bound_cor41(const RunsSpec& spec, const MatchResult& match);

// Closed form for identical trials combining the circular-vs-linear distance
// with the tier-3 circular bound evaluated at the supplied matching.
BoundReport bound_cor42(const RunsSpec& spec, const MatchResult& match);

// Poisson approximation error for identical trials,
//   (1 - e^(-lambda))/lambda * coef * a^2,  lambda = (n-k+1) a,
// in the two shipped coefficient conventions (see PoissonVariant).
enum class PoissonVariant {
    Printed,  // coef = n k - n - 2 k^2 + 4 k - 1
    Table,    // coef = (2k-1) n - (k-1)(3k-1), the convention the shipped tables use
};

BoundReport bound_poisson(const RunsSpec& spec, PoissonVariant variant);

// Classical Poisson-approximation benchmark for identical trials: (2k-1) a.
BoundReport bound_barbour(const RunsSpec& spec);

// Poisson bounds for head runs (k1 = 1, k := k2): the classical value
// (2k+1) q p^k and its sharpened form [(2k+1) n - 3k^2 - 2k]/(n-k) * q p^k.
// Throws std::invalid_argument when k1 != 1.
std::pair<BoundReport, BoundReport> bound_gs_1k(const RunsSpec& spec);

// Specialisations for the pattern k1 = k2 = 1 (a failure followed by a
// success).  OneParam needs a one-parameter matching and takes the smaller
// of the two available one-moment bounds; TwoParam fits both moments
// internally.  Throws std::invalid_argument when (k1,k2) != (1,1).
enum class Runs11Variant {
    OneParam,
    TwoParam,
};

BoundReport bound_runs11(const RunsSpec& spec, Runs11Variant variant,
                         const std::optional<MatchResult>& match = std::nullopt);

}  // namespace runs
