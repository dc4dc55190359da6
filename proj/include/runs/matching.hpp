#pragma once

#include <string>
#include <vector>

#include "runs/model.hpp"
#include "runs/pseudobinomial.hpp"

namespace runs {

enum class Matching {
    OneParamFixAlpha,
    OneParamFixP,
    TwoParamIID,
    OneParamNonIID,
    TwoParamM,
};

std::string matching_name(Matching m);

// A fitted (α, p̌) pair together with the convention that produced it.  The
// one-parameter conventions pin α·p̌ to the mean; the two-parameter ones pin
// the variance as well.
struct MatchResult {
    double alpha = 0.0;
    double p_check = 0.0;
    Matching convention = Matching::OneParamFixAlpha;
    std::vector<std::string> warnings;

    double q_check() const { return 1.0 - p_check; }
    long floor_alpha() const;
    PseudoBinomial pb() const { return PseudoBinomial{alpha, p_check}; }
};

// Choose α, solve α·p̌ = mean of the linear count.  Non-identical inputs use
// the summed window probabilities and are tagged OneParamNonIID.
MatchResult match_one_fix_alpha(const RunsSpec& spec, double alpha);

// Choose p̌, solve α·p̌ = mean of the linear count.  ⌊α⌋ = 0 is reported as a
// warning here; bounds that need ⌊α⌋ ≥ 1 refuse such fits themselves.
MatchResult match_one_fix_p(const RunsSpec& spec, double p_check);

// Match mean and variance of the linear count for identical probabilities
// (n ≥ 2k so the closed-form variance applies):
//   p̌ = [(2k−1)n − (k−1)(3k−1)]·a/(n−k+1),  α = (n−k+1)²/[(2k−1)n−(k−1)(3k−1)].
MatchResult match_two_iid(const RunsSpec& spec);

// Match mean and variance of the circular count M under the chosen pair
// convention: q̌ = Var(M)/E(M), α = E(M)/p̌.
MatchResult match_two_M(const RunsSpec& spec,
                        PairConvention convention = PairConvention::CyclicPairs);

// Named choices of α for the one-parameter matching, as used by the shipped
// table presets: α = n/(k1+k2) or α = n/(3(k1+k2)).
enum class AlphaPreset {
    NOverK,
    NOver3K,
};

std::string preset_name(AlphaPreset preset);
double preset_alpha(const RunsSpec& spec, AlphaPreset preset);

}  // namespace runs
