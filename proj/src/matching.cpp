#include "runs/matching.hpp"

#include <cmath>
#include <stdexcept>

namespace runs {

std::string matching_name(Matching m) {
    switch (m) {
        case Matching::OneParamFixAlpha: return "one-param-fix-alpha";
        case Matching::OneParamFixP: return "one-param-fix-p";
        case Matching::TwoParamIID: return "two-param-iid";
        case Matching::OneParamNonIID: return "one-param-non-iid";
        case Matching::TwoParamM: return "two-param-M";
    }
    throw std::logic_error("matching_name: unknown enum value");
}

long MatchResult::floor_alpha() const {
    return static_cast<long>(std::floor(alpha));
}

MatchResult match_one_fix_alpha(const RunsSpec& spec, double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::invalid_argument("match_one_fix_alpha: alpha must be a positive real");
    const double mean = linear_moments(spec).mean;
    const double p_check = mean / alpha;
    if (!(p_check > 0.0) || !(p_check < 1.0))
        throw std::domain_error("match_one_fix_alpha: resulting p_check not in (0,1)");
    if (std::floor(alpha) < 1.0)
        throw std::domain_error("match_one_fix_alpha: floor(alpha) = 0 is unusable downstream");
    MatchResult out;
    out.alpha = alpha;
    out.p_check = p_check;
    out.convention = spec.identical ? Matching::OneParamFixAlpha : Matching::OneParamNonIID;
    return out;
}

MatchResult match_one_fix_p(const RunsSpec& spec, double p_check) {
    if (!(p_check > 0.0) || !(p_check < 1.0))
        throw std::invalid_argument("match_one_fix_p: p_check must lie in (0,1)");
    const double mean = linear_moments(spec).mean;
    if (!(mean > 0.0))
        throw std::domain_error("match_one_fix_p: mean of the count is zero");
    MatchResult out;
    out.alpha = mean / p_check;
    out.p_check = p_check;
    out.convention = Matching::OneParamFixP;
    if (out.alpha < 1.0)
        out.warnings.push_back("floor(alpha) = 0: bounds needing floor(alpha) >= 1 will refuse");
    return out;
}

MatchResult match_two_iid(const RunsSpec& spec) {
    if (!spec.identical)
        throw std::invalid_argument("match_two_iid: identical probabilities required");
    const int k = spec.k();
    if (spec.n < 2L * k)
        throw std::domain_error("match_two_iid: needs n >= 2(k1+k2)");
    const double a = window_prob(spec, 1);
    const double nd = static_cast<double>(spec.n);
    const double W = static_cast<double>(spec.window_count_linear());
    const double D = (2.0 * k - 1.0) * nd - (k - 1.0) * (3.0 * k - 1.0);
    const double p_check = D * a / W;
    if (!(p_check > 0.0))
        throw std::domain_error("match_two_iid: degenerate window probability");
    if (p_check >= 1.0)
        throw std::domain_error("match_two_iid: p_check >= 1 (window probability too large)");
    MatchResult out;
    out.alpha = W * W / D;
    out.p_check = p_check;
    out.convention = Matching::TwoParamIID;
    return out;
}

MatchResult match_two_M(const RunsSpec& spec, PairConvention convention) {
    const auto mom = circular_moments(spec, convention);
    if (!(mom.mean > 0.0))
        throw std::domain_error("match_two_M: circular count has zero mean");
    const double q_check = mom.variance / mom.mean;
    if (!(q_check > 0.0) || !(q_check < 1.0))
        throw std::domain_error("match_two_M: variance/mean ratio not in (0,1)");
    MatchResult out;
    out.p_check = 1.0 - q_check;
    out.alpha = mom.mean / out.p_check;
    out.convention = Matching::TwoParamM;
    if (out.alpha < 1.0)
        out.warnings.push_back("floor(alpha) = 0: bounds needing floor(alpha) >= 1 will refuse");
    return out;
}

std::string preset_name(AlphaPreset preset) {
    switch (preset) {
        case AlphaPreset::NOverK: return "n/k";
        case AlphaPreset::NOver3K: return "n/(3k)";
    }
    throw std::logic_error("preset_name: unknown enum value");
}

double preset_alpha(const RunsSpec& spec, AlphaPreset preset) {
    const double k = static_cast<double>(spec.k());
    const double n = static_cast<double>(spec.n);
    switch (preset) {
        case AlphaPreset::NOverK: return n / k;
        case AlphaPreset::NOver3K: return n / (3.0 * k);
    }
    throw std::logic_error("preset_alpha: unknown enum value");
}

}  // namespace runs
