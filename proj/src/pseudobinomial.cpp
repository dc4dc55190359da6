#include "runs/pseudobinomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "runs/kahan.hpp"

namespace runs {

PseudoBinomial::PseudoBinomial(double alpha_, double p_check_)
    : alpha(alpha_), p_check(p_check_) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::invalid_argument("pseudo-binomial: alpha must be a positive real");
    if (!(p_check > 0.0) || !(p_check < 1.0))
        throw std::invalid_argument("pseudo-binomial: p_check must lie in (0,1)");
}

long PseudoBinomial::floor_alpha() const {
    return static_cast<long>(std::floor(alpha));
}

double genbinom(double alpha, long m) {
    if (m < 0) throw std::domain_error("genbinom: m must be non-negative");
    if (static_cast<double>(m) > std::floor(alpha))
        throw std::domain_error("genbinom: m exceeds floor(alpha)");
    double out = 1.0;
    for (long j = 0; j < m; ++j)
        out *= (alpha - static_cast<double>(j)) / static_cast<double>(j + 1);
    return out;
}

namespace {

// log of the unnormalized weight genbinom(α,m) p̌^m q̌^{α−m} for m = 0..⌊α⌋.
// The coefficient is accumulated incrementally:
//   log genbinom(α,m+1) = log genbinom(α,m) + log(α−m) − log(m+1).
std::vector<double> log_weights(const PseudoBinomial& pb) {
    const long M = pb.floor_alpha();
    const double lp = std::log(pb.p_check);
    const double lq = std::log1p(-pb.p_check);
    std::vector<double> lg(static_cast<std::size_t>(M) + 1);
    double lgb = 0.0;
    for (long m = 0; m <= M; ++m) {
        lg[static_cast<std::size_t>(m)] =
            lgb + static_cast<double>(m) * lp + (pb.alpha - static_cast<double>(m)) * lq;
        if (m < M)
            lgb += std::log(pb.alpha - static_cast<double>(m)) -
                   std::log(static_cast<double>(m + 1));
    }
    return lg;
}

}  // namespace

double PseudoBinomial::normalizer() const {
    // Every weight is at most ~1 (the full series with real exponent sums to
    // one), so plain exponentials cannot overflow.
    KahanSum c;
    for (double v : log_weights(*this)) c += std::exp(v);
    return c.value();
}

Pmf pb_pmf(const PseudoBinomial& pb) {
    const auto lg = log_weights(pb);
    const double top = *std::max_element(lg.begin(), lg.end());
    Pmf out;
    out.masses.resize(lg.size());
    KahanSum total;
    for (std::size_t i = 0; i < lg.size(); ++i) {
        out.masses[i] = std::exp(lg[i] - top);
        total += out.masses[i];
    }
    const double norm = total.value();
    for (auto& w : out.masses) w /= norm;
    return out;
}

MomentPair pb_moments(const PseudoBinomial& pb) {
    const auto pmf = pb_pmf(pb);
    return {pmf.mean(), pmf.variance()};
}

double delta_g_bound(const PseudoBinomial& pb) {
    const long M = pb.floor_alpha();
    if (M < 1) throw std::domain_error("delta_g_bound: floor(alpha) must be at least 1");
    return 2.0 / (static_cast<double>(M) * pb.p_check * (1.0 - pb.p_check));
}

}  // namespace runs
