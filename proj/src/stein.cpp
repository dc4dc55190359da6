#include "runs/stein.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "runs/bits.hpp"
#include "runs/kahan.hpp"

namespace runs {

TestFunction::TestFunction(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw std::invalid_argument("test function: empty value table");
    if (values[0] != 0.0) throw std::invalid_argument("test function: g(0) must be 0");
}

TestFunction TestFunction::zero(long m_max) {
    return TestFunction(std::vector<double>(static_cast<std::size_t>(m_max) + 1, 0.0));
}

TestFunction random_test_function(long m_max, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(m_max) + 1);
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = unif(rng);
    return TestFunction(std::move(v));
}

double apply_A0(const PseudoBinomial& pb, const TestFunction& g, long m) {
    if (m < 0 || m > pb.floor_alpha())
        throw std::out_of_range("apply_A0: m outside {0,…,floor(alpha)}");
    const double md = static_cast<double>(m);
    return (pb.alpha - md) * pb.p_check * g.at(m + 1) - md * pb.q_check() * g.at(m);
}

SteinResidual stein_identity_A0(const PseudoBinomial& pb, const TestFunction& g) {
    const auto pmf = pb_pmf(pb);
    KahanSum acc;
    for (long m = 0; m <= pb.floor_alpha(); ++m) acc += pmf.prob(m) * apply_A0(pb, g, m);
    return {acc.value()};
}

SteinResidual stein_identity_A1(const RunsSpec& spec, const TestFunction& g) {
    if (!spec.identical)
        throw std::invalid_argument("stein_identity_A1: identical probabilities required");
    const int k = spec.k();
    if (spec.n < k) throw std::domain_error("stein_identity_A1: n must be at least k1+k2");
    if (spec.n > 16)
        throw std::invalid_argument("stein_identity_A1: full enumeration needs n <= 16");

    const long n = spec.n;
    const double p = spec.probs[0];
    const double a = window_prob(spec, 1);
    const double kd = static_cast<double>(k);
    const double ratio = kd / (kd - 1.0);
    const double ptilde = kd * a * std::pow(ratio, k - 1);

    // correction weights c_u = ((n+u+1)/(k-1)) * ratio^u, u = 0..k-2
    std::vector<double> cu(static_cast<std::size_t>(k) - 1);
    double ru = 1.0;
    for (int u = 0; u <= k - 2; ++u) {
        cu[static_cast<std::size_t>(u)] = (static_cast<double>(n + u) + 1.0) / (kd - 1.0) * ru;
        ru *= ratio;
    }

    // probability of a sequence depends only on its success count
    std::vector<double> pw_p(static_cast<std::size_t>(n) + 1, 1.0);
    std::vector<double> pw_q(static_cast<std::size_t>(n) + 1, 1.0);
    for (long c = 1; c <= n; ++c) {
        pw_p[static_cast<std::size_t>(c)] = pw_p[static_cast<std::size_t>(c - 1)] * p;
        pw_q[static_cast<std::size_t>(c)] = pw_q[static_cast<std::size_t>(c - 1)] * (1.0 - p);
    }

    const double mean_count = static_cast<double>(n) / kd;
    const std::uint64_t total = 1ULL << n;
    KahanSum acc;
    for (std::uint64_t s = 0; s < total; ++s) {
        const std::uint64_t hits = window_hit_mask(s, spec.k1, spec.k2);
        const long bn = std::popcount(hits & prefix_window_mask(n, k));
        double val = (mean_count - static_cast<double>(bn)) * ptilde * g.at(bn + 1) -
                     (1.0 - ptilde) * static_cast<double>(bn) * g.at(bn);
        double corr = 0.0;
        for (int u = 0; u <= k - 2; ++u) {
            const long bt = std::popcount(hits & prefix_window_mask(n - k + u + 1, k));
            corr += cu[static_cast<std::size_t>(u)] * g.at(bt + 1);
        }
        val -= a * corr;
        const int pop = std::popcount(s);
        acc += val * pw_p[static_cast<std::size_t>(pop)] *
               pw_q[static_cast<std::size_t>(n - pop)];
    }
    return {acc.value()};
}

}  // namespace runs
