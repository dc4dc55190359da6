#include "runs/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "runs/kahan.hpp"

namespace runs {

namespace {

void validate_common(int k1, int k2, long n) {
    if (k1 < 1 || k2 < 1)
        throw std::invalid_argument("RunsSpec: k1 and k2 must both be >= 1");
    if (n < 1)
        throw std::invalid_argument("RunsSpec: n must be >= 1");
}

bool check_prob(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("RunsSpec: probabilities must lie in [0,1]");
    return p == 0.0 || p == 1.0;  // degenerate endpoints are flagged, not rejected
}

}  // namespace

RunsSpec RunsSpec::iid(int k1, int k2, long n, double p) {
    validate_common(k1, k2, n);
    RunsSpec s;
    s.k1 = k1;
    s.k2 = k2;
    s.n = n;
    s.identical = true;
    s.degenerate = check_prob(p);
    s.probs = {p};
    return s;
}

RunsSpec RunsSpec::with_probs(int k1, int k2, std::vector<double> probs) {
    validate_common(k1, k2, static_cast<long>(probs.empty() ? 0 : probs.size()));
    RunsSpec s;
    s.k1 = k1;
    s.k2 = k2;
    s.n = static_cast<long>(probs.size());
    s.identical = false;
    s.degenerate = false;
    for (double p : probs) s.degenerate = check_prob(p) || s.degenerate;
    s.probs = std::move(probs);
    return s;
}

double RunsSpec::p_at(long l) const noexcept {
    return identical ? probs[0] : probs[static_cast<std::size_t>(l - 1)];
}

double RunsSpec::p_at_cyclic(long l) const noexcept {
    long i = (l - 1) % n;
    if (i < 0) i += n;
    return identical ? probs[0] : probs[static_cast<std::size_t>(i)];
}

std::string RunsSpec::describe() const {
    std::ostringstream os;
    os << "(k1=" << k1 << ",k2=" << k2 << ",n=" << n;
    if (identical)
        os << ",p=" << probs[0];
    else
        os << ",per-trial probs";
    os << ")";
    return os.str();
}

double window_prob(const RunsSpec& spec, long l, bool circular) {
    const int k = spec.k();
    if (circular) {
        if (l < 1 || l > spec.n)
            throw std::out_of_range("window_prob: circular index must be in [1, n]");
        // A cyclic window longer than the circle forces some trial to be both
        // a failure and a success, so the window never occurs.
        if (k > spec.n) return 0.0;
    } else {
        if (l < 1 || l > spec.n - k + 1)
            throw std::out_of_range("window_prob: linear index must be in [1, n-k1-k2+1]");
    }
    double a = 1.0;
    for (int j = 0; j < spec.k1; ++j)
        a *= 1.0 - (circular ? spec.p_at_cyclic(l + j) : spec.p_at(l + j));
    for (int j = spec.k1; j < k; ++j)
        a *= circular ? spec.p_at_cyclic(l + j) : spec.p_at(l + j);
    return a;
}

MomentPair linear_moments(const RunsSpec& spec) {
    const int k = spec.k();
    const long W = spec.window_count_linear();
    if (W == 0) return {0.0, 0.0};

    if (spec.identical) {
        const double a = window_prob(spec, 1);
        const double mean = static_cast<double>(W) * a;
        // Overlap count of window pairs, by how much room the index range
        // leaves: none (n <= k), all pairs (k < n <= 2k-1), or the band count
        // (n >= 2k).  Multiplied by a^2 these are the covariance corrections.
        double paircount2 = 0.0;  // twice the number of pairs l < r, r-l <= k-1
        const long n = spec.n;
        if (n <= k) {
            paircount2 = 0.0;
        } else if (n <= 2 * k - 1) {
            paircount2 = static_cast<double>(n - k) * static_cast<double>(n - k + 1);
        } else {
            paircount2 = 2.0 * static_cast<double>(n - 2 * k + 2) * (k - 1) +
                         static_cast<double>(k - 1) * static_cast<double>(k - 2);
        }
        const double var = mean - (static_cast<double>(W) + paircount2) * a * a;
        return {mean, var};
    }

    std::vector<double> a(static_cast<std::size_t>(W));
    for (long l = 1; l <= W; ++l) a[static_cast<std::size_t>(l - 1)] = window_prob(spec, l);

    KahanSum mean, sq, cross;
    for (long l = 0; l < W; ++l) {
        mean.add(a[static_cast<std::size_t>(l)]);
        sq.add(a[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(l)]);
        const long rmax = std::min(W - 1, l + k - 1);
        for (long r = l + 1; r <= rmax; ++r)
            cross.add(a[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(r)]);
    }
    return {mean.value(), mean.value() - sq.value() - 2.0 * cross.value()};
}

MomentPair circular_moments(const RunsSpec& spec, PairConvention convention) {
    const int k = spec.k();
    const long n = spec.n;
    if (k > n) return {0.0, 0.0};  // every cyclic window self-conflicts

    std::vector<double> a(static_cast<std::size_t>(n));
    for (long l = 1; l <= n; ++l)
        a[static_cast<std::size_t>(l - 1)] = window_prob(spec, l, /*circular=*/true);

    KahanSum mean, sq, cross;
    for (long l = 0; l < n; ++l) {
        mean.add(a[static_cast<std::size_t>(l)]);
        sq.add(a[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(l)]);
    }
    // Overlapping pairs l < r (0-based here), either by linear distance only
    // or additionally at cyclic distance <= k-1 across the wrap.
    for (long l = 0; l < n; ++l) {
        const long lin_max = std::min(n - 1, l + k - 1);
        for (long r = l + 1; r <= lin_max; ++r)
            cross.add(a[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(r)]);
        if (convention == PairConvention::CyclicPairs) {
            // wrap pairs: r - l >= n-k+1, skipping any already counted above
            const long wrap_min = std::max({l + 1, l + n - k + 1, l + k});
            for (long r = wrap_min; r < n; ++r)
                cross.add(a[static_cast<std::size_t>(l)] * a[static_cast<std::size_t>(r)]);
        }
    }
    return {mean.value(), mean.value() - sq.value() - 2.0 * cross.value()};
}

}  // namespace runs
