#include "runs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "runs/kahan.hpp"

namespace runs {

namespace {

constexpr double root_2_over_pi = std::numbers::sqrt2 * std::numbers::inv_sqrtpi;

double powi(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void require_identical(const RunsSpec& spec, const char* who) {
    if (!spec.identical)
        throw std::invalid_argument(std::string(who) + ": identical trial probabilities required");
}

void require_usable(const RunsSpec& spec, const char* who) {
    if (spec.degenerate)
        throw std::invalid_argument(std::string(who) +
                                    ": degenerate probabilities (0 or 1) are not usable");
}

bool is_one_param(Matching c) {
    return c == Matching::OneParamFixAlpha || c == Matching::OneParamFixP ||
           c == Matching::OneParamNonIID;
}

void require_one_param(const MatchResult& match, const char* who) {
    if (!is_one_param(match.convention))
        throw std::invalid_argument(std::string(who) + ": one-parameter matching required");
}

// floor(alpha) p_check q_check, the denominator every Stein bound divides by.
double stein_denom(const MatchResult& match, const char* who) {
    if (match.floor_alpha() < 1)
        throw std::domain_error(std::string(who) + ": floor(alpha) must be >= 1");
    return static_cast<double>(match.floor_alpha()) * match.p_check * match.q_check();
}

// Window probability of identical trials without touching window positions,
// so it stays defined even when n < k1+k2.
double identical_a(const RunsSpec& spec) {
    return powi(1.0 - spec.probs[0], spec.k1) * powi(spec.probs[0], spec.k2);
}

void attach_match(BoundReport& r, const MatchResult& match) {
    r.alpha = match.alpha;
    r.p_check = match.p_check;
    r.notes.push_back("matching: " + matching_name(match.convention));
    for (const auto& w : match.warnings) r.notes.push_back("matching warning: " + w);
}

void finalize(BoundReport& r) {
    if (!std::isfinite(r.value))
        r.notes.push_back("value is not finite; the inputs lie outside the usable regime");
    else if (r.value < 0.0)
        r.notes.push_back("negative value: a failed hypothesis flag makes this no valid bound");
    else if (r.value > 1.0)
        r.notes.push_back("exceeds the trivial total-variation bound of 1; reported unclamped");
}

std::string format_value(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// min{1, M/(n-3k+3) + sqrt(2/pi) (1/4 + (n-3k+3) a (1-a))^(-1/2)},
// M = 72 (1 - (2k-1) a)/a.  Outside n >= 3k-3 the clamp degenerates to 1.
double smoothing_clamp(double a, long n, int k) {
    const double shift = static_cast<double>(n - 3L * k + 3);
    if (shift <= 0.0) return 1.0;
    const double M = 72.0 * (1.0 - (2.0 * k - 1.0) * a) / a;
    const double arg = M / shift + root_2_over_pi / std::sqrt(0.25 + shift * a * (1.0 - a));
    return std::min(1.0, arg);
}

// c2 in bound_thm21 and the matching coefficient in bound_thm22.
double second_coefficient(long n, int k, double ks) {
    const double kd = static_cast<double>(k);
    return static_cast<double>(n) * (kd * (ks - 2.0) + 1.0) - kd * (kd - 1.0) * ks +
           3.0 * kd * kd - 4.0 * kd + 1.0;
}

}  // namespace

bool BoundReport::all_preconditions_met() const noexcept {
    return std::all_of(preconditions.begin(), preconditions.end(),
                       [](const auto& pc) { return pc.second; });
}

std::string BoundReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["value"] = value;
    if (std::isfinite(alpha)) j["alpha"] = alpha;
    if (std::isfinite(p_check)) j["p_check"] = p_check;
    auto flags = nlohmann::ordered_json::object();
    for (const auto& [cond, ok] : preconditions) flags[cond] = ok;
    j["preconditions"] = flags;
    j["notes"] = notes;
    return j.dump();
}

double k_star(int k) {
    if (k < 2) throw std::invalid_argument("k_star: needs k1+k2 >= 2");
    return powi(static_cast<double>(k) / (k - 1.0), k - 1);
}

double p_tilde(const RunsSpec& spec) {
    require_identical(spec, "p_tilde");
    const int k = spec.k();
    return k * identical_a(spec) * k_star(k);
}

BoundReport bound_thm21(const RunsSpec& spec, const MatchResult& match) {
    require_identical(spec, "bound_thm21");
    require_usable(spec, "bound_thm21");
    require_one_param(match, "bound_thm21");
    const int k = spec.k();
    const long n = spec.n;
    const double a = identical_a(spec);
    const double ks = k_star(k);
    const double pt = k * a * ks;
    const double denom = stein_denom(match, "bound_thm21");
    const double dp = std::abs(pt - match.p_check);
    const double c1 = static_cast<double>(n) * (2.0 * ks - 1.0) + k - 1.0;
    const double c2 = second_coefficient(n, k, ks);

    BoundReport r;
    r.name = "thm21";
    r.value = a / denom * (c1 * dp / (1.0 - 2.0 * pt) + c2 * a);
    r.preconditions = {{"n >= 2(k1+k2)", n >= 2L * k},
                       {"p_tilde < 1/2", pt < 0.5}};
    attach_match(r, match);
    finalize(r);
    return r;
}

BoundReport bound_thm22(const RunsSpec& spec) {
    require_identical(spec, "bound_thm22");
    require_usable(spec, "bound_thm22");
    const MatchResult match = match_two_iid(spec);
    const int k = spec.k();
    const long n = spec.n;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double a = identical_a(spec);
    const double ks = k_star(k);
    const double pt = k * a * ks;
    const double denom = stein_denom(match, "bound_thm22");
    const double dp = std::abs(pt - match.p_check);

    const double e1 = kd * ks * (nd * (2.0 * ks - 1.0) + kd - 1.0) / (1.0 - 2.0 * pt);
    const double e2 = second_coefficient(n, k, ks);
    const double e3 = nd * ((2.0 * kd - 1.0) * kd * ks - 4.5 * kd * (kd - 1.0) - 1.0) -
                      kd * ks * (3.0 * kd - 1.0) * (kd - 1.0) +
                      (17.0 * kd * kd * kd - 30.0 * kd * kd + 15.0 * kd - 2.0) / 2.0;

    BoundReport r;
    r.name = "thm22";
    r.value = 2.0 * a * a / denom * (dp * (e1 + e2) + e3 * a) * smoothing_clamp(a, n, k);
    r.preconditions = {{"n >= 3(k1+k2)", n >= 3L * k},
                       {"n*a >= 8", nd * a >= 8.0},
                       {"p_tilde < 1/2", pt < 0.5}};
    attach_match(r, match);
    finalize(r);
    return r;
}

BoundReport bound_prop24(const RunsSpec& spec) {
    require_identical(spec, "bound_prop24");
    require_usable(spec, "bound_prop24");
    const int k = spec.k();
    const double a = identical_a(spec);
    const double na = static_cast<double>(spec.n) * a;

    BoundReport r;
    r.name = "prop24";
    r.value = std::min(1.0, 72.0 * (1.0 - (2.0 * k - 1.0) * a) / na +
                                root_2_over_pi / std::sqrt(0.25 + na * (1.0 - a)));
    r.preconditions = {{"n*a >= 8", na >= 8.0}};
    r.notes.push_back("bounds the total variation between the count and the count plus one");
    finalize(r);
    return r;
}

BoundReport bound_thm31(const RunsSpec& spec, const MatchResult& match) {
    require_usable(spec, "bound_thm31");
    require_one_param(match, "bound_thm31");
    const int k = spec.k();
    const long n = spec.n;
    const long W = spec.window_count_linear();
    const double denom = stein_denom(match, "bound_thm31");

    BoundReport r;
    r.name = "thm31";
    if (spec.identical) {
        const double a = identical_a(spec);
        r.value = static_cast<double>(W) * a * ((2.0 * k - 1.0) * a + match.p_check) / denom;
        r.notes.push_back("identical trials: the full 2k-1 overlap band is kept at every index");
    } else {
        std::vector<double> aw(static_cast<std::size_t>(W));
        for (long l = 1; l <= W; ++l) aw[static_cast<std::size_t>(l - 1)] = window_prob(spec, l);
        KahanSum total;
        for (long l = 1; l <= W; ++l) {
            KahanSum band;
            const long lo = std::max(1L, l - k + 1);
            const long hi = std::min(W, l + k - 1);
            for (long u = lo; u <= hi; ++u) band.add(aw[static_cast<std::size_t>(u - 1)]);
            total.add(aw[static_cast<std::size_t>(l - 1)] * (band.value() + match.p_check));
        }
        r.value = total.value() / denom;
    }
    r.preconditions = {{"n >= 2(k1+k2)", n >= 2L * k}};
    attach_match(r, match);
    finalize(r);
    return r;
}

std::vector<double> v_sequence(const RunsSpec& spec) {
    const long n = spec.n;
    std::vector<double> v;
    if (n < 2) return v;
    v.reserve(static_cast<std::size_t>(n - 1));
    for (long l = 2; l <= n; ++l) {
        const double al = window_prob(spec, l, /*circular=*/true);
        const double pm2 = spec.p_at_cyclic(l - 2);
        const double pm1 = spec.p_at_cyclic(l - 1);
        const double p0 = spec.p_at_cyclic(l);
        const double pp1 = spec.p_at_cyclic(l + 1);
        v.push_back(al * (pm2 * pm2 * (1.0 - pm1) * p0 + pp1 * pm1 * pm1));
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

namespace {

// Sum of the `count` smallest entries of the descending list v.
double tail_sum(const std::vector<double>& v, long count) {
    KahanSum sum;
    for (long i = 0; i < count; ++i) sum.add(v[v.size() - 1 - static_cast<std::size_t>(i)]);
    return sum.value();
}

}  // namespace

double psi(const RunsSpec& spec) {
    const int k = spec.k();
    if (spec.n < 4L * k) throw std::domain_error("psi: needs n >= 4(k1+k2)");
    const double tail = tail_sum(v_sequence(spec), spec.n - 4L * k + 2);
    if (!(tail > 0.0)) return 2.0;
    return std::min(2.0, 4.6 / std::sqrt(tail));
}

BoundReport bound_thm32(const RunsSpec& spec, const MatchResult& match, int tier) {
    require_usable(spec, "bound_thm32");
    if (tier < 1 || tier > 3)
        throw std::invalid_argument("bound_thm32: tier must be 1, 2, or 3");
    const int k = spec.k();
    const long n = spec.n;
    if (n < 4L * k) throw std::domain_error("bound_thm32: needs n >= 4(k1+k2)");
    const double clamp = psi(spec);
    const double denom = stein_denom(match, "bound_thm32");
    const double pc = match.p_check;

    std::vector<double> ac(static_cast<std::size_t>(n)), ps(static_cast<std::size_t>(n));
    for (long l = 1; l <= n; ++l) {
        ac[static_cast<std::size_t>(l - 1)] = window_prob(spec, l, /*circular=*/true);
        ps[static_cast<std::size_t>(l - 1)] = spec.p_at_cyclic(l);
    }
    auto acyc = [&](long j) {
        j %= n;
        if (j <= 0) j += n;
        return ac[static_cast<std::size_t>(j - 1)];
    };
    auto pcyc = [&](long j) {
        j %= n;
        if (j <= 0) j += n;
        return ps[static_cast<std::size_t>(j - 1)];
    };

    KahanSum total;
    for (long l = 1; l <= n; ++l) {
        double s1 = 0.0;  // overlap band of width 2k-1 around l
        for (long u = l - k + 1; u <= l + k - 1; ++u) s1 += acyc(u);

        double brace = 0.0;
        if (tier == 3) {
            double m = 0.0;
            for (long s = l - 2 * (k - 1); s <= l + 2 * (k - 1); ++s) m = std::max(m, pcyc(s));
            const double am = powi(1.0 - m, spec.k1) * powi(m, spec.k2);
            brace = am * (2.0 * (4.0 * k - 3.0) * am + pc);
        } else {
            double t1 = 0.0;  // band of width 4k-3 around l
            for (long v = l - 2 * k + 2; v <= l + 2 * k - 2; ++v) t1 += acyc(v);
            if (tier == 2) {
                brace = 2.0 * s1 * t1 + pc * s1;
            } else {
                double g1 = 0.0;
                for (long u = l - k + 1; u <= l + k - 1; ++u) {
                    double inner = 0.0;
                    for (long v = l - 2 * k + 2; v <= u - k; ++v) inner += acyc(v);
                    g1 += acyc(u) * inner;
                }
                double left = 0.0, right = 0.0;
                for (long u = l - k + 1; u <= l; ++u) left += acyc(u);
                for (long v = l + k; v <= l + 2 * k - 2; ++v) right += acyc(v);
                const double g2 = left * right;
                double g3 = 0.0;
                for (long u = l + 1; u <= l + k - 1; ++u) {
                    double inner = 0.0;
                    for (long v = u + k; v <= u + 2 * k - 2; ++v) inner += acyc(v);
                    g3 += acyc(u) * inner;
                }
                brace = g1 + g2 + g3 + s1 * t1 + pc * s1;
            }
        }
        total.add(ac[static_cast<std::size_t>(l - 1)] * brace);
    }

    BoundReport r;
    r.name = "thm32_tier" + std::to_string(tier);
    double scale = clamp / denom;
    if (tier == 3) scale *= 2.0 * k - 1.0;
    r.value = scale * total.value();
    r.preconditions = {{"n >= 4(k1+k2)", true}};
    r.notes.push_back("psi clamp = " + format_value(clamp));
    attach_match(r, match);
    finalize(r);
    return r;
}

BoundReport bound_thm33(const RunsSpec& spec) {
    require_usable(spec, "bound_thm33");
    const int k = spec.k();
    const long n = spec.n;

    double clamp = 1.0;
    const long count = n - k - 1;
    if (count > 0) {
        const double tail = tail_sum(v_sequence(spec), count);
        if (tail > 0.0) clamp = std::min(1.0, 2.3 / std::sqrt(tail));
    }
    KahanSum lead;  // cyclic windows that straddle the wrap point
    for (long l = n - k + 2; l <= n; ++l) {
        long j = (l - 1) % n;
        if (j < 0) j += n;
        lead.add(window_prob(spec, j + 1, /*circular=*/true));
    }

    BoundReport r;
    r.name = "thm33";
    r.value = 2.0 * lead.value() * clamp;
    r.preconditions = {{"n >= k1+k2", n >= k}};
    r.notes.push_back("distance between the linear-count and circular-count laws");
    finalize(r);
    return r;
}

BoundReport bound_cor41(const RunsSpec& spec, const MatchResult& match) {
    require_identical(spec, "bound_cor41");
    require_usable(spec, "bound_cor41");
    require_one_param(match, "bound_cor41");
    const int k = spec.k();
    const long n = spec.n;
    const double a = identical_a(spec);
    const double denom = stein_denom(match, "bound_cor41");

    BoundReport r;
    r.name = "cor41";
    r.value = static_cast<double>(spec.window_count_linear()) * a *
              ((2.0 * k - 1.0) * a + match.p_check) / denom;
    r.preconditions = {{"n >= 2(k1+k2)", n >= 2L * k}};
    attach_match(r, match);
    finalize(r);
    return r;
}

BoundReport bound_cor42(const RunsSpec& spec, const MatchResult& match) {
    require_identical(spec, "bound_cor42");
    require_usable(spec, "bound_cor42");
    const int k = spec.k();
    const long n = spec.n;
    const double a = identical_a(spec);
    const double p = spec.probs[0];
    const double denom = stein_denom(match, "bound_cor42");
    // Identical trials collapse every v_sequence entry to a p^3 (2-p).
    const double v_entry = a * p * p * p * (2.0 - p);

    double clamp33 = 1.0;
    if (n - k - 1 > 0) {
        const double tail = static_cast<double>(n - k - 1) * v_entry;
        if (tail > 0.0) clamp33 = std::min(1.0, 2.3 / std::sqrt(tail));
    }
    const double term1 = 2.0 * (k - 1.0) * a * clamp33;

    double psi_id = 2.0;
    if (n - 4L * k + 2 > 0) {
        const double tail = static_cast<double>(n - 4L * k + 2) * v_entry;
        if (tail > 0.0) psi_id = std::min(2.0, 4.6 / std::sqrt(tail));
    }
    const double term2 = static_cast<double>(n) * a * a * (2.0 * k - 1.0) *
                         (2.0 * (4.0 * k - 3.0) * a + match.p_check) * psi_id / denom;

    BoundReport r;
    r.name = "cor42";
    r.value = term1 + term2;
    r.preconditions = {{"n >= 4(k1+k2)", n >= 4L * k}};
    attach_match(r, match);
    finalize(r);
    return r;
}

BoundReport bound_poisson(const RunsSpec& spec, PoissonVariant variant) {
    require_identical(spec, "bound_poisson");
    require_usable(spec, "bound_poisson");
    const int k = spec.k();
    const long n = spec.n;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double a = identical_a(spec);
    const double lambda = static_cast<double>(spec.window_count_linear()) * a;
    const double factor = lambda > 0.0 ? -std::expm1(-lambda) / lambda : 1.0;
    const double coef = variant == PoissonVariant::Printed
                            ? nd * kd - nd - 2.0 * kd * kd + 4.0 * kd - 1.0
                            : (2.0 * kd - 1.0) * nd - (kd - 1.0) * (3.0 * kd - 1.0);

    BoundReport r;
    r.name = variant == PoissonVariant::Printed ? "poisson_printed" : "poisson_table";
    r.value = factor * coef * a * a;
    r.preconditions = {{"n >= 2(k1+k2)", n >= 2L * k}};
    r.notes.push_back("Poisson target with mean (n-k1-k2+1)a");
    r.notes.push_back(variant == PoissonVariant::Printed
                          ? "coefficient n*k-n-2k^2+4k-1"
                          : "coefficient (2k-1)n-(k-1)(3k-1)");
    finalize(r);
    return r;
}

BoundReport bound_barbour(const RunsSpec& spec) {
    require_identical(spec, "bound_barbour");
    require_usable(spec, "bound_barbour");
    const int k = spec.k();

    BoundReport r;
    r.name = "barbour";
    r.value = (2.0 * k - 1.0) * identical_a(spec);
    r.notes.push_back("Poisson target with mean (n-k1-k2+1)a");
    finalize(r);
    return r;
}

std::pair<BoundReport, BoundReport> bound_gs_1k(const RunsSpec& spec) {
    if (spec.k1 != 1)
        throw std::invalid_argument("bound_gs_1k: defined only for k1 == 1");
    require_identical(spec, "bound_gs_1k");
    require_usable(spec, "bound_gs_1k");
    const int k = spec.k2;
    const long n = spec.n;
    const double p = spec.probs[0];
    const double base = (1.0 - p) * powi(p, k);

    BoundReport basic;
    basic.name = "gs_1k";
    basic.value = (2.0 * k + 1.0) * base;
    basic.preconditions = {{"n >= 2(k2+1)", n >= 2L * (k + 1)}};
    basic.notes.push_back("Poisson target with mean (n-k2)(1-p)p^k2");
    finalize(basic);

    BoundReport improved;
    improved.name = "gs_1k_improved";
    improved.value = ((2.0 * k + 1.0) * static_cast<double>(n) - 3.0 * k * k - 2.0 * k) /
                     static_cast<double>(n - k) * base;
    // The sharpened coefficient shares the classical bound's regime; below
    // n = 2(k2+1) its numerator can turn negative, where no distance bound
    // can hold, so the regime flag is carried over from the basic form.
    improved.preconditions = {{"n > k2", n > k},
                              {"n >= 2(k2+1)", n >= 2L * (k + 1)}};
    improved.notes.push_back("Poisson target with mean (n-k2)(1-p)p^k2");
    finalize(improved);
    return {basic, improved};
}

BoundReport bound_runs11(const RunsSpec& spec, Runs11Variant variant,
                         const std::optional<MatchResult>& match) {
    if (spec.k1 != 1 || spec.k2 != 1)
        throw std::invalid_argument("bound_runs11: defined only for k1 == k2 == 1");
    require_identical(spec, "bound_runs11");
    require_usable(spec, "bound_runs11");
    const long n = spec.n;
    const double nd = static_cast<double>(n);
    const double p = spec.probs[0];
    const double a = (1.0 - p) * p;
    const double pt = 4.0 * a;

    BoundReport r;
    if (variant == Runs11Variant::OneParam) {
        if (!match)
            throw std::invalid_argument("bound_runs11: one-parameter variant needs a matching");
        require_one_param(*match, "bound_runs11");
        const double denom = stein_denom(*match, "bound_runs11");
        const double dp = std::abs(pt - match->p_check);
        const double first = (3.0 * nd + 1.0) * dp / (1.0 - 2.0 * pt) + (nd + 1.0) * a;
        const double second = (nd - 1.0) * (3.0 * a + match->p_check);
        r.name = "runs11_one";
        r.value = a / denom * std::min(first, second);
        r.preconditions = {{"n >= 4", n >= 4},
                           {"p_tilde < 1/2", pt < 0.5}};
        attach_match(r, *match);
    } else {
        const MatchResult two = match_two_iid(spec);
        const double denom = stein_denom(two, "bound_runs11");
        const double dp = std::abs(pt - two.p_check);
        const double bracket =
            dp * ((12.0 * nd + 4.0) / (1.0 - 2.0 * pt) + (nd + 1.0)) + 2.0 * (nd + 1.0) * a;
        r.name = "runs11_two";
        r.value = 2.0 * a * a / denom * bracket * smoothing_clamp(a, n, 2);
        r.preconditions = {{"n >= 6", n >= 6},
                           {"n*a >= 8", nd * a >= 8.0},
                           {"p_tilde < 1/2", pt < 0.5}};
        attach_match(r, two);
    }
    finalize(r);
    return r;
}

}  // namespace runs
