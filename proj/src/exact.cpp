#include "runs/exact.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>

#include "runs/bits.hpp"
#include "runs/kahan.hpp"
#include "runs/threads.hpp"

namespace runs {

namespace {

void require_identical(const RunsSpec& spec, const char* op) {
    if (!spec.identical)
        throw std::invalid_argument(std::string(op) + ": requires identical trial probabilities");
}

double identical_a(const RunsSpec& spec) {
    // (1-p)^k1 p^k2 via repeated multiplication (exact for dyadic p like 0.75)
    double a = 1.0;
    for (int j = 0; j < spec.k1; ++j) a *= 1.0 - spec.probs[0];
    for (int j = 0; j < spec.k2; ++j) a *= spec.probs[0];
    return a;
}

// ---------------------------------------------------------------- recursion

template <typename T>
std::vector<T> recursive_core(int k1, int k2, long n, const T& a) {
    const int k = k1 + k2;
    const long M = n / k;
    const std::size_t width = static_cast<std::size_t>(M) + 1;

    // Ring of the last k rows: slot n' mod k holds row n'-k when row n' is
    // about to be computed, which is exactly the lag the recursion needs.
    std::vector<std::vector<T>> ring(static_cast<std::size_t>(k));
    std::vector<T> delta0(width, T(0));
    delta0[0] = T(1);
    for (int r = 0; r < k; ++r) ring[static_cast<std::size_t>(r)] = delta0;
    if (n < k) return delta0;

    std::vector<T> row(width);
    for (long np = k; np <= n; ++np) {
        const auto& prev  = ring[static_cast<std::size_t>((np - 1) % k)];  // row np-1
        const auto& older = ring[static_cast<std::size_t>(np % k)];        // row np-k
        for (long m = 0; m <= M; ++m) {
            T v = prev[static_cast<std::size_t>(m)];
            if (m >= 1) v += a * older[static_cast<std::size_t>(m - 1)];
            v -= a * older[static_cast<std::size_t>(m)];
            row[static_cast<std::size_t>(m)] = v;
        }
        ring[static_cast<std::size_t>(np % k)] = row;
    }
    return ring[static_cast<std::size_t>(n % k)];
}

// -------------------------------------------------------------- closed form

// Exact multinomial (N; N-l-m, l, m) = C(N,m) C(N-m,l) as a big integer.
BigInt multinomial_big(long N, long l, long m) {
    return big_binomial(N, m) * big_binomial(N - m, l);
}

template <typename T>
std::vector<T> closed_form_rational_core(int k1, int k2, long n, const T& a) {
    const int k = k1 + k2;
    const long M = n / k;
    std::vector<T> masses(static_cast<std::size_t>(M) + 1, T(0));
    for (long m = 0; m <= M; ++m) {
        T s(0);
        for (long l = 0; l + m <= M; ++l) {
            const long r = l + m;
            const long N = n - r * (k - 1);
            T term = T(multinomial_big(N, l, m)) * rational_pow(a, static_cast<unsigned long>(r));
            if (l % 2 != 0)
                s -= term;
            else
                s += term;
        }
        masses[static_cast<std::size_t>(m)] = s;
    }
    return masses;
}

// ------------------------------------------------------------------- DP core

template <typename T>
std::vector<T> dp_core(const RunsSpec& spec, bool circular) {
    const int k = spec.k();
    if (k > 22)
        throw std::invalid_argument("pmf_dp: k1+k2 must be <= 22 (state space 2^(k-1))");
    const long n = spec.n;
    const long M = n / k;
    const std::size_t width = static_cast<std::size_t>(M) + 1;
    const std::uint32_t S = 1u << (k - 1);
    const std::uint32_t mask = S - 1;
    // New outcome closes a window iff it is a success and the previous k-1
    // outcomes were k2-1 successes (most recent first) preceded by k1 failures.
    const std::uint32_t match_state = (1u << (spec.k2 - 1)) - 1;

    std::vector<T> p_of(static_cast<std::size_t>(n) + 1);
    for (long t = 1; t <= n; ++t) p_of[static_cast<std::size_t>(t)] = T(spec.p_at(t));

    std::vector<T> result(width, T(0));

    // One DP sweep over trials [first_trial, n] starting from `init` with
    // outcomes of the k-1 preceding slots encoded in each state (bit j holds
    // the outcome j+1 steps back).  Returns the final (state, count) table.
    auto sweep = [&](std::vector<std::vector<T>> dp, long first_trial) {
        std::vector<std::vector<T>> ndp(S, std::vector<T>(width, T(0)));
        for (long i = first_trial; i <= n; ++i) {
            for (auto& rowv : ndp)
                std::fill(rowv.begin(), rowv.end(), T(0));
            const T pi = p_of[static_cast<std::size_t>(i)];
            const T qi = T(1) - pi;
            for (std::uint32_t s = 0; s < S; ++s) {
                const std::uint32_t s0 = (s << 1) & mask;
                const std::uint32_t s1 = s0 | 1u;
                const bool completes = (s == match_state);
                for (std::size_t m = 0; m < width; ++m) {
                    const T& w = dp[s][m];
                    if (w == T(0)) continue;
                    ndp[s0][m] += w * qi;
                    const std::size_t m1 = m + (completes ? 1u : 0u);
                    assert(m1 < width);
                    ndp[s1][m1] += w * pi;
                }
            }
            dp.swap(ndp);
        }
        return dp;
    };

    if (!circular) {
        // All-ones padding: a window needs k1 >= 1 failures, so fictitious
        // successes before trial 1 can never complete one.
        std::vector<std::vector<T>> dp(S, std::vector<T>(width, T(0)));
        dp[mask][0] = T(1);
        dp = sweep(std::move(dp), 1);
        for (std::uint32_t s = 0; s < S; ++s)
            for (std::size_t m = 0; m < width; ++m) result[m] += dp[s][m];
        return result;
    }

    // Circular: every cyclic window self-conflicts when k > n, so M == 0.
    if (k > n) {
        result[0] = T(1);
        return result;
    }

    // Condition on the first k-1 outcomes w (trial t at bit k-1-t), run the
    // DP over trials k..n, then count the wrap-around windows from the final
    // state (trials n-k+2..n) plus the conditioned prefix.
    auto cyclic_trial = [&](long t) { return ((t - 1) % n) + 1; };
    for (std::uint32_t w = 0; w < S; ++w) {
        T prefix_prob(1);
        for (long t = 1; t <= k - 1; ++t) {
            const bool success = ((w >> (k - 1 - t)) & 1u) != 0;
            prefix_prob *= success ? p_of[static_cast<std::size_t>(t)]
                                   : T(1) - p_of[static_cast<std::size_t>(t)];
        }
        if (prefix_prob == T(0)) continue;

        std::vector<std::vector<T>> dp(S, std::vector<T>(width, T(0)));
        dp[w][0] = prefix_prob;
        dp = sweep(std::move(dp), k);

        for (std::uint32_t s = 0; s < S; ++s) {
            // wrap-around windows start at l in [n-k+2, n]
            int wrapped = 0;
            for (long l = n - k + 2; l <= n; ++l) {
                bool ok = true;
                for (int j = 0; j < k && ok; ++j) {
                    const long tau = cyclic_trial(l + j);
                    bool outcome;
                    if (tau >= n - k + 2)
                        outcome = ((s >> (n - tau)) & 1u) != 0;  // final state
                    else
                        outcome = ((w >> (k - 1 - tau)) & 1u) != 0;  // prefix
                    const bool want = j >= spec.k1;
                    ok = (outcome == want);
                }
                if (ok) ++wrapped;
            }
            for (std::size_t m = 0; m < width; ++m) {
                const T& mass = dp[s][m];
                if (mass == T(0)) continue;
                const std::size_t mt = m + static_cast<std::size_t>(wrapped);
                assert(mt < width);
                result[mt] += mass;
            }
        }
    }
    return result;
}

// ------------------------------------------------------------- brute force

std::vector<double> bruteforce_double_core(const RunsSpec& spec, bool circular, int threads) {
    const int k = spec.k();
    const long n = spec.n;
    if (n > 24)
        throw std::invalid_argument("pmf_bruteforce: n must be <= 24 (2^n enumeration)");
    const long M = n / k;
    const std::size_t width = static_cast<std::size_t>(M) + 1;
    const std::uint64_t total = 1ULL << n;

    const std::uint64_t window_mask =
        circular ? ((n >= k) ? ((1ULL << n) - 1) : 0ULL)
                 : ((n - k + 1 > 0) ? ((1ULL << (n - k + 1)) - 1) : 0ULL);

    // Identical fast path: weight depends only on the success count.
    std::vector<double> wt_by_pop;
    if (spec.identical) {
        wt_by_pop.assign(static_cast<std::size_t>(n) + 1, 0.0);
        const double p = spec.probs[0], q = 1.0 - p;
        for (long c = 0; c <= n; ++c) {
            double w = 1.0;
            for (long i = 0; i < c; ++i) w *= p;
            for (long i = c; i < n; ++i) w *= q;
            wt_by_pop[static_cast<std::size_t>(c)] = w;
        }
    }

    // Fixed 256-chunk layout with an ordered merge keeps the float sums
    // bit-identical no matter how many workers execute the chunks.
    constexpr int kChunks = 256;
    std::vector<std::vector<double>> partial(kChunks, std::vector<double>(width, 0.0));

    auto run_chunk = [&](int c) {
        const std::uint64_t lo = total * static_cast<std::uint64_t>(c) / kChunks;
        const std::uint64_t hi = total * (static_cast<std::uint64_t>(c) + 1) / kChunks;
        auto& bucket = partial[static_cast<std::size_t>(c)];
        for (std::uint64_t s = lo; s < hi; ++s) {
            const std::uint64_t word = circular ? (s | (s << n)) : s;
            const int count =
                static_cast<int>(std::popcount(window_hit_mask(word, spec.k1, spec.k2) & window_mask));
            double w;
            if (spec.identical) {
                w = wt_by_pop[static_cast<std::size_t>(std::popcount(s))];
            } else {
                w = 1.0;
                for (long t = 0; t < n; ++t) {
                    const double pt = spec.probs[static_cast<std::size_t>(t)];
                    w *= ((s >> t) & 1ULL) ? pt : 1.0 - pt;
                }
            }
            bucket[static_cast<std::size_t>(count)] += w;
        }
    };

    const int T = worker_count(threads);
    if (T <= 1) {
        for (int c = 0; c < kChunks; ++c) run_chunk(c);
    } else {
        std::vector<std::future<void>> futs;
        futs.reserve(static_cast<std::size_t>(T));
        for (int w = 0; w < T; ++w) {
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (int c = w; c < kChunks; c += T) run_chunk(c);
            }));
        }
        for (auto& f : futs) f.get();
    }

    std::vector<double> masses(width, 0.0);
    for (int c = 0; c < kChunks; ++c)
        for (std::size_t m = 0; m < width; ++m) masses[m] += partial[static_cast<std::size_t>(c)][m];
    return masses;
}

std::vector<Rational> bruteforce_rational_core(const RunsSpec& spec, bool circular) {
    const int k = spec.k();
    const long n = spec.n;
    if (n > 24)
        throw std::invalid_argument("pmf_bruteforce: n must be <= 24 (2^n enumeration)");
    const long M = n / k;
    std::vector<Rational> masses(static_cast<std::size_t>(M) + 1, Rational(0));

    const std::uint64_t window_mask =
        circular ? ((n >= k) ? ((1ULL << n) - 1) : 0ULL)
                 : ((n - k + 1 > 0) ? ((1ULL << (n - k + 1)) - 1) : 0ULL);

    std::vector<Rational> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    for (long t = 0; t < n; ++t) {
        p[static_cast<std::size_t>(t)] = Rational(spec.identical ? spec.probs[0]
                                                                 : spec.probs[static_cast<std::size_t>(t)]);
        q[static_cast<std::size_t>(t)] = Rational(1) - p[static_cast<std::size_t>(t)];
    }

    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t s = 0; s < total; ++s) {
        const std::uint64_t word = circular ? (s | (s << n)) : s;
        const int count =
            static_cast<int>(std::popcount(window_hit_mask(word, spec.k1, spec.k2) & window_mask));
        Rational w(1);
        for (long t = 0; t < n; ++t)
            w *= ((s >> t) & 1ULL) ? p[static_cast<std::size_t>(t)] : q[static_cast<std::size_t>(t)];
        masses[static_cast<std::size_t>(count)] += w;
    }
    return masses;
}

}  // namespace

// ----------------------------------------------------------------- wrappers

Pmf pmf_recursive(const RunsSpec& spec) {
    require_identical(spec, "pmf_recursive");
    Pmf out;
    out.masses = recursive_core<double>(spec.k1, spec.k2, spec.n, identical_a(spec));
    out.clamp_tiny_negatives();
    return out;
}

std::vector<Rational> pmf_recursive_rational(const RunsSpec& spec) {
    require_identical(spec, "pmf_recursive_rational");
    const Rational p(spec.probs[0]);
    Rational a(1);
    for (int j = 0; j < spec.k1; ++j) a *= Rational(1) - p;
    for (int j = 0; j < spec.k2; ++j) a *= p;
    return recursive_core<Rational>(spec.k1, spec.k2, spec.n, a);
}

Pmf pmf_closed_form(const RunsSpec& spec) {
    require_identical(spec, "pmf_closed_form");
    const int k = spec.k();
    const long n = spec.n;
    const long M = n / k;
    const double a = identical_a(spec);

    Pmf out;
    out.masses.assign(static_cast<std::size_t>(M) + 1, 0.0);
    if (a == 0.0) {  // degenerate p: no window can ever occur
        out.masses[0] = 1.0;
        return out;
    }

    std::vector<double> pow_a(static_cast<std::size_t>(M) + 1, 1.0);
    for (long r = 1; r <= M; ++r)
        pow_a[static_cast<std::size_t>(r)] = pow_a[static_cast<std::size_t>(r - 1)] * a;

    const Rational a_rat(a);
    for (long m = 0; m <= M; ++m) {
        KahanSum sum;
        double abssum = 0.0;
        for (long l = 0; l + m <= M; ++l) {
            const long r = l + m;
            const long N = n - r * (k - 1);
            const double coef = multinomial_big(N, l, m).convert_to<double>();
            const double mag = coef * pow_a[static_cast<std::size_t>(r)];
            sum.add(l % 2 != 0 ? -mag : mag);
            abssum += mag;
        }
        double val = sum.value();
        // The sum alternates; when cancellation eats more than ~10 digits the
        // double value is untrustworthy, so recompute this entry exactly.
        const bool bad = !std::isfinite(val) || !std::isfinite(abssum) ||
                         abssum > 1e6 * std::max(std::abs(val), 1e-300);
        if (bad) {
            Rational s(0);
            for (long l = 0; l + m <= M; ++l) {
                const long r = l + m;
                const long N = n - r * (k - 1);
                Rational term = Rational(multinomial_big(N, l, m)) *
                                rational_pow(a_rat, static_cast<unsigned long>(r));
                if (l % 2 != 0)
                    s -= term;
                else
                    s += term;
            }
            val = to_double(s);
        }
        out.masses[static_cast<std::size_t>(m)] = val;
    }
    out.clamp_tiny_negatives();
    return out;
}

std::vector<Rational> pmf_closed_form_rational(const RunsSpec& spec) {
    require_identical(spec, "pmf_closed_form_rational");
    Rational p(spec.probs[0]);
    Rational a(1);
    for (int j = 0; j < spec.k1; ++j) a *= Rational(1) - p;
    for (int j = 0; j < spec.k2; ++j) a *= p;
    return closed_form_rational_core<Rational>(spec.k1, spec.k2, spec.n, a);
}

Pmf pmf_dp(const RunsSpec& spec, bool circular) {
    Pmf out;
    out.masses = dp_core<double>(spec, circular);
    out.clamp_tiny_negatives();
    return out;
}

std::vector<Rational> pmf_dp_rational(const RunsSpec& spec, bool circular) {
    return dp_core<Rational>(spec, circular);
}

Pmf pmf_bruteforce(const RunsSpec& spec, bool circular, int threads) {
    Pmf out;
    out.masses = bruteforce_double_core(spec, circular, threads);
    return out;
}

std::vector<Rational> pmf_bruteforce_rational(const RunsSpec& spec, bool circular) {
    return bruteforce_rational_core(spec, circular);
}

// ----------------------------------------------------------------------- PGF

PgfValue pgf_eval(const RunsSpec& spec, double t) {
    require_identical(spec, "pgf_eval");
    const int k = spec.k();
    const long n = spec.n;
    const long M = n / k;
    const double a = identical_a(spec);
    const double x = t - 1.0;

    KahanSum value, deriv;
    value.add(1.0);  // m = 0 term
    double pow_a = 1.0, pow_x = 1.0;
    for (long m = 1; m <= M; ++m) {
        // C(n - m(k-1), m), exact in double for every size used here
        const long N = n - m * (k - 1);
        double C = 1.0;
        for (long i = 1; i <= m; ++i) C = C * static_cast<double>(N - m + i) / static_cast<double>(i);
        pow_a *= a;                               // a^m
        const double ax_pow = pow_a * pow_x * x;  // (a(t-1))^m
        value.add(C * ax_pow);
        deriv.add(C * static_cast<double>(m) * pow_a * pow_x);  // m a^m x^{m-1}
        pow_x *= x;
    }
    return {t, value.value(), deriv.value()};
}

double PgfRelationReport::max_residual() const noexcept {
    double r = 0.0;
    for (double v : residual) r = std::max(r, v);
    return r;
}

PgfRelationReport check_pgf_relations(const RunsSpec& spec, const std::vector<double>& t_grid) {
    require_identical(spec, "check_pgf_relations");
    const int k = spec.k();
    const long n = spec.n;
    if (n < k) throw std::domain_error("check_pgf_relations: requires n >= k1+k2");
    const double a = identical_a(spec);
    const double kstar = std::pow(static_cast<double>(k) / (k - 1), k - 1);
    const double ptilde = k * a * kstar;

    auto at = [&](long nn, double t) {
        RunsSpec s = RunsSpec::iid(spec.k1, spec.k2, std::max(nn, 1L), spec.probs[0]);
        if (nn < 1) return PgfValue{t, 1.0, 0.0};  // empty product: phi = 1
        return pgf_eval(s, t);
    };

    PgfRelationReport rep;
    for (double t : t_grid) {
        const PgfValue fn   = at(n, t);
        const PgfValue fn1  = at(n - 1, t);
        const PgfValue fnk  = at(n - k, t);
        const double x = t - 1.0;

        const double r1 = fn.derivative -
                          ((n - k + 1) * a * fnk.value - a * (k - 1) * x * fnk.derivative);
        const double r2 = fn1.derivative - ((n - k) * a * fnk.value - a * k * x * fnk.derivative);
        const double r3 = fn.derivative -
                          (fn1.derivative + a * fnk.value + a * x * fnk.derivative);

        KahanSum tail;
        for (int u = 0; u <= k - 2; ++u) {
            const double cu = (static_cast<double>(n + u + 1) / (k - 1)) *
                              std::pow(static_cast<double>(k) / (k - 1), u);
            tail.add(cu * at(n - k + u + 1, t).value);
        }
        const double r4 = (1.0 + ptilde * x) * fn.derivative -
                          ((static_cast<double>(n) / k) * ptilde * fn.value - a * tail.value());

        rep.residual[0] = std::max(rep.residual[0], std::abs(r1));
        rep.residual[1] = std::max(rep.residual[1], std::abs(r2));
        rep.residual[2] = std::max(rep.residual[2], std::abs(r3));
        rep.residual[3] = std::max(rep.residual[3], std::abs(r4));
    }
    return rep;
}

// -------------------------------------------------------------- waiting time

WaitingTime waiting_time(const RunsSpec& spec) {
    require_identical(spec, "waiting_time");
    const double a = identical_a(spec);
    if (a <= 0.0) throw std::domain_error("waiting_time: requires a(p) > 0");
    const int k = spec.k();

    WaitingTime wtime;
    wtime.mean = 1.0 / a;
    wtime.variance = (1.0 - (2 * k - 1) * a) / (a * a);

    // Coefficients of a z^k / (1 - z + a z^k):  w_j = w_{j-1} - a w_{j-k},
    // seeded by +a at j = k.  Truncate once the mass reaches 1 - 1e-12.
    const std::size_t cap = static_cast<std::size_t>(
        std::min(1.0e6, 400.0 * wtime.mean + 1000.0));
    std::vector<double>& w = wtime.pmf_prefix;
    w.assign(cap + 1, 0.0);
    KahanSum cum;
    std::size_t last = cap;
    for (std::size_t j = 1; j <= cap; ++j) {
        double v = w[j - 1];
        if (j >= static_cast<std::size_t>(k)) v -= a * w[j - static_cast<std::size_t>(k)];
        if (j == static_cast<std::size_t>(k)) v += a;
        w[j] = v;
        cum.add(v);
        if (cum.value() >= 1.0 - 1e-12) {
            last = j;
            break;
        }
    }
    w.resize(last + 1);
    return wtime;
}

}  // namespace runs
