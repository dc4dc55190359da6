#pragma once

#include <vector>

#include "runs/model.hpp"
#include "runs/pmf.hpp"
#include "runs/rational.hpp"

namespace runs {

struct PgfValue {
    double t = 1.0;
    double value = 1.0;
    double derivative = 0.0;
};

// Max absolute residuals of the four PGF recurrences over a t-grid.
struct PgfRelationReport {
    double residual[4] = {0.0, 0.0, 0.0, 0.0};
    double max_residual() const noexcept;
};

struct WaitingTime {
    double mean = 0.0;      // 1/a(p)
    double variance = 0.0;  // (1 - (2k-1)a(p)) / a(p)^2
    // Leading power-series coefficients of the waiting-time PGF
    // a z^k / (1 - z + a z^k); index j holds P(T = j).
    std::vector<double> pmf_prefix;
};

// --- Exact PMF of the count, by four independent routes ---------------------
//
// All four agree on identical specs; pmf_dp and pmf_bruteforce also accept
// per-trial probabilities and a circular mode (windows wrap).  The brute-force
// route is the definitional oracle the others are tested against.

// Count recursion p(m,n) = p(m,n-1) + a [p(m-1,n-k) - p(m,n-k)].
Pmf pmf_recursive(const RunsSpec& spec);

// Alternating multinomial sum; evaluated in log space with sign tracking and
// an exact-rational fallback per support point when cancellation is severe.
Pmf pmf_closed_form(const RunsSpec& spec);

// Dynamic program over (last k-1 outcomes, count); k1+k2 <= 22.
Pmf pmf_dp(const RunsSpec& spec, bool circular = false);

// Full 2^n enumeration (n <= 24); parallel with a fixed chunk layout so the
// result is bit-identical for every thread count.  threads = 0 takes the
// default (hardware, capped by RUNS_APPROX_THREADS).
Pmf pmf_bruteforce(const RunsSpec& spec, bool circular = false, int threads = 0);

// Exact-rational variants (masses for m = 0,1,...); conversion of the input
// doubles to rationals is exact, so these are true oracles for the above.
std::vector<Rational> pmf_recursive_rational(const RunsSpec& spec);
std::vector<Rational> pmf_closed_form_rational(const RunsSpec& spec);
std::vector<Rational> pmf_dp_rational(const RunsSpec& spec, bool circular = false);
std::vector<Rational> pmf_bruteforce_rational(const RunsSpec& spec, bool circular = false);

// --- PGF -------------------------------------------------------------------

// phi_n(t) = sum_m C(n - m(k-1), m) (a(p)(t-1))^m and its t-derivative.
PgfValue pgf_eval(const RunsSpec& spec, double t);

// Verifies the four recurrences tying phi_n to phi_{n-1}, phi_{n-k}, ...,
// phi_{n-1} (relation 4 couples phi_n' to a weighted sum over k-1 shorter
// PGFs with weights ((n+u+1)/(k-1)) (k/(k-1))^u).  Requires n >= k.
PgfRelationReport check_pgf_relations(const RunsSpec& spec,
                                      const std::vector<double>& t_grid);

// --- Waiting time until the first window completes ---------------------------
WaitingTime waiting_time(const RunsSpec& spec);

}  // namespace runs
