// Acceptance gate for the runs-approximation artifact.
//
// Each check below prints exactly one [PASS]/[FAIL] line with its tolerance
// pinned in code; the process exit status is the number of failed lines, so
// any failure fails the whole gate under the test runner.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "runs/bounds.hpp"
#include "runs/exact.hpp"
#include "runs/matching.hpp"
#include "runs/model.hpp"
#include "runs/pmf.hpp"
#include "runs/pseudobinomial.hpp"
#include "runs/stein.hpp"
#include "runs/tables.hpp"
#include "runs/tvlab.hpp"

namespace {

using namespace runs;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
    int failures = 0;

    void line(const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " — " << detail;
        std::cout << '\n';
        if (!ok) ++failures;
    }
};

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

std::string fixed3(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << x;
    return os.str();
}

const std::vector<std::pair<int, int>>& gate_shapes() {
    static const std::vector<std::pair<int, int>> s = {
        {1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}};
    return s;
}

const TableCell* find_cell(const TableResult& table, TableRow row, int k1,
                           int k2, long n, double q) {
    for (const TableCell& c : table.cells) {
        if (c.row == row && c.k1 == k1 && c.k2 == k2 && c.n == n &&
            std::abs(c.q - q) < 1e-12) {
            return &c;
        }
    }
    return nullptr;
}

struct Anchor {
    TableRow row;
    int k1;
    int k2;
    long n;
    double q;
    double want;
};

// Checks computed cell values against independently pinned constants (the
// table's own embedded references are not reused here).
bool anchors_hold(const TableResult& table, const std::vector<Anchor>& anchors,
                  bool relative) {
    for (const Anchor& a : anchors) {
        const TableCell* c = find_cell(table, a.row, a.k1, a.k2, a.n, a.q);
        if (c == nullptr) return false;
        const double err = relative ? std::abs(c->value - a.want) / a.want
                                    : std::abs(c->value - a.want);
        const double tol = relative ? 5e-2 : 5e-7;
        if (!(err <= tol)) return false;
    }
    return true;
}

// All values within a factor-2 band around their geometric mean.
bool factor_two_band(const std::vector<double>& v) {
    double log_sum = 0.0;
    for (double x : v) {
        if (!(x > 0.0)) return false;
        log_sum += std::log(x);
    }
    const double gm = std::exp(log_sum / static_cast<double>(v.size()));
    return std::all_of(v.begin(), v.end(), [gm](double x) {
        return x >= gm / 2.0 && x <= 2.0 * gm;
    });
}

void check_tables(Gate& gate) {
    // Table 1: 90 cells, every cell within 5e-7 absolute of the embedded
    // 7-decimal reference, spot anchors pinned here, built in under 1 s.
    {
        const auto start = Clock::now();
        const TableResult t = make_table(1);
        const double secs = seconds_since(start);
        const std::vector<Anchor> anchors = {
            {TableRow::Poisson, 3, 2, 31, 0.25, 0.0153348},
            {TableRow::OneIid, 3, 2, 31, 0.25, 0.4721530},
            {TableRow::OneNonIid, 3, 2, 31, 0.25, 0.1261160},
            {TableRow::TwoIid, 3, 2, 31, 0.25, 0.0583356},
            {TableRow::TwoNonIid, 3, 2, 31, 0.25, 0.1495820},
        };
        const double dev = t.max_abs_deviation();
        const bool ok = t.cells.size() == 90 && dev <= 5e-7 &&
                        anchors_hold(t, anchors, false) && secs < 1.0;
        gate.line("table_1", ok,
                  std::to_string(t.cells.size()) + " cells, max abs dev " +
                      sci(dev) + ", 5 anchors, " + fixed3(secs) + " s");
    }

    // Table 2: 36 cells; 7-decimal cells within 5e-7 absolute, the single
    // scientific-notation cell within 5e-2 relative of its 2-s.f. print.
    {
        const TableResult t = make_table(2);
        const std::vector<Anchor> sci_anchors = {
            {TableRow::OneIid, 3, 2, 31, 0.01, 8.0e-6}};
        const double dev = t.max_abs_deviation();
        const double rel = t.max_rel_deviation_sci();
        const bool ok = t.cells.size() == 36 && dev <= 5e-7 && rel <= 5e-2 &&
                        anchors_hold(t, sci_anchors, true);
        gate.line("table_2", ok,
                  std::to_string(t.cells.size()) + " cells, max abs dev " +
                      sci(dev) + ", max sci rel dev " + sci(rel));
    }

    // Table 3: same tolerance policy; the rendered table carries 75 cells
    // (3 parameter blocks x 5 approximation rows x 5 q values).
    {
        const TableResult t = make_table(3);
        const std::vector<Anchor> anchors = {
            {TableRow::Poisson, 5, 2, 730, 0.55, 0.1318160}};
        const double dev = t.max_abs_deviation();
        const double rel = t.max_rel_deviation_sci();
        const bool ok = t.cells.size() == 75 && dev <= 5e-7 && rel <= 5e-2 &&
                        anchors_hold(t, anchors, false);
        gate.line("table_3", ok,
                  std::to_string(t.cells.size()) + " cells, max abs dev " +
                      sci(dev) + ", max sci rel dev " + sci(rel));
    }
}

// The four exact-PMF routes agree pointwise to 1e-10 over every shape,
// n <= 18, p in {0.2, 0.5, 0.8}; the sweep finishes in under 30 s.
void check_oracle_equivalence(Gate& gate) {
    const auto start = Clock::now();
    double worst = 0.0;
    long specs = 0;
    for (auto [k1, k2] : gate_shapes()) {
        for (long n = 1; n <= 18; ++n) {
            for (double p : {0.2, 0.5, 0.8}) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, p);
                const Pmf routes[4] = {pmf_recursive(spec),
                                       pmf_closed_form(spec), pmf_dp(spec),
                                       pmf_bruteforce(spec)};
                long hi = 0;
                for (const Pmf& r : routes) hi = std::max(hi, r.max_support());
                for (long m = 0; m <= hi; ++m) {
                    for (int i = 0; i < 4; ++i) {
                        for (int j = i + 1; j < 4; ++j) {
                            worst = std::max(worst,
                                             std::abs(routes[i].prob(m) -
                                                      routes[j].prob(m)));
                        }
                    }
                }
                ++specs;
            }
        }
    }
    const double secs = seconds_since(start);
    const bool ok = worst <= 1e-10 && secs < 30.0;
    gate.line("pmf_route_equivalence", ok,
              std::to_string(specs) + " specs, max route diff " + sci(worst) +
                  ", " + fixed3(secs) + " s");
}

// Characterizing-operator residuals vanish: |E[A0 g(Z)]| <= 1e-12 for 100
// random g over a randomized (alpha, p-check) grid, and |E[A1 g(B)]| <= 1e-10
// for 20 random g at each enumeration-sized shape.
void check_stein_identities(Gate& gate) {
    std::mt19937_64 rng(20260819ull);
    std::uniform_real_distribution<double> alpha_dist(2.0, 40.0);
    std::uniform_real_distribution<double> p_dist(0.05, 0.95);

    double worst_a0 = 0.0;
    for (int point = 0; point < 25; ++point) {
        const PseudoBinomial pb{alpha_dist(rng), p_dist(rng)};
        // Admissible g vanish beyond floor(alpha); a nonzero g(floor(alpha)+1)
        // picks up the fractional boundary term (alpha - floor(alpha)) and the
        // identity no longer characterizes the law.
        const long m_max = static_cast<long>(std::floor(pb.alpha));
        for (int i = 0; i < 4; ++i) {
            const TestFunction g = random_test_function(m_max, rng);
            worst_a0 =
                std::max(worst_a0, std::abs(stein_identity_A0(pb, g).value));
        }
    }

    struct A1Case {
        int k1;
        int k2;
        long n;
    };
    const A1Case cases[] = {{1, 1, 8}, {2, 1, 12}, {3, 2, 15}};
    double worst_a1 = 0.0;
    for (const A1Case& c : cases) {
        const double p = c.k1 == 3 ? 0.75 : 0.4;
        const RunsSpec spec = RunsSpec::iid(c.k1, c.k2, c.n, p);
        for (int i = 0; i < 20; ++i) {
            const TestFunction g =
                random_test_function(spec.max_count() + 1, rng);
            worst_a1 =
                std::max(worst_a1, std::abs(stein_identity_A1(spec, g).value));
        }
    }

    const bool ok = worst_a0 <= 1e-12 && worst_a1 <= 1e-10;
    gate.line("stein_identities", ok,
              "100 g, max |E[A0 g]| " + sci(worst_a0) +
                  "; 60 g, max |E[A1 g]| " + sci(worst_a1));
}

// Every bound whose hypothesis flags are satisfied dominates the exactly
// computed total-variation distance to its own target: slack >= -1e-10,
// zero violations over the oracle grid crossed with both alpha presets.
void check_dominance(Gate& gate) {
    long rows = 0;
    long violations = 0;
    double worst_slack = 1.0;
    for (auto [k1, k2] : gate_shapes()) {
        for (long n = k1 + k2; n <= 18; ++n) {
            for (double p : {0.2, 0.5, 0.8}) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, p);
                for (AlphaPreset preset :
                     {AlphaPreset::NOverK, AlphaPreset::NOver3K}) {
                    MatchResult one;
                    try {
                        one = match_one_fix_alpha(spec,
                                                  preset_alpha(spec, preset));
                    } catch (const std::exception&) {
                        continue;
                    }
                    const TvReport rep = compare_all(spec, one);
                    for (const TvRow& row : rep.rows) {
                        if (!row.flags_met) continue;
                        ++rows;
                        worst_slack = std::min(worst_slack, row.slack);
                        if (row.slack < -1e-10) ++violations;
                    }
                }
            }
        }
    }
    const bool ok = violations == 0 && rows > 0;
    gate.line("bound_dominance", ok,
              std::to_string(rows) + " flag-satisfied rows, " +
                  std::to_string(violations) + " violations, smallest slack " +
                  sci(worst_slack));
}

// The four PGF recurrences hold to 1e-9 over a randomized (spec, t) grid;
// |t| <= 1 keeps every relation inside its convergence region.
void check_pgf(Gate& gate) {
    std::mt19937_64 rng(987654321ull);
    std::uniform_real_distribution<double> p_dist(0.15, 0.85);
    std::uniform_real_distribution<double> t_dist(-1.0, 1.0);

    double worst = 0.0;
    long specs = 0;
    for (auto [k1, k2] : gate_shapes()) {
        for (long n : {6L, 9L, 12L, 15L, 18L}) {
            if (n < k1 + k2) continue;
            for (int rep = 0; rep < 3; ++rep) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, p_dist(rng));
                std::vector<double> t_grid = {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
                for (int i = 0; i < 4; ++i) t_grid.push_back(t_dist(rng));
                worst = std::max(worst,
                                 check_pgf_relations(spec, t_grid).max_residual());
                ++specs;
            }
        }
    }
    const bool ok = worst <= 1e-9;
    gate.line("pgf_recurrences", ok,
              std::to_string(specs) + " randomized specs, max residual " +
                  sci(worst));
}

// Asymptotic order at (1,1), p = 0.5, n in {50,...,800}, alpha = n/k: the
// one-parameter bound is constant order and the two-parameter bound decays
// like n^{-1/2} — both scaled sequences stay within a factor-2 band around
// their geometric mean.  At this point p~ = 4pq = 1 sits exactly on the
// singularity of the 1/(1-2p~) factor, so the raw expressions are negative
// with their hypothesis flags down; the order claims concern the magnitudes.
void check_order(Gate& gate) {
    std::vector<double> constant_seq;
    std::vector<double> root_n_seq;
    for (long n : {50L, 100L, 200L, 400L, 800L}) {
        const RunsSpec spec = RunsSpec::iid(1, 1, n, 0.5);
        const MatchResult one = match_one_fix_alpha(
            spec, preset_alpha(spec, AlphaPreset::NOverK));
        constant_seq.push_back(std::abs(bound_thm21(spec, one).value));
        root_n_seq.push_back(std::abs(bound_thm22(spec).value) *
                             std::sqrt(static_cast<double>(n)));
    }
    const bool ok = factor_two_band(constant_seq) && factor_two_band(root_n_seq);
    const auto minmax_c =
        std::minmax_element(constant_seq.begin(), constant_seq.end());
    const auto minmax_r =
        std::minmax_element(root_n_seq.begin(), root_n_seq.end());
    gate.line("order_checks", ok,
              "one-parameter spread x" +
                  fixed3(*minmax_c.second / *minmax_c.first) +
                  ", sqrt(n)-scaled two-parameter spread x" +
                  fixed3(*minmax_r.second / *minmax_r.first));
}

// A 1e6-rep simulation at (3,2,31,p=0.75) lands within four standard errors
// of the exact mean 0.2373046875 and is bit-identical across thread counts.
void check_simulation(Gate& gate) {
    const RunsSpec spec = RunsSpec::iid(3, 2, 31, 0.75);
    const long reps = 1000000;
    const std::uint64_t seed = 42;

    const Pmf base = simulate_counts(spec, false, reps, seed, 1);
    bool identical = true;
    for (int threads : {2, 5, 8}) {
        const Pmf other = simulate_counts(spec, false, reps, seed, threads);
        identical = identical && other.offset == base.offset &&
                    other.masses == base.masses;
    }

    const double mean = base.mean();
    const double exact_mean = 0.2373046875;
    const double se =
        std::sqrt(pmf_dp(spec).variance() / static_cast<double>(reps));
    const double dev_in_se = std::abs(mean - exact_mean) / se;
    const bool ok = identical && dev_in_se <= 4.0;
    gate.line("simulation_sanity", ok,
              "mean " + std::to_string(mean) + " at " + fixed3(dev_in_se) +
                  " SE, thread counts {1,2,5,8} bit-identical: " +
                  (identical ? "yes" : "no"));
}

}  // namespace

int main() {
    Gate gate;
    check_tables(gate);
    check_oracle_equivalence(gate);
    check_stein_identities(gate);
    check_dominance(gate);
    check_pgf(gate);
    check_order(gate);
    check_simulation(gate);
    return gate.failures;
}
