#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "runs/matching.hpp"
#include "runs/model.hpp"
#include "runs/pmf.hpp"

namespace runs {

// One bound evaluated next to the exact total variation it bounds.
// slack = value - exact target; a negative slack beyond rounding noise on a
// row whose hypothesis flags all hold would disprove the bound.
struct TvRow {
    std::string name;
    double value = 0.0;
    double slack = 0.0;
    bool flags_met = true;
    std::vector<std::pair<std::string, bool>> preconditions;
    std::vector<std::string> notes;
};

// Exact-versus-bound comparison for one spec.  exact_tv is the headline
// distance between the linear count law and the one-parameter pseudo-binomial
// fit; each row carries its own target distance via `slack` and a note.
struct TvReport {
    std::string spec;
    double exact_tv = 0.0;
    std::vector<TvRow> rows;

    std::string to_json() const;
};

// (1/2) sum_m |a(m) - b(m)| over the union support.  Inputs must be
// normalized probability mass functions.
double tv_distance(const Pmf& a, const Pmf& b);

// Total variation between a law and its +1 shift.
double tv_shift(const Pmf& a);

// Empirical law of the runs count from `reps` simulated trial sequences.
// Deterministic in (seed, reps): trials are drawn from a splitmix64-style
// counter generator keyed by (seed, rep), and the integer histogram makes the
// result bit-identical for every thread count.  threads = 0 takes the default
// (hardware, capped by RUNS_APPROX_THREADS).
Pmf simulate_counts(const RunsSpec& spec, bool circular, long reps,
                    std::uint64_t seed, int threads = 0);

// Evaluate every applicable bound against its exact target distance:
// the supplied one-parameter matching drives the one-moment rows, the
// two-moment fits are computed internally, circular rows compare against the
// exact cyclic law, and the Poisson rows against a Poisson of matched mean.
// Needs n small enough for the exact dynamic program (k1+k2 <= 22).
TvReport compare_all(const RunsSpec& spec, const MatchResult& one_param);

}  // namespace runs
