#pragma once

#include "runs/model.hpp"
#include "runs/pmf.hpp"

namespace runs {

// Binomial-like family with a real size parameter alpha, supported on
// {0,…,⌊α⌋}: unnormalized weights genbinom(α,m)·p̌^m·q̌^{α−m}, divided by
// their sum C.  Integer α recovers the ordinary binomial with C = 1.
struct PseudoBinomial {
    double alpha;
    double p_check;

    PseudoBinomial(double alpha_, double p_check_);

    long floor_alpha() const;
    double q_check() const { return 1.0 - p_check; }

    // C = Σ_{m=0}^{⌊α⌋} genbinom(α,m) p̌^m q̌^{α−m}; equals 1 for integer α.
    double normalizer() const;
};

// α(α−1)⋯(α−m+1)/m!.  Every factor is positive while m ≤ ⌊α⌋, which is the
// accepted domain here.
double genbinom(double alpha, long m);

// Normalized PMF on {0,…,⌊α⌋}.  Weights are assembled in log space so that
// very large α (up to ~1e6) neither overflows nor underflows.
Pmf pb_pmf(const PseudoBinomial& pb);

// Mean and variance of the normalized PMF by direct summation.  For integer
// α these are exactly the binomial moments; otherwise truncation at ⌊α⌋
// shifts them slightly away from αp̌ and αp̌q̌.
MomentPair pb_moments(const PseudoBinomial& pb);

// 2/(⌊α⌋·p̌·q̌): uniform bound on the increments of the Stein-equation
// solution when the test function is bounded by 1.  Needs ⌊α⌋ ≥ 1.
double delta_g_bound(const PseudoBinomial& pb);

}  // namespace runs
