#pragma once

#include <random>
#include <vector>

#include "runs/model.hpp"
#include "runs/pseudobinomial.hpp"

namespace runs {

// Bounded test function on {0,…,m_max} with g(0) = 0; evaluates to 0 outside
// that range, matching the admissible class of the characterizing identities.
struct TestFunction {
    std::vector<double> values;  // values[m] = g(m)

    explicit TestFunction(std::vector<double> v);
    static TestFunction zero(long m_max);

    double at(long m) const noexcept {
        if (m < 0 || m >= static_cast<long>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(m)];
    }
    long m_max() const noexcept { return static_cast<long>(values.size()) - 1; }
};

struct SteinResidual {
    double value = 0.0;
};

// Independent uniform values in [-1,1] with g(0) forced to 0.
TestFunction random_test_function(long m_max, std::mt19937_64& rng);

// Pointwise operator of the approximating family:
//   (α−m)·p̌·g(m+1) − m·q̌·g(m),   0 ≤ m ≤ ⌊α⌋.
double apply_A0(const PseudoBinomial& pb, const TestFunction& g, long m);

// E[A0 g(Z)] under the normalized PMF; vanishes for every admissible g.
SteinResidual stein_identity_A0(const PseudoBinomial& pb, const TestFunction& g);

// E[A1 g(B)] for the runs-count operator, whose correction term averages
// g(prefix count + 1) over shortened trial prefixes.  Evaluated from the
// exact joint law of all prefix counts by enumerating every trial sequence,
// hence the n ≤ 16 limit.  Identical success probabilities only; needs n ≥ k.
SteinResidual stein_identity_A1(const RunsSpec& spec, const TestFunction& g);

}  // namespace runs
