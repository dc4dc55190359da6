#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "runs/pseudobinomial.hpp"
#include "runs/rational.hpp"

using namespace runs;

namespace {

double exact_binomial(long n, long m, double p) {
    const Rational rp = to_rational(p);
    const Rational term = Rational(big_binomial(n, m)) * rational_pow(rp, m) *
                          rational_pow(Rational(1) - rp, n - m);
    return to_double(term);
}

}  // namespace

TEST_SUITE("pseudobinomial") {

TEST_CASE("genbinom: products, integer reduction, guards") {
    CHECK(genbinom(6.2, 0) == 1.0);
    CHECK(genbinom(6.2, 2) == doctest::Approx(16.12).epsilon(1e-14));
    CHECK(genbinom(4.0, 2) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(genbinom(4.0, 4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(genbinom(6.2, 7), std::domain_error);
    CHECK_THROWS_AS(genbinom(2.5, -1), std::domain_error);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PseudoBinomial(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PseudoBinomial(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PseudoBinomial(3.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PseudoBinomial(3.0, 1.0), std::invalid_argument);
}

TEST_CASE("integer alpha reduces to the ordinary binomial") {
    const PseudoBinomial pb{9.0, 0.37};
    const auto pmf = pb_pmf(pb);
    REQUIRE(pmf.masses.size() == 10);
    for (long m = 0; m <= 9; ++m)
        CHECK(std::abs(pmf.prob(m) - exact_binomial(9, m, 0.37)) <= 1e-14);
    CHECK(std::abs(pb.normalizer() - 1.0) <= 1e-12);
}

TEST_CASE("support, normalization, point mass") {
    const PseudoBinomial pb{6.2, 0.038275};
    const auto pmf = pb_pmf(pb);
    REQUIRE(pmf.masses.size() == 7);
    CHECK(pmf.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pmf.masses.back() > 0.0);
    CHECK(pb.normalizer() > 0.0);

    const auto point = pb_pmf(PseudoBinomial{0.5, 0.3});
    REQUIRE(point.masses.size() == 1);
    CHECK(point.masses[0] == 1.0);
}

TEST_CASE("randomized grid stays a probability vector") {
    std::mt19937_64 rng(31337);
    // Domain kept where the top-end mass is representable in double; wider
    // grids push p̌^⌊α⌋ below 1e-308 and the strict positivity check cannot
    // be expressed in floating point.
    std::uniform_real_distribution<double> ua(1.0, 60.0), up(0.05, 0.95);
    for (int rep = 0; rep < 50; ++rep) {
        const PseudoBinomial pb{ua(rng), up(rng)};
        const auto pmf = pb_pmf(pb);
        double s = 0.0;
        for (double w : pmf.masses) {
            CHECK(w >= 0.0);
            s += w;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pmf.masses.back() > 0.0);
    }
}

TEST_CASE("large alpha stays finite and normalized") {
    const PseudoBinomial pb{1.0e6 + 0.5, 1e-3};
    const auto pmf = pb_pmf(pb);
    CHECK(pmf.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pmf.mean() == doctest::Approx(1000.0005).epsilon(1e-6));
}

TEST_CASE("pb_moments") {
    const auto m = pb_moments(PseudoBinomial{7.0, 0.25});
    CHECK(m.mean == doctest::Approx(1.75).epsilon(1e-13));
    CHECK(m.variance == doctest::Approx(7 * 0.25 * 0.75).epsilon(1e-12));

    const PseudoBinomial nb{3.26906, 0.0725911};
    const auto mm = pb_moments(nb);
    const double target = nb.alpha * nb.p_check;
    CHECK(std::abs(mm.mean - target) / target < 0.02);

    const auto pt = pb_moments(PseudoBinomial{0.5, 0.3});
    CHECK(pt.mean == 0.0);
    CHECK(pt.variance == 0.0);
}

TEST_CASE("delta_g_bound") {
    CHECK(delta_g_bound(PseudoBinomial{6.2, 0.038275}) ==
          doctest::Approx(9.0555047).epsilon(1e-6));
    CHECK(delta_g_bound(PseudoBinomial{2.0, 0.5}) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(delta_g_bound(PseudoBinomial{0.9, 0.3}), std::domain_error);
}

}  // TEST_SUITE
