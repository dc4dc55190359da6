#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "runs/exact.hpp"
#include "runs/model.hpp"

using namespace runs;

TEST_SUITE("model") {

TEST_CASE("window_prob identical values") {
    // all factors dyadic, so the products are exact in double
    CHECK(window_prob(RunsSpec::iid(3, 2, 31, 0.75), 1) == 0.0087890625);
    CHECK(window_prob(RunsSpec::iid(1, 1, 10, 0.5), 1) == 0.25);
}

TEST_CASE("window_prob per-trial") {
    const auto spec = RunsSpec::with_probs(1, 1, {0.1, 0.2, 0.3});
    CHECK(window_prob(spec, 1) == doctest::Approx(0.9 * 0.2).epsilon(1e-15));
    CHECK(window_prob(spec, 2) == doctest::Approx(0.8 * 0.3).epsilon(1e-15));
    CHECK_THROWS_AS(window_prob(spec, 3), std::out_of_range);   // only 2 linear windows
    CHECK_NOTHROW(window_prob(spec, 3, /*circular=*/true));     // but 3 cyclic ones
    CHECK_THROWS_AS(window_prob(spec, 0), std::out_of_range);
}

TEST_CASE("window_prob circular wraps indices") {
    const auto spec = RunsSpec::with_probs(1, 1, {0.1, 0.2, 0.3});
    // window at l=3: failure at trial 3, success at trial 1
    CHECK(window_prob(spec, 3, true) == doctest::Approx(0.7 * 0.1).epsilon(1e-15));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(RunsSpec::iid(0, 1, 5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(RunsSpec::iid(1, 0, 5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(RunsSpec::iid(1, 1, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(RunsSpec::iid(1, 1, 5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(RunsSpec::iid(1, 1, 5, -0.1), std::invalid_argument);
    CHECK(RunsSpec::iid(1, 1, 5, 0.0).degenerate);
    CHECK(RunsSpec::iid(1, 1, 5, 1.0).degenerate);
    CHECK_FALSE(RunsSpec::iid(1, 1, 5, 0.5).degenerate);
}

TEST_CASE("linear_moments identical anchor") {
    const auto mom = linear_moments(RunsSpec::iid(3, 2, 31, 0.75));
    CHECK(mom.mean == 0.2373046875);  // 27 * 9/1024, exact
    CHECK(mom.mean > mom.variance);
}

TEST_CASE("linear_moments no windows when n < k") {
    const auto mom = linear_moments(RunsSpec::iid(3, 2, 4, 0.5));
    CHECK(mom.mean == 0.0);
    CHECK(mom.variance == 0.0);
}

TEST_CASE("linear_moments piecewise branches agree with pair counting") {
    // mid branch k < n <= 2k-1 and large branch n >= 2k, vs. the per-trial
    // path with an equal-probability vector (independent pair loop)
    for (long n : {5L, 6L, 7L, 8L, 9L, 12L, 17L}) {
        const auto ident = linear_moments(RunsSpec::iid(2, 2, n, 0.3));
        const auto vec =
            linear_moments(RunsSpec::with_probs(2, 2, std::vector<double>(n, 0.3)));
        CHECK(ident.mean == doctest::Approx(vec.mean).epsilon(1e-14));
        CHECK(ident.variance == doctest::Approx(vec.variance).epsilon(1e-13));
    }
}

TEST_CASE("linear_moments match brute-force PMF moments") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int rep = 0; rep < 8; ++rep) {
        const int k1 = 1 + static_cast<int>(rng() % 3);
        const int k2 = 1 + static_cast<int>(rng() % 2);
        const long n = 6 + static_cast<long>(rng() % 9);
        std::vector<double> probs(static_cast<std::size_t>(n));
        for (auto& p : probs) p = unif(rng);
        const auto spec = RunsSpec::with_probs(k1, k2, probs);
        const auto mom = linear_moments(spec);
        const auto pmf = pmf_bruteforce(spec);
        CHECK(mom.mean == doctest::Approx(pmf.mean()).epsilon(1e-10));
        CHECK(mom.variance == doctest::Approx(pmf.variance()).epsilon(1e-9));
    }
}

TEST_CASE("circular_moments identical mean is n*a") {
    const auto spec = RunsSpec::iid(3, 2, 31, 0.75);
    const auto mom = circular_moments(spec);
    CHECK(mom.mean == doctest::Approx(31 * 0.0087890625).epsilon(1e-15));
}

TEST_CASE("circular variance, linear-pair convention anchor") {
    const auto mom = circular_moments(RunsSpec::iid(3, 2, 31, 0.75),
                                      PairConvention::LinearPairs);
    CHECK(mom.variance == doctest::Approx(0.252454).epsilon(2e-6));
    // 2*114 overlapping pairs + 31 squares: variance = 31a - 259 a^2
    const double a = 0.0087890625;
    CHECK(mom.variance == doctest::Approx(31 * a - 259 * a * a).epsilon(1e-15));
}

TEST_CASE("circular variance, cyclic-pair convention") {
    const double a = 0.0087890625;
    const auto mom = circular_moments(RunsSpec::iid(3, 2, 31, 0.75),
                                      PairConvention::CyclicPairs);
    // full cyclic overlap: n(k-1) pairs, variance = n a (1 - (2k-1) a)
    CHECK(mom.variance == doctest::Approx(31 * a * (1 - 9 * a)).epsilon(1e-14));
}

TEST_CASE("cyclic-pair convention reproduces brute-force circular moments") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.1, 0.9);
    // includes n < 2k-2 so the wrap bookkeeping is exercised
    const std::vector<std::array<long, 3>> cases = {
        {{1, 1, 5}}, {{2, 1, 7}}, {{3, 2, 7}}, {{3, 2, 12}}, {{2, 2, 11}}};
    for (const auto& c : cases) {
        std::vector<double> probs(static_cast<std::size_t>(c[2]));
        for (auto& p : probs) p = unif(rng);
        const auto spec =
            RunsSpec::with_probs(static_cast<int>(c[0]), static_cast<int>(c[1]), probs);
        const auto mom = circular_moments(spec, PairConvention::CyclicPairs);
        const auto pmf = pmf_bruteforce(spec, /*circular=*/true);
        CHECK(mom.mean == doctest::Approx(pmf.mean()).epsilon(1e-10));
        CHECK(mom.variance == doctest::Approx(pmf.variance()).epsilon(1e-9));
    }
}

TEST_CASE("circular count vanishes when k > n") {
    const auto mom = circular_moments(RunsSpec::iid(3, 2, 4, 0.5));
    CHECK(mom.mean == 0.0);
    CHECK(mom.variance == 0.0);
}

TEST_CASE("underdispersion holds across a randomized grid") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int rep = 0; rep < 40; ++rep) {
        const int k1 = 1 + static_cast<int>(rng() % 3);
        const int k2 = 1 + static_cast<int>(rng() % 3);
        const long n = k1 + k2 + static_cast<long>(rng() % 40);
        const auto mom = linear_moments(RunsSpec::iid(k1, k2, n, unif(rng)));
        CHECK(mom.mean > mom.variance);
    }
}

}  // TEST_SUITE
