#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "runs/stein.hpp"

using namespace runs;

TEST_SUITE("stein") {

TEST_CASE("test function validation and evaluation") {
    CHECK_THROWS_AS(TestFunction({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TestFunction(std::vector<double>{}), std::invalid_argument);
    const TestFunction g({0.0, 2.0});
    CHECK(g.at(0) == 0.0);
    CHECK(g.at(1) == 2.0);
    CHECK(g.at(2) == 0.0);
    CHECK(g.at(-1) == 0.0);
    CHECK(g.m_max() == 1);
}

TEST_CASE("apply_A0 pointwise") {
    const PseudoBinomial pb{4.0, 0.5};
    const TestFunction g({0.0, 0.4, -0.3, 0.9, 0.1});
    CHECK(apply_A0(pb, g, 0) == doctest::Approx(4 * 0.5 * 0.4).epsilon(1e-15));
    CHECK(apply_A0(pb, g, 2) ==
          doctest::Approx(2 * 0.5 * 0.9 - 2 * 0.5 * (-0.3)).epsilon(1e-15));
    CHECK(apply_A0(pb, g, 4) == doctest::Approx(-4 * 0.5 * 0.1).epsilon(1e-15));
    CHECK_THROWS_AS(apply_A0(pb, g, 5), std::out_of_range);
    CHECK_THROWS_AS(apply_A0(pb, g, -1), std::out_of_range);
    CHECK(apply_A0(pb, TestFunction::zero(4), 3) == 0.0);
}

TEST_CASE("apply_A0 is linear in g") {
    std::mt19937_64 rng(5);
    const PseudoBinomial pb{6.2, 0.31};
    for (int rep = 0; rep < 10; ++rep) {
        const auto g1 = random_test_function(6, rng);
        const auto g2 = random_test_function(6, rng);
        const double c = 2.25;
        std::vector<double> comb(7);
        for (int i = 0; i < 7; ++i) comb[static_cast<std::size_t>(i)] =
            g1.values[static_cast<std::size_t>(i)] + c * g2.values[static_cast<std::size_t>(i)];
        const TestFunction g3(comb);
        for (long m = 0; m <= 6; ++m)
            CHECK(apply_A0(pb, g3, m) ==
                  doctest::Approx(apply_A0(pb, g1, m) + c * apply_A0(pb, g2, m))
                      .epsilon(1e-12));
    }
}

TEST_CASE("A0 identity: 100 random g") {
    std::mt19937_64 rng(1234);
    const PseudoBinomial pb{6.2, 0.038};
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = random_test_function(6, rng);
        CHECK(std::abs(stein_identity_A0(pb, g).value) <= 1e-12);
    }
}

TEST_CASE("A0 identity across randomized parameters, integer alpha included") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ua(1.2, 40.0), up(0.05, 0.95);
    for (int rep = 0; rep < 30; ++rep) {
        double alpha = ua(rng);
        if (rep % 3 == 0) alpha = std::floor(alpha);
        const PseudoBinomial pb{alpha, up(rng)};
        const auto g = random_test_function(pb.floor_alpha(), rng);
        CHECK(std::abs(stein_identity_A0(pb, g).value) <= 1e-12);
    }
}

TEST_CASE("A1 identity via full enumeration") {
    std::mt19937_64 rng(2718);
    const auto s118 = RunsSpec::iid(1, 1, 8, 0.5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = random_test_function(4, rng);
        CHECK(std::abs(stein_identity_A1(s118, g).value) <= 1e-10);
    }
    const auto g1 = random_test_function(4, rng);
    CHECK(std::abs(stein_identity_A1(RunsSpec::iid(2, 1, 12, 0.3), g1).value) <= 1e-10);
    const auto g2 = random_test_function(3, rng);
    CHECK(std::abs(stein_identity_A1(RunsSpec::iid(3, 2, 15, 0.6), g2).value) <= 1e-10);
    CHECK(stein_identity_A1(s118, TestFunction::zero(4)).value == 0.0);
}

TEST_CASE("A1 guards") {
    CHECK_THROWS_AS(stein_identity_A1(RunsSpec::iid(1, 1, 17, 0.5), TestFunction::zero(8)),
                    std::invalid_argument);
    CHECK_THROWS_AS(stein_identity_A1(RunsSpec::iid(3, 2, 4, 0.5), TestFunction::zero(1)),
                    std::domain_error);
    CHECK_THROWS_AS(
        stein_identity_A1(RunsSpec::with_probs(1, 1, {0.3, 0.5}), TestFunction::zero(1)),
        std::invalid_argument);
}

}  // TEST_SUITE
