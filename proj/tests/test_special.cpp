#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eav/errors.hpp"
#include "eav/special.hpp"
#include "oracles.hpp"

using namespace eav::special;

TEST_CASE("gamma_p with shape 1 is the exponential law") {
    for (double x : {1e-8, 0.01, 0.5, 1.0, 2.0, 7.5, 30.0}) {
        CHECK(gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
        CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-13));
    }
}

TEST_CASE("gamma_p with shape 1/2 is erf(sqrt x)") {
    for (double x : {0.001, 0.3, 1.0, 4.0, 12.0}) {
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    }
}

TEST_CASE("integer shapes against the Poisson sum") {
    for (int n : {2, 5, 50, 500, 5000}) {
        const double a = n;
        for (double f : {0.9, 0.97, 1.0, 1.03, 1.1}) {
            const double x = a * f;
            CAPTURE(n);
            CAPTURE(x);
            CHECK(gamma_p(a, x) == doctest::Approx(oracle::poisson_gamma_p(n, x)).epsilon(1e-10));
            CHECK(gamma_q(a, x) == doctest::Approx(oracle::poisson_gamma_q(n, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("complementary functions sum to one") {
    for (double a : {0.3, 1.7, 12.0, 250.0, 1e5}) {
        for (double f : {0.2, 0.8, 1.0, 1.2, 3.0}) {
            CHECK(gamma_p(a, a * f) + gamma_q(a, a * f) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("large shapes stay accurate near the mode") {
    // Central limit: P(a, a + z sqrt a) -> Phi(z) with a skew correction.
    const double a = 1e8;
    const double z = 1.0;
    const double phi = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double correction = -(z * z - 1.0) / (3.0 * std::sqrt(a)) *
                              std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(gamma_p(a, a + z * std::sqrt(a)) == doctest::Approx(phi + correction).epsilon(1e-7));
}

TEST_CASE("edge arguments") {
    CHECK(gamma_p(3.0, 0.0) == 0.0);
    CHECK(gamma_q(3.0, 0.0) == 1.0);
    CHECK_THROWS_AS(gamma_p(0.0, 1.0), eav::InvalidArgument);
    CHECK_THROWS_AS(gamma_p(1.0, -1.0), eav::InvalidArgument);
}

TEST_CASE("log1pmx") {
    for (double x : {-0.9, -0.5, 0.2, 1.0, 10.0}) {
        CHECK(log1pmx(x) == doctest::Approx(std::log1p(x) - x).epsilon(1e-13));
    }
    const double x = 1e-5;
    CHECK(log1pmx(x) == doctest::Approx(-x * x / 2 + x * x * x / 3).epsilon(1e-12));
}

TEST_CASE("stirling_error") {
    for (double a : {0.5, 1.0, 3.0, 10.0, 100.0}) {
        const double direct = std::lgamma(a) - ((a - 0.5) * std::log(a) - a +
                                                0.5 * std::log(2.0 * std::numbers::pi));
        CHECK(stirling_error(a) == doctest::Approx(direct).epsilon(1e-10));
    }
    // Leading term 1/(12a) for large a.
    CHECK(stirling_error(1e6) == doctest::Approx(1.0 / 12e6).epsilon(1e-10));
}
