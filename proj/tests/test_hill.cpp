#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eav/distributions.hpp"
#include "eav/errors.hpp"
#include "eav/hill.hpp"
#include "oracles.hpp"

using namespace eav;
using std::numbers::e;

TEST_CASE("ordering and prefix sums") {
    const std::vector<double> raw{1.0, e, e * e};
    const OrderedSample s = order_sample(raw);
    CHECK(s.values() == std::vector<double>{e * e, e, 1.0});
    CHECK(s.log_prefix(0) == 0.0);
    CHECK(s.log_prefix(1) == doctest::Approx(2.0));
    CHECK(s.log_prefix(2) == doctest::Approx(3.0));
    CHECK(s.log_prefix(3) == doctest::Approx(3.0));
    CHECK(s.order_stat(1) == e * e);
}

TEST_CASE("too few positive values") {
    CHECK_THROWS_AS(order_sample(std::vector<double>{5.0}), NoAdmissibleCandidate);
    CHECK_THROWS_AS(order_sample(std::vector<double>{-1.0, 0.0, 2.0}), NoAdmissibleCandidate);
}

TEST_CASE("non-positive and non-finite values are dropped and counted") {
    const OrderedSample s = order_sample(std::vector<double>{-1.0, e, 1.0});
    CHECK(s.values() == std::vector<double>{e, 1.0});
    CHECK(s.dropped() == 1);
    CHECK(s.raw_size() == 3);
    const OrderedSample t = order_sample(std::vector<double>{NAN, 2.0, 0.0, 3.0, INFINITY});
    CHECK(t.size() == 2);
    CHECK(t.dropped() == 3);
}

TEST_CASE("hill estimate examples") {
    CHECK(hill_estimate(order_sample(std::vector<double>{e, 1.0}), 1) == doctest::Approx(1.0));
    const std::vector<double> four{e * e * e, e * e, e, 1.0};
    CHECK(hill_estimate(order_sample(four), 2) == doctest::Approx(1.5));
    std::vector<double> scaled;
    for (double x : four) scaled.push_back(7.0 * x);
    CHECK(hill_estimate(order_sample(scaled), 2) == doctest::Approx(1.5));
    CHECK_THROWS_AS(hill_estimate(order_sample(four), 0), InvalidArgument);
    CHECK_THROWS_AS(hill_estimate(order_sample(four), 4), InvalidArgument);
}

TEST_CASE("hill sweep examples") {
    const std::vector<double> four{e * e * e, e * e, e, 1.0};
    const OrderedSample s = order_sample(four);
    const HillSweep sweep = hill_sweep(s, explicit_grid({1, 2, 3}));
    REQUIRE(sweep.size() == 3);
    CHECK(sweep.entries[0].first == 1);
    CHECK(sweep.entries[0].second == doctest::Approx(1.0));
    CHECK(sweep.entries[1].second == doctest::Approx(1.5));
    CHECK(sweep.entries[2].second == doctest::Approx(2.0));

    const HillSweep single = hill_sweep(s, explicit_grid({1}));
    CHECK(single.entries.at(0).second == hill_estimate(s, 1));

    const HillSweep clipped = hill_sweep(s, explicit_grid({1, 2, 3, 4, 5}));
    CHECK(clipped.size() == 3);
    CHECK(clipped.dropped_points == std::vector<std::size_t>{4, 5});

    CHECK_THROWS_AS(hill_sweep(s, explicit_grid({4, 5})), NoAdmissibleCandidate);
}

TEST_CASE("sweep equals direct summation on random inputs") {
    std::mt19937_64 gen(42);
    std::lognormal_distribution<double> law(0.0, 2.0);
    std::uniform_int_distribution<std::size_t> size(2, 1000);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(size(gen));
        for (double& x : raw) x = law(gen);
        const OrderedSample s = order_sample(raw);
        std::vector<double> desc = raw;
        std::sort(desc.begin(), desc.end(), std::greater<>());
        std::vector<std::size_t> all;
        for (std::size_t k = 1; k < raw.size(); ++k) all.push_back(k);
        const HillSweep sweep = hill_sweep(s, explicit_grid(all));
        for (const auto& [k, g] : sweep.entries) {
            const double ref = oracle::hill_direct(desc, k);
            CHECK(std::abs(g - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("scale invariance of the sweep") {
    Rng rng(3);
    const auto raw = dist::sample(dist::Frechet{0.7, 0.0}, 2000, rng);
    std::vector<double> scaled;
    for (double x : raw) scaled.push_back(x * 123.25);
    const Grid grid = geometric_grid(2000, 1.1);
    const HillSweep a = hill_sweep(order_sample(raw), grid);
    const HillSweep b = hill_sweep(order_sample(scaled), grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.entries[i].second == doctest::Approx(b.entries[i].second).epsilon(1e-10));
    }
}

TEST_CASE("exact Pareto: mean of the Hill estimate at k = 1000") {
    // k gamma_hat(k) / gamma ~ Gamma(k, 1), so the mean over R replications
    // has standard deviation gamma / sqrt(k R).
    const double alpha = 2.0;
    const std::size_t k = 1000;
    const int reps = 100;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(derive_seed(99, r, 1));
        sum += hill_estimate(order_sample(dist::sample(dist::Pareto{alpha}, 100000, rng)), k);
    }
    const double gamma = 1.0 / alpha;
    CHECK(std::abs(sum / reps - gamma) <= 3.0 * gamma / std::sqrt(static_cast<double>(k) * reps));
}

TEST_CASE("ties are harmless") {
    const OrderedSample s = order_sample(std::vector<double>{2.0, 2.0, 2.0, 1.0});
    CHECK(hill_estimate(s, 1) == 0.0);
    CHECK(hill_estimate(s, 3) == doctest::Approx(std::log(2.0)));
}
