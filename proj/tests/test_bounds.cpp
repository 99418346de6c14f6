#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "eav/bounds.hpp"
#include "eav/deviation.hpp"
#include "eav/errors.hpp"
#include "eav/grid.hpp"
#include "oracles.hpp"

using namespace eav;
using namespace eav::bounds;

namespace {

SecondOrderParams params(double gamma, double rho, double C, double c1 = 1.0, double beta = 1.1) {
    SecondOrderParams p;
    p.gamma = gamma;
    p.rho = rho;
    p.C = C;
    p.c1 = c1;
    p.beta = beta;
    return p;
}

oracle::BoundParams mirror(const SecondOrderParams& p) { return {p.gamma, p.rho, p.C, p.c1, p.beta}; }

// Linear scan: last grid point with envelope <= gamma V; 0 when the grid is not wide.
std::size_t scan_kstar(const Grid& grid, std::size_t n, double delta, const SecondOrderParams& p) {
    const auto below = [&](std::size_t k) {
        return oracle::bias_envelope(k, n, delta, mirror(p)) <= p.gamma * exact_quantile(k, delta);
    };
    const auto& pts = grid.points();
    if (!below(pts.front()) || below(pts.back())) return 0;
    std::size_t last = 0;
    for (std::size_t k : pts) {
        if (!below(k)) break;
        last = k;
    }
    return last;
}

}  // namespace

TEST_CASE("C1 constant") {
    const SecondOrderParams p = params(1.0, -1.0, 1.0);
    // (1 + sqrt(2 log 10) + log 10)(1 + sqrt(3 log 5) + 3 log 5)
    CHECK(c1_constant(0.4, p) == doctest::Approx(5.448556 * 8.025656).epsilon(1e-6));
    CHECK(c1_constant(0.4, p) == doctest::Approx(oracle::c1_constant(0.4, mirror(p))).epsilon(1e-14));
    for (double delta : {0.9, 0.1, 1e-3}) {
        for (double rho : {-0.3, -1.0, -2.5}) {
            const SecondOrderParams q = params(0.7, rho, 2.0);
            CHECK(c1_constant(delta, q) <= c1_constant_upper(delta, q));
        }
    }
}

TEST_CASE("bias envelope") {
    const SecondOrderParams p = params(1.0, -0.5, 1.0);
    const std::size_t n = 1000;
    CHECK(bias_envelope(n - 1, 2 * n, 0.5, p) ==
          doctest::Approx(bias_envelope(n - 1, n, 0.5, p) * std::pow(2.0, -0.5)).epsilon(1e-13));
    double previous = 0.0;
    for (std::size_t k = 1; k < n; k += 13) {
        const double b = bias_envelope(k, n, 0.5, p);
        CHECK(b >= previous);
        CHECK(b == doctest::Approx(oracle::bias_envelope(k, n, 0.5, mirror(p))).epsilon(1e-13));
        previous = b;
    }
    CHECK(bias_envelope(10, 100000000, 0.5, p) < 1e-2 * bias_envelope(10, 1000, 0.5, p));
    CHECK_THROWS_AS(bias_envelope(0, 10, 0.5, p), InvalidArgument);
}

TEST_CASE("C2 constant") {
    CHECK(c2_of(params(1.0, -1.0, 1.0, std::sqrt(2.0))) == doctest::Approx(16.0 / 441.0).epsilon(1e-14));
    CHECK(c2_of(params(1.0, -0.3, 1.0, std::sqrt(2.0))) == doctest::Approx(0.036281).epsilon(1e-5));
    CHECK(c2_of(params(1.0, -0.5, 1.0)) == doctest::Approx(0.025655).epsilon(1e-5));
    CHECK(c2_of(params(1.0, -1.0, 2.0)) == doctest::Approx(0.018144).epsilon(1e-4));
}

TEST_CASE("k* lower bound") {
    const SecondOrderParams p = params(1.0, -1.0, 1.0);
    for (std::size_t n : {1000ul, 10000ul, 1000000ul, 100000000ul}) {
        const KstarLowerBound b = kstar_lower_bound(0.9, n, p);
        CHECK(b.value == doctest::Approx(oracle::kstar_lower(0.9, n, mirror(p))).epsilon(1e-12));
        CHECK(kstar_lower_bound(0.9, 2 * n, p).value > b.value);
        CHECK(kstar_lower_bound(0.1, n, p).value <= b.value);
        CHECK(b.vacuous == (b.value < 1.0));
    }
    // Tiny n: the formula goes negative and is flagged, not clamped.
    const KstarLowerBound tiny = kstar_lower_bound(0.9, 10, p);
    CHECK(tiny.value < 0.0);
    CHECK(tiny.vacuous);
    // delta must not exceed c2^2/4.
    SecondOrderParams narrow = p;
    narrow.c2 = 1.0;
    CHECK_THROWS_AS(kstar_lower_bound(0.3, 1000, narrow), InvalidArgument);
    CHECK_NOTHROW(kstar_lower_bound(0.25, 1000, narrow));
}

TEST_CASE("n0 by substitution") {
    const SecondOrderParams p = params(1.0, -1.0, 1.0);
    const std::size_t n0 = n0_upper_bound(0.9, 96, p);
    CHECK(oracle::n0_inequality(n0, 0.9, 96, mirror(p)));
    CHECK_FALSE(oracle::n0_inequality(n0 - 1, 0.9, 96, mirror(p)));
    CHECK(kstar_lower_bound(0.9 / 96, n0, p).value >= k0_upper_bound(96, 0.9));
    CHECK(n0_upper_bound(0.9, 200, p) > n0);

    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double gamma = 0.2 + 2.0 * u(gen);
        const double rho = -(0.5 + 2.0 * u(gen));
        const double C = 0.2 + 2.0 * u(gen);
        const double c1 = 0.2 + 0.8 * u(gen);
        const SecondOrderParams q = params(gamma, rho, C, c1, 1.01 + u(gen));
        const double delta = 0.05 + 0.9 * u(gen);
        const std::size_t size = 10 + static_cast<std::size_t>(200 * u(gen));
        const std::size_t n = n0_upper_bound(delta, size, q);
        CAPTURE(i);
        CHECK(oracle::n0_inequality(n, delta, size, mirror(q)));
        if (n > 1) CHECK_FALSE(oracle::n0_inequality(n - 1, delta, size, mirror(q)));
    }
}

TEST_CASE("oracle error bound") {
    const SecondOrderParams p = params(1.0, -1.0, 1.0);
    const double base = oracle_error_bound(0.9, 10000, p);
    CHECK(oracle_error_bound(0.9, 80000, p) == doctest::Approx(base / 2.0).epsilon(1e-12));
    CHECK(oracle_error_bound(0.1, 10000, p) / base ==
          doctest::Approx(std::sqrt((1.0 + std::log(40.0)) / (1.0 + std::log(4.0 / 0.9)))).epsilon(1e-12));
    const double reference = 2.0 * (1.0 + std::sqrt(2.0)) * std::sqrt(1.1) /
                             std::sqrt(oracle::c2_constant(mirror(p))) *
                             std::sqrt(1.0 + std::log(4.0 / 0.9)) * std::pow(10000.0, -1.0 / 3.0);
    CHECK(base == doctest::Approx(reference).epsilon(1e-12));
    // Pure power law in n once the gamma and n factors are removed.
    const SecondOrderParams q = params(0.6, -0.7, 1.3);
    const double e = q.rho / (1.0 - 2.0 * q.rho);
    const auto stripped = [&](double n) {
        return oracle_error_bound(0.5, static_cast<std::size_t>(n), q) * std::pow(q.gamma, 2.0 * e) *
               std::pow(n, -e);
    };
    CHECK(stripped(1e3) == doctest::Approx(stripped(1e7)).epsilon(1e-12));
    CHECK(v_star_upper_bound(0.9, 96, 10000, p) ==
          doctest::Approx(oracle_error_bound(0.9 / 96, 10000, p) / 2.0).epsilon(1e-14));
}

TEST_CASE("adaptive error bound") {
    // 0.1 is not a binary fraction; the correctly rounded value for the
    // stored input is 1.5 + 1 ulp.
    CHECK(std::abs(adaptive_error_bound(1.0, 0.1) - 1.5) <= 4.0 * std::numeric_limits<double>::epsilon());
    CHECK(adaptive_error_bound(1.0, 0.125) == 3.0);
    CHECK(adaptive_error_bound(2.0, 0.0) == 0.0);
    CHECK_THROWS_AS(adaptive_error_bound(1.0, 1.0 / 6.0), InvalidArgument);
    CHECK_THROWS_AS(adaptive_error_bound(1.0, -0.01), InvalidArgument);
}

TEST_CASE("k* under the envelope") {
    const Grid grid = geometric_grid(10000, 1.1);
    const SecondOrderParams p = params(0.5, -1.0, 1.0);
    const std::size_t k = kstar_under_envelope(grid, 10000, 0.9, p);
    CHECK(k == scan_kstar(grid, 10000, 0.9, p));
    const auto& pts = grid.points();
    const auto it = std::find(pts.begin(), pts.end(), k);
    REQUIRE(it + 1 != pts.end());
    CHECK(bias_envelope(k, 10000, 0.9, p) <= p.gamma * exact_quantile(k, 0.9));
    CHECK(bias_envelope(*(it + 1), 10000, 0.9, p) > p.gamma * exact_quantile(*(it + 1), 0.9));

    CHECK_THROWS_AS(kstar_under_envelope(grid, 10000, 0.9, params(0.5, -1.0, 1e-12)), InvalidArgument);
    CHECK_THROWS_AS(kstar_under_envelope(grid, 10000, 0.9, params(0.5, -1.0, 1e6)), InvalidArgument);

    // Smaller C never lowers k*.
    std::size_t previous = 0;
    for (double C : {30.0, 10.0, 3.0, 1.0, 0.3, 0.1}) {
        const std::size_t kc = kstar_under_envelope(grid, 10000, 0.9, params(0.5, -1.0, C));
        CHECK(kc >= previous);
        previous = kc;
    }
}

TEST_CASE("k* under the envelope matches a linear scan on random parameters") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int wide = 0;
    for (int i = 0; i < 50; ++i) {
        const double gamma = 0.2 + 1.8 * u(gen);
        const double rho = -(0.2 + 1.8 * u(gen));
        const SecondOrderParams p = params(gamma, rho, std::pow(10.0, -2.0 + 3.0 * u(gen)));
        const double delta = 0.05 + 0.9 * u(gen);
        const std::size_t n = static_cast<std::size_t>(std::pow(10.0, 3.0 + 2.0 * u(gen)));
        const Grid grid = geometric_grid(n, 1.05 + 0.5 * u(gen));
        const std::size_t expected = scan_kstar(grid, n, delta, p);
        CAPTURE(i);
        if (expected == 0) {
            CHECK_THROWS_AS(kstar_under_envelope(grid, n, delta, p), InvalidArgument);
            CHECK_FALSE(check_grid_conditions(grid, n, delta, p).wide);
        } else {
            ++wide;
            CHECK(kstar_under_envelope(grid, n, delta, p) == expected);
            CHECK(check_grid_conditions(grid, n, delta, p).wide);
        }
    }
    CHECK(wide >= 25);
}

TEST_CASE("grid conditions") {
    const SecondOrderParams p = params(0.5, -1.0, 1.0);
    const GridConditions g = check_grid_conditions(geometric_grid(10000, 1.1), 10000, 0.9, p);
    CHECK(g.beta_observed <= 2.0);
    CHECK(g.fine == (p.beta >= g.beta_observed));
    CHECK(g.wide);
    SecondOrderParams loose = p;
    loose.beta = 2.0;
    CHECK(check_grid_conditions(geometric_grid(10000, 1.1), 10000, 0.9, loose).fine);

    const GridConditions sparse = check_grid_conditions(explicit_grid({1, 1000}), 10000, 0.9, p);
    CHECK(sparse.beta_observed == 1000.0);
    CHECK_FALSE(sparse.fine);
    CHECK(check_grid_conditions(linear_grid(10000, 96), 10000, 0.9, p).beta_observed <= 2.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(c2_of(params(1.0, 0.5, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(c2_of(params(-1.0, -1.0, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(c2_of(params(1.0, -1.0, 0.0)), InvalidArgument);
    CHECK_THROWS_AS(c2_of(params(1.0, -1.0, 1.0, 1.0, 1.0)), InvalidArgument);
    CHECK(SecondOrderParams{}.default_constants());
}
