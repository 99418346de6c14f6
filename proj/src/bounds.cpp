#include "eav/bounds.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "eav/deviation.hpp"
#include "eav/errors.hpp"

namespace eav::bounds {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument(fmt::format("delta must lie in (0, 1), got {}", delta));
    }
}

// Exponent 2 / (1 - 2 rho) shared by C2 and the gamma factor.
double two_over(double rho) { return 2.0 / (1.0 - 2.0 * rho); }

bool envelope_below_variance(std::size_t k, std::size_t n, double delta,
                             const SecondOrderParams& p) {
    return bias_envelope(k, n, delta, p) <= p.gamma * exact_quantile(k, delta);
}

}  // namespace

void SecondOrderParams::validate() const {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
    if (!(rho < 0.0)) throw InvalidArgument("rho must be < 0");
    if (!(C > 0.0)) throw InvalidArgument("C must be > 0");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("c1 and c2 must be > 0");
    if (!(beta > 1.0)) throw InvalidArgument("beta must be > 1");
}

double c1_constant(double delta, const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    return p.C * (1.0 + v_tilde(1.0, delta / 2.0)) * std::pow(1.0 + r_bound(1.0, delta / 2.0), -p.rho);
}

double c1_constant_upper(double delta, const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    const double l = std::log(4.0 / delta);
    return p.C * std::pow(1.0 + std::sqrt(3.0 * l) + 3.0 * l, 1.0 - p.rho);
}

double bias_envelope(std::size_t k, std::size_t n, double delta, const SecondOrderParams& p) {
    if (k < 1 || k > n) {
        throw InvalidArgument(fmt::format("bias_envelope: k={} outside [1, n={}]", k, n));
    }
    const double ratio = static_cast<double>(n) / static_cast<double>(k + 1);
    return c1_constant(delta, p) * std::pow(ratio, p.rho);
}

double c2_of(const SecondOrderParams& p) {
    p.validate();
    const double inner = p.c1 / (std::numbers::sqrt2 * p.C);
    return (16.0 / 441.0) * std::pow(inner, two_over(p.rho));
}

KstarLowerBound kstar_lower_bound(double delta, std::size_t n, const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    if (delta > p.c2 * p.c2 / 4.0) {
        throw InvalidArgument(
            fmt::format("kstar_lower_bound: delta={} exceeds c2^2/4={}", delta, p.c2 * p.c2 / 4.0));
    }
    const double e = two_over(p.rho);
    const double n_power = std::pow(static_cast<double>(n), -p.rho * e);
    const double value =
        (c2_of(p) * std::pow(p.gamma, e) * n_power / std::log(4.0 / delta) - 1.0) / p.beta;
    return {value, value < 1.0, value > static_cast<double>(n) / 2.0};
}

std::size_t n0_upper_bound(double delta, std::size_t grid_nominal_size,
                           const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    if (grid_nominal_size == 0) throw InvalidArgument("grid size must be positive");
    const double delta_grid = delta / static_cast<double>(grid_nominal_size);
    if (delta_grid > p.c2 * p.c2 / 4.0) {
        throw InvalidArgument("n0_upper_bound: delta/|K| exceeds c2^2/4");
    }
    const double target = k0_upper_bound(grid_nominal_size, delta);
    auto satisfied = [&](std::size_t n) {
        return kstar_lower_bound(delta_grid, n, p).value >= target;
    };

    const double l = std::log(4.0 * static_cast<double>(grid_nominal_size) / delta);
    const double e = -2.0 * p.rho / (1.0 - 2.0 * p.rho);
    const double base = (36.0 * p.beta * l + 1.0) * l / (c2_of(p) * std::pow(p.gamma, two_over(p.rho)));
    const double solution = std::pow(base, 1.0 / e);
    if (!(solution < 1e18)) {
        throw InvalidArgument(fmt::format("n0_upper_bound: solution {:.3g} is out of range", solution));
    }
    auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(solution)));
    // Rounding in the closed form can be off by one either way.
    while (!satisfied(n)) ++n;
    while (n > 1 && satisfied(n - 1)) --n;
    return n;
}

double oracle_error_bound(double delta, std::size_t n, const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    const double lead = 2.0 * (1.0 + std::numbers::sqrt2) * std::sqrt(p.beta) / std::sqrt(c2_of(p));
    const double exponent = p.rho / (1.0 - 2.0 * p.rho);
    return lead * std::sqrt(1.0 + std::log(4.0 / delta)) *
           std::pow(static_cast<double>(n) / (p.gamma * p.gamma), exponent);
}

double v_star_upper_bound(double delta, std::size_t grid_nominal_size, std::size_t n,
                          const SecondOrderParams& p) {
    const double delta_grid = delta / static_cast<double>(grid_nominal_size);
    return oracle_error_bound(delta_grid, n, p) / (2.0 * p.gamma);
}

double adaptive_error_bound(double gamma, double v_star) {
    if (!(v_star >= 0.0 && v_star < 1.0 / 6.0)) {
        throw InvalidArgument(fmt::format("adaptive_error_bound: v*={} outside [0, 1/6)", v_star));
    }
    return 6.0 * gamma * v_star / (1.0 - 6.0 * v_star);
}

std::size_t kstar_under_envelope(const Grid& grid, std::size_t n, double delta,
                                 const SecondOrderParams& p) {
    p.validate();
    check_delta(delta);
    const auto& points = grid.points();
    if (points.back() > n) throw InvalidArgument("grid exceeds the sample size");
    if (!envelope_below_variance(points.front(), n, delta, p)) {
        throw InvalidArgument("envelope grid not wide: bias exceeds gamma V at k_min");
    }
    if (envelope_below_variance(points.back(), n, delta, p)) {
        throw InvalidArgument("envelope grid not wide: bias stays below gamma V at k_max");
    }
    // The envelope increases in k and V decreases, so the predicate flips once.
    std::size_t lo = 0;                  // predicate true
    std::size_t hi = points.size() - 1;  // predicate false
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (envelope_below_variance(points[mid], n, delta, p)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return points[lo];
}

GridConditions check_grid_conditions(const Grid& grid, std::size_t n, double delta,
                                     const SecondOrderParams& p) {
    p.validate();
    GridConditions out;
    out.beta_observed = max_consecutive_ratio(grid);
    out.fine = out.beta_observed <= p.beta;
    if (grid.max() <= n) {
        out.wide = envelope_below_variance(grid.min(), n, delta, p) &&
                   !envelope_below_variance(grid.max(), n, delta, p);
    }
    return out;
}

}  // namespace eav::bounds
