#pragma once

#include <cstddef>

#include "eav/grid.hpp"

namespace eav::bounds {

// Calculators for the second-order (von Mises) regime, where the bias of
// the Hill estimator is bounded by C t^rho. They are diagnostics only: the
// selection rule never consumes them.

/// gamma, rho < 0, envelope constant C, the lower-quantile constants
/// c1 in (0, 1] and c2 in (0, 2], and a grid ratio beta > 1. The defaults
/// for c1 and c2 are placeholders, not universal values.
struct SecondOrderParams {
    double gamma = 1.0;
    double rho = -1.0;
    double C = 1.0;
    double c1 = 1.0;
    double c2 = 2.0;
    double beta = 1.1;

    void validate() const;
    bool default_constants() const noexcept { return c1 == 1.0 && c2 == 2.0; }
};

/// C (1 + V~(1, delta/2)) (1 + R(1, delta/2))^{-rho}.
double c1_constant(double delta, const SecondOrderParams& p);

/// Looser closed form C (1 + sqrt(3 log(4/delta)) + 3 log(4/delta))^{1 - rho}.
double c1_constant_upper(double delta, const SecondOrderParams& p);

/// C1(delta, rho) (n / (k + 1))^rho.
double bias_envelope(std::size_t k, std::size_t n, double delta, const SecondOrderParams& p);

/// (4/21)^2 (c1 / (sqrt 2 C))^{2 / (1 - 2 rho)}.
double c2_of(const SecondOrderParams& p);

struct KstarLowerBound {
    double value = 0.0;
    /// value < 1: the bound carries no information.
    bool vacuous = false;
    /// value > n/2: outside the range where the bound is established.
    bool exceeds_half_n = false;
};

/// beta^{-1} (C2 gamma^{2/(1-2rho)} n^{-2rho/(1-2rho)} / log(4/delta) - 1).
/// Requires 0 < delta <= c2^2 / 4.
KstarLowerBound kstar_lower_bound(double delta, std::size_t n, const SecondOrderParams& p);

/// Smallest n with 36 log(4|K|/delta) <= kstar_lower_bound(delta/|K|, n).
std::size_t n0_upper_bound(double delta, std::size_t grid_nominal_size,
                           const SecondOrderParams& p);

/// 2 (1 + sqrt 2) sqrt(beta) / sqrt(C2) sqrt(1 + log(4/delta)) (n/gamma^2)^{rho/(1-2rho)}.
double oracle_error_bound(double delta, std::size_t n, const SecondOrderParams& p);

/// Upper bound on V* = V(k*, delta_K): the oracle bound at delta_K divided
/// by 2 gamma.
double v_star_upper_bound(double delta, std::size_t grid_nominal_size, std::size_t n,
                          const SecondOrderParams& p);

/// 6 gamma v* / (1 - 6 v*), for 0 <= v* < 1/6.
double adaptive_error_bound(double gamma, double v_star);

/// max{k in K : bias_envelope(k) <= gamma V(k, delta)} with V the exact
/// quantile. Throws InvalidArgument when the grid is not wide under the
/// envelope.
std::size_t kstar_under_envelope(const Grid& grid, std::size_t n, double delta,
                                 const SecondOrderParams& p);

struct GridConditions {
    bool wide = false;
    bool fine = false;
    double beta_observed = 1.0;
};

GridConditions check_grid_conditions(const Grid& grid, std::size_t n, double delta,
                                     const SecondOrderParams& p);

}  // namespace eav::bounds
