#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "eav/grid.hpp"

namespace eav {

// Deviation term V(k, delta): the (1 - delta/2)-quantile of |Z_k - 1| where
// Z_k ~ Gamma(shape k, rate k), i.e. Z_k is the mean of k unit exponentials.

struct ExactQuantile {};

struct MonteCarloQuantile {
    std::size_t draws = 2000;
    std::uint64_t seed = 0;
};

using QuantileMode = std::variant<ExactQuantile, MonteCarloQuantile>;

std::string describe(const QuantileMode& mode);

/// Parses `exact` or `mc[:<draws>]`; the seed is supplied separately.
QuantileMode parse_quantile_mode(const std::string& text, std::uint64_t seed);

/// P(|Z_k - 1| <= y) = G_k(k(1 + y)) - G_k(k max(1 - y, 0)), G_k the
/// Gamma(k, 1) distribution function.
double abs_gamma_cdf(std::size_t k, double y);

/// Smallest y >= 0 with abs_gamma_cdf(k, y) >= 1 - delta/2, by bisection on
/// [0, v_tilde(k, delta/2)].
double exact_quantile(std::size_t k, double delta);

/// Empirical (1 - delta/2)-quantile of `draws` samples of |Z_k - 1|, using the
/// order statistic of rank ceil((1 - delta/2) draws).
double mc_quantile(std::size_t k, double delta, std::size_t draws, std::uint64_t seed);

/// sqrt(2 log(2/delta) / k) + log(2/delta) / k; bounds |Z_k - 1| w.p. 1 - delta.
double v_tilde(double k, double delta);

/// sqrt(3 log(1/delta) / k) + 3 log(1/delta) / k; uniform order statistic
/// concentration radius.
double r_bound(double k, double delta);

/// V(k, delta / |K|) for every grid point.
class DeviationTable {
public:
    DeviationTable(std::vector<std::size_t> grid_points, double delta, double delta_grid,
                   std::vector<double> values, QuantileMode mode);

    const std::vector<std::size_t>& grid_points() const noexcept { return grid_points_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double delta() const noexcept { return delta_; }
    double delta_grid() const noexcept { return delta_grid_; }
    const QuantileMode& mode() const noexcept { return mode_; }

    /// Value at grid index i.
    double at_index(std::size_t i) const { return values_.at(i); }
    /// Value at grid point k; throws InvalidArgument if k is not in the table.
    double at(std::size_t k) const;
    std::size_t index_of(std::size_t k) const;

    /// True when values are non-increasing in k. Exact tables always are;
    /// Monte-Carlo tables are stored raw and may violate it.
    bool monotone() const noexcept { return monotone_; }

    /// CSV with header `k,V`.
    void write_csv(std::ostream& out) const;

private:
    std::vector<std::size_t> grid_points_;
    double delta_;
    double delta_grid_;
    std::vector<double> values_;
    QuantileMode mode_;
    bool monotone_;
};

/// Evaluates V(k, delta / |K|) on every grid point. In Monte-Carlo mode the
/// seed for point k is derive_seed(mode.seed, k, stream_tag::deviation).
DeviationTable build_deviation_table(const Grid& grid, double delta, const QuantileMode& mode);

}  // namespace eav
