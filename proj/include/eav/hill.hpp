#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "eav/grid.hpp"

namespace eav {

/// Positive observations sorted decreasingly, X_(1) >= ... >= X_(n), with
/// prefix sums S_k = sum_{i<=k} log X_(i). Non-positive inputs are dropped
/// and counted.
class OrderedSample {
public:
    /// Throws NoAdmissibleCandidate when fewer than 2 positive entries remain.
    static OrderedSample from_raw(std::span<const double> raw);

    /// Number of usable (positive) order statistics.
    std::size_t size() const noexcept { return values_.size(); }
    /// Number of raw observations, including dropped ones.
    std::size_t raw_size() const noexcept { return values_.size() + dropped_; }
    std::size_t dropped() const noexcept { return dropped_; }

    const std::vector<double>& values() const noexcept { return values_; }
    /// X_(i), 1-based.
    double order_stat(std::size_t i) const { return values_.at(i - 1); }
    /// S_k, with S_0 = 0.
    double log_prefix(std::size_t k) const { return log_prefix_.at(k); }

private:
    OrderedSample(std::vector<double> values, std::size_t dropped);

    std::vector<double> values_;
    std::vector<double> log_prefix_;  // size n + 1
    std::size_t dropped_;
};

/// Convenience wrapper around OrderedSample::from_raw.
OrderedSample order_sample(std::span<const double> raw);

/// gamma_hat(k) = (1/k) sum_{i<=k} log(X_(i) / X_(k+1)), for 1 <= k <= n - 1.
double hill_estimate(const OrderedSample& sample, std::size_t k);

struct HillSweep {
    std::vector<std::pair<std::size_t, double>> entries;
    /// Grid points dropped because they exceed n - 1.
    std::vector<std::size_t> dropped_points;

    std::size_t size() const noexcept { return entries.size(); }
};

/// Hill estimates at every grid point k <= n - 1, in grid order.
/// Throws NoAdmissibleCandidate if no grid point is in range.
HillSweep hill_sweep(const OrderedSample& sample, const Grid& grid);

}  // namespace eav
