#include "eav/hill.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "eav/errors.hpp"

namespace eav {

OrderedSample::OrderedSample(std::vector<double> values, std::size_t dropped)
    : values_(std::move(values)), dropped_(dropped) {
    log_prefix_.resize(values_.size() + 1);
    log_prefix_[0] = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        log_prefix_[i + 1] = log_prefix_[i] + std::log(values_[i]);
    }
}

OrderedSample OrderedSample::from_raw(std::span<const double> raw) {
    std::vector<double> positive;
    positive.reserve(raw.size());
    std::size_t dropped = 0;
    for (double x : raw) {
        if (x > 0.0 && std::isfinite(x)) {
            positive.push_back(x);
        } else {
            ++dropped;
        }
    }
    if (positive.size() < 2) {
        throw NoAdmissibleCandidate("sample has fewer than 2 positive entries (" +
                                    std::to_string(positive.size()) + " found)");
    }
    std::stable_sort(positive.begin(), positive.end(), std::greater<>{});
    return OrderedSample(std::move(positive), dropped);
}

OrderedSample order_sample(std::span<const double> raw) { return OrderedSample::from_raw(raw); }

double hill_estimate(const OrderedSample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    if (k < 1 || k > n - 1) {
        throw InvalidArgument("hill_estimate: k=" + std::to_string(k) + " outside [1, " +
                              std::to_string(n - 1) + "]");
    }
    const double threshold = sample.order_stat(k + 1);
    if (!(threshold > 0.0)) {
        throw InvalidArgument("hill_estimate: X_(k+1) must be positive");
    }
    const double value = sample.log_prefix(k) / static_cast<double>(k) - std::log(threshold);
    // Rounding can push an all-ties block slightly below zero.
    return std::max(value, 0.0);
}

HillSweep hill_sweep(const OrderedSample& sample, const Grid& grid) {
    HillSweep sweep;
    const std::size_t limit = sample.size() - 1;
    for (std::size_t k : grid.points()) {
        if (k <= limit) {
            sweep.entries.emplace_back(k, hill_estimate(sample, k));
        } else {
            sweep.dropped_points.push_back(k);
        }
    }
    if (sweep.entries.empty()) {
        throw NoAdmissibleCandidate("no grid point satisfies k <= n - 1 = " +
                                    std::to_string(limit));
    }
    return sweep;
}

}  // namespace eav
