#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eav/deviation.hpp"
#include "eav/grid.hpp"
#include "eav/hill.hpp"

namespace eav {

/// Extreme Adaptive Validation settings. `delta` is the only free parameter
/// of the rule itself; the grid and quantile mode select its implementation.
struct EavConfig {
    double delta = 0.9;
    Grid grid = explicit_grid({1});
    QuantileMode mode = MonteCarloQuantile{2000, 0};
    /// Compare only against grid points j >= k0 (default: every j <= k).
    bool restrict_to_admissible = false;

    void validate() const;
};

/// Outcome of S(k) at one grid point.
struct StopDecision {
    std::size_t k = 0;
    bool stop = false;
    /// max_j |gamma(k) - gamma(j)| - bound(j, k). Positive iff stop; when
    /// stopping this is the margin of the first violating j.
    double margin = 0.0;
    std::optional<std::size_t> violating_j;
};

/// S(k) = 1 iff some grid j <= k has
///   |gamma(k) - gamma(j)| > gamma(k) / (1 - 2 V(k)) * (V(j) + 3 V(k)),
/// with V evaluated at delta_K. Requires V(k) < 1/2. When `min_j` is set,
/// only grid points j >= min_j are compared.
StopDecision stopping_indicator(const HillSweep& sweep, const DeviationTable& table,
                                std::size_t k, std::size_t min_j = 0);

struct EavResult {
    std::size_t k_hat = 0;
    double gamma_hat = 0.0;
    std::size_t k0 = 0;
    double delta = 0.0;
    double delta_grid = 0.0;
    /// S(k) at every visited grid point, ascending from k0.
    std::vector<StopDecision> trace;
    /// True when no visited k triggered the stopping rule.
    bool hit_grid_max = false;
};

/// Scans grid points k >= k0 (and k <= n - 1) upward and returns the last
/// k before the first S(k) = 1, or the largest admissible point.
/// Throws NoAdmissibleCandidate when the admissible range is empty.
EavResult select_k_eav(const OrderedSample& sample, const EavConfig& config);

/// Variant reusing a precomputed table for config.grid / config.delta.
EavResult select_k_eav(const OrderedSample& sample, const EavConfig& config,
                       const DeviationTable& table);

struct Estimate {
    EavResult result;
    DeviationTable table;
    HillSweep sweep;
};

/// One-call estimation: table, sweep and selection, with all diagnostics.
Estimate estimate(const OrderedSample& sample, const EavConfig& config);

/// {k_hat, gamma_hat, k0, delta, delta_grid, grid, mode, hit_grid_max, trace}
nlohmann::json to_json(const EavResult& result, const EavConfig& config);

}  // namespace eav
