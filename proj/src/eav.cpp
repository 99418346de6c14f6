#include "eav/eav.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <nlohmann/json.hpp>

#include "eav/errors.hpp"

namespace eav {

void EavConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument(fmt::format("delta must lie in (0, 1), got {}", delta));
    }
    if (const auto* mc = std::get_if<MonteCarloQuantile>(&mode); mc && mc->draws < 2) {
        throw InvalidArgument("Monte-Carlo quantile mode needs at least 2 draws");
    }
}

StopDecision stopping_indicator(const HillSweep& sweep, const DeviationTable& table,
                                std::size_t k, std::size_t min_j) {
    const double v_k = table.at(k);
    if (!(v_k < 0.5)) {
        throw InvalidArgument(
            fmt::format("stopping_indicator: V(k={}) = {} >= 1/2, k lies below k0", k, v_k));
    }
    const double* gamma_k = nullptr;
    for (const auto& [j, g] : sweep.entries) {
        if (j == k) gamma_k = &g;
    }
    if (gamma_k == nullptr) {
        throw InvalidArgument(fmt::format("stopping_indicator: k={} is not in the Hill sweep", k));
    }

    const double scale = *gamma_k / (1.0 - 2.0 * v_k);
    StopDecision decision;
    decision.k = k;
    decision.margin = -std::numeric_limits<double>::infinity();
    for (const auto& [j, gamma_j] : sweep.entries) {
        if (j > k) break;
        if (j < min_j) continue;
        const double bound = scale * (table.at(j) + 3.0 * v_k);
        const double margin = std::abs(*gamma_k - gamma_j) - bound;
        if (margin > 0.0) {
            decision.stop = true;
            decision.margin = margin;
            decision.violating_j = j;
            return decision;
        }
        decision.margin = std::max(decision.margin, margin);
    }
    return decision;
}

EavResult select_k_eav(const OrderedSample& sample, const EavConfig& config,
                       const DeviationTable& table) {
    config.validate();
    const HillSweep sweep = hill_sweep(sample, config.grid);
    const std::size_t first = k0(config.grid, table);

    EavResult result;
    result.k0 = first;
    result.delta = config.delta;
    result.delta_grid = table.delta_grid();
    const std::size_t min_j = config.restrict_to_admissible ? first : 0;

    std::optional<std::size_t> accepted;
    for (const auto& [k, gamma] : sweep.entries) {
        if (k < first) continue;
        StopDecision decision = stopping_indicator(sweep, table, k, min_j);
        const bool stop = decision.stop;
        result.trace.push_back(std::move(decision));
        if (stop) break;
        accepted = k;
    }
    if (result.trace.empty()) {
        throw NoAdmissibleCandidate(fmt::format(
            "no admissible candidate: k0={} exceeds n-1={}", first, sample.size() - 1));
    }
    if (!accepted) {
        throw NoAdmissibleCandidate(
            fmt::format("no admissible candidate: the stopping rule fires at k0={}", first));
    }
    result.hit_grid_max = !result.trace.back().stop;
    result.k_hat = *accepted;
    result.gamma_hat = hill_estimate(sample, result.k_hat);
    return result;
}

EavResult select_k_eav(const OrderedSample& sample, const EavConfig& config) {
    config.validate();
    const DeviationTable table = build_deviation_table(config.grid, config.delta, config.mode);
    return select_k_eav(sample, config, table);
}

Estimate estimate(const OrderedSample& sample, const EavConfig& config) {
    config.validate();
    DeviationTable table = build_deviation_table(config.grid, config.delta, config.mode);
    HillSweep sweep = hill_sweep(sample, config.grid);
    EavResult result = select_k_eav(sample, config, table);
    return Estimate{std::move(result), std::move(table), std::move(sweep)};
}

nlohmann::json to_json(const EavResult& result, const EavConfig& config) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& d : result.trace) {
        trace.push_back({{"k", d.k},
                         {"S", d.stop ? 1 : 0},
                         {"margin", d.margin},
                         {"violating_j", d.violating_j ? nlohmann::json(*d.violating_j)
                                                       : nlohmann::json(nullptr)}});
    }
    return {{"k_hat", result.k_hat},
            {"gamma_hat", result.gamma_hat},
            {"k0", result.k0},
            {"delta", result.delta},
            {"delta_grid", result.delta_grid},
            {"grid",
             {{"spec", config.grid.describe()},
              {"nominal_size", config.grid.nominal_size()},
              {"points", config.grid.points()}}},
            {"mode", describe(config.mode)},
            {"restrict_to_admissible", config.restrict_to_admissible},
            {"hit_grid_max", result.hit_grid_max},
            {"trace", trace}};
}

}  // namespace eav
