#include "eav/deviation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "eav/errors.hpp"
#include "eav/rng.hpp"
#include "eav/special.hpp"

namespace eav {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument(fmt::format("delta must lie in (0, 1), got {}", delta));
    }
}

void check_k(double k) {
    if (!(k >= 1.0)) throw InvalidArgument(fmt::format("k must be >= 1, got {}", k));
}

}  // namespace

std::string describe(const QuantileMode& mode) {
    if (const auto* mc = std::get_if<MonteCarloQuantile>(&mode)) {
        return fmt::format("mc:{}:seed={}", mc->draws, mc->seed);
    }
    return "exact";
}

QuantileMode parse_quantile_mode(const std::string& text, std::uint64_t seed) {
    if (text == "exact") return ExactQuantile{};
    if (text == "mc") return MonteCarloQuantile{2000, seed};
    if (text.rfind("mc:", 0) == 0) {
        std::size_t draws = 0;
        const char* first = text.data() + 3;
        const char* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, draws);
        if (ec != std::errc{} || ptr != last || draws < 2) {
            throw InvalidArgument(fmt::format("invalid Monte-Carlo draw count in '{}'", text));
        }
        return MonteCarloQuantile{draws, seed};
    }
    throw InvalidArgument(fmt::format("unknown quantile mode '{}' (expected exact | mc[:N])", text));
}

double abs_gamma_cdf(std::size_t k, double y) {
    check_k(static_cast<double>(k));
    if (!(y >= 0.0)) throw InvalidArgument("abs_gamma_cdf: y must be nonnegative");
    const double shape = static_cast<double>(k);
    const double upper = shape * (1.0 + y);
    const double lower = shape * std::max(1.0 - y, 0.0);
    const double p_upper = special::gamma_p(shape, upper);
    const double p_lower = lower > 0.0 ? special::gamma_p(shape, lower) : 0.0;
    return std::clamp(p_upper - p_lower, 0.0, 1.0);
}

double exact_quantile(std::size_t k, double delta) {
    check_k(static_cast<double>(k));
    check_delta(delta);
    const double target = 1.0 - delta / 2.0;
    double lo = 0.0;
    double hi = v_tilde(static_cast<double>(k), delta / 2.0);
    while (abs_gamma_cdf(k, hi) < target) hi *= 2.0;  // not expected: the bound is a bracket
    // Absolute tolerance 1e-10, tightened for large k where the density of
    // |Z_k - 1| grows like sqrt(k).
    const double tol = 1e-10 / std::max(1.0, std::sqrt(static_cast<double>(k)));
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (abs_gamma_cdf(k, mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double mc_quantile(std::size_t k, double delta, std::size_t draws, std::uint64_t seed) {
    check_k(static_cast<double>(k));
    check_delta(delta);
    if (draws < 2) throw InvalidArgument("mc_quantile: draws must be >= 2");
    Rng rng(seed);
    std::vector<double> deviations(draws);
    const double shape = static_cast<double>(k);
    for (double& d : deviations) {
        d = std::abs(rng.gamma(shape) / shape - 1.0);
    }
    const double level = (1.0 - delta / 2.0) * static_cast<double>(draws);
    auto rank = static_cast<std::size_t>(std::ceil(level - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, draws);
    auto nth = deviations.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(deviations.begin(), nth, deviations.end());
    return *nth;
}

double v_tilde(double k, double delta) {
    check_k(k);
    check_delta(delta);
    const double l = std::log(2.0 / delta);
    return std::sqrt(2.0 * l / k) + l / k;
}

double r_bound(double k, double delta) {
    check_k(k);
    check_delta(delta);
    const double l = std::log(1.0 / delta);
    return std::sqrt(3.0 * l / k) + 3.0 * l / k;
}

DeviationTable::DeviationTable(std::vector<std::size_t> grid_points, double delta,
                               double delta_grid, std::vector<double> values, QuantileMode mode)
    : grid_points_(std::move(grid_points)),
      delta_(delta),
      delta_grid_(delta_grid),
      values_(std::move(values)),
      mode_(mode) {
    if (grid_points_.size() != values_.size()) {
        throw InvalidArgument("deviation table: points and values differ in length");
    }
    monotone_ = std::is_sorted(values_.rbegin(), values_.rend());
}

std::size_t DeviationTable::index_of(std::size_t k) const {
    const auto it = std::lower_bound(grid_points_.begin(), grid_points_.end(), k);
    if (it == grid_points_.end() || *it != k) {
        throw InvalidArgument(fmt::format("k={} is not a grid point of the deviation table", k));
    }
    return static_cast<std::size_t>(it - grid_points_.begin());
}

double DeviationTable::at(std::size_t k) const { return values_[index_of(k)]; }

void DeviationTable::write_csv(std::ostream& out) const {
    out << "k,V\n";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out << fmt::format("{},{:.17g}\n", grid_points_[i], values_[i]);
    }
}

DeviationTable build_deviation_table(const Grid& grid, double delta, const QuantileMode& mode) {
    check_delta(delta);
    const double delta_grid = grid.delta_grid(delta);
    std::vector<double> values;
    values.reserve(grid.size());
    for (std::size_t k : grid.points()) {
        if (const auto* mc = std::get_if<MonteCarloQuantile>(&mode)) {
            const auto seed = derive_seed(mc->seed, k, stream_tag::deviation);
            values.push_back(mc_quantile(k, delta_grid, mc->draws, seed));
        } else {
            values.push_back(exact_quantile(k, delta_grid));
        }
    }
    return DeviationTable(grid.points(), delta, delta_grid, std::move(values), mode);
}

}  // namespace eav
