#include "eav/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>

#include "eav/deviation.hpp"
#include "eav/errors.hpp"

namespace eav {

namespace {

// floor(beta^m), snapping values within rounding of an integer.
std::size_t floor_power(double beta, std::size_t m) {
    const double value = std::pow(beta, static_cast<double>(m));
    const double nearest = std::round(value);
    if (std::abs(value - nearest) <= 1e-9 * nearest) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::floor(value));
}

void sort_unique(std::vector<std::size_t>& points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    text = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument(fmt::format("invalid {} '{}'", what, text));
    }
    return value;
}

}  // namespace

Grid::Grid(std::vector<std::size_t> points, std::size_t nominal_size, GridKind kind)
    : points_(std::move(points)), nominal_size_(nominal_size), kind_(kind) {
    if (points_.empty()) throw InvalidArgument("grid must be non-empty");
    if (points_.front() == 0) throw InvalidArgument("grid points must be positive");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i] <= points_[i - 1]) {
            throw InvalidArgument("grid points must be strictly increasing");
        }
    }
    if (nominal_size_ < points_.size()) {
        throw InvalidArgument("grid nominal size below its number of points");
    }
}

bool Grid::contains(std::size_t k) const {
    return std::binary_search(points_.begin(), points_.end(), k);
}

double Grid::delta_grid(double delta) const {
    return delta / static_cast<double>(nominal_size_);
}

std::string Grid::describe() const {
    return std::visit(
        [this](const auto& kind) -> std::string {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, GeometricKind>) {
                return fmt::format("geometric:{}", kind.beta);
            } else if constexpr (std::is_same_v<T, LinearKind>) {
                return fmt::format("linear:{}", kind.m);
            } else {
                return fmt::format("explicit:{}", fmt::join(points_, ","));
            }
        },
        kind_);
}

Grid geometric_grid(std::size_t n, double beta, SizeConvention convention) {
    if (n < 2) throw InvalidArgument("geometric_grid: n must be >= 2");
    if (!(beta > 1.0)) throw InvalidArgument("geometric_grid: beta must be > 1");
    auto m_max = static_cast<std::size_t>(
        std::floor(std::log(static_cast<double>(n)) / std::log(beta)));
    // Correct the log ratio where it lands just below an integer (e.g. n=1000, beta=10).
    while (floor_power(beta, m_max + 1) <= n) ++m_max;
    while (m_max > 0 && floor_power(beta, m_max) > n) --m_max;
    if (m_max == 0) throw InvalidArgument("geometric_grid: beta exceeds n");

    std::vector<std::size_t> points;
    points.reserve(m_max);
    for (std::size_t m = 1; m <= m_max; ++m) points.push_back(floor_power(beta, m));
    sort_unique(points);
    const std::size_t size = convention == SizeConvention::Nominal ? m_max : points.size();
    return Grid(std::move(points), size, GeometricKind{beta});
}

Grid linear_grid(std::size_t n, std::size_t m) {
    if (n < 2) throw InvalidArgument("linear_grid: n must be >= 2");
    if (m < 1 || m > n) throw InvalidArgument("linear_grid: M must lie in [1, n]");
    std::vector<std::size_t> points;
    points.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) {
        const std::size_t k = i * n / m;
        if (k > 0) points.push_back(k);
    }
    sort_unique(points);
    return Grid(std::move(points), m, LinearKind{m});
}

Grid explicit_grid(std::vector<std::size_t> points) {
    sort_unique(points);
    const std::size_t size = points.size();
    return Grid(std::move(points), size, ExplicitKind{});
}

Grid GridSpec::resolve(std::size_t n) const {
    return std::visit(
        [&](const auto& kind) -> Grid {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, GeometricKind>) {
                return geometric_grid(n, kind.beta, convention);
            } else if constexpr (std::is_same_v<T, LinearKind>) {
                return linear_grid(n, kind.m);
            } else {
                return explicit_grid(explicit_points);
            }
        },
        kind);
}

std::string GridSpec::describe() const {
    return std::visit(
        [&](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GeometricKind>) {
                return fmt::format("geometric:{}", k.beta);
            } else if constexpr (std::is_same_v<T, LinearKind>) {
                return fmt::format("linear:{}", k.m);
            } else {
                return fmt::format("explicit:{}", fmt::join(explicit_points, ","));
            }
        },
        kind);
}

GridSpec GridSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument(fmt::format("grid spec '{}' lacks ':'", text));
    }
    const std::string_view name = trim(text.substr(0, colon));
    const std::string_view arg = trim(text.substr(colon + 1));
    GridSpec spec;
    if (name == "geometric") {
        double beta = 0.0;
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), beta);
        if (ec != std::errc{} || ptr != arg.data() + arg.size() || !(beta > 1.0)) {
            throw InvalidArgument(fmt::format("invalid geometric ratio '{}'", arg));
        }
        spec.kind = GeometricKind{beta};
    } else if (name == "linear") {
        const std::size_t m = parse_count(arg, "linear grid size");
        if (m == 0) throw InvalidArgument("linear grid size must be positive");
        spec.kind = LinearKind{m};
    } else if (name == "explicit") {
        std::string_view rest = arg;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const std::size_t k = parse_count(item, "grid point");
            if (k == 0) throw InvalidArgument("grid points must be positive");
            spec.explicit_points.push_back(k);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (spec.explicit_points.empty()) throw InvalidArgument("explicit grid is empty");
        spec.kind = ExplicitKind{};
    } else {
        throw InvalidArgument(fmt::format("unknown grid kind '{}'", name));
    }
    return spec;
}

std::size_t k0(const Grid& grid, const DeviationTable& table) {
    if (table.grid_points() != grid.points()) {
        throw InvalidArgument("k0: deviation table was built for a different grid");
    }
    // First point of the longest suffix with V < 1/2. For a monotone table
    // this is the first point with V < 1/2; a sampled table can cross back
    // above 1/2, and the scan must never divide by 1 - 2V <= 0.
    const auto& values = table.values();
    std::size_t start = values.size();
    while (start > 0 && values[start - 1] < 0.5) --start;
    if (start < values.size()) return grid.points()[start];
    throw NoAdmissibleCandidate(
        fmt::format("no admissible k: V(k_max={}, delta_K={:.6g}) = {:.6g} >= 1/2", grid.max(),
                    table.delta_grid(), values.back()));
}

double k0_upper_bound(std::size_t grid_nominal_size, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    return 36.0 * std::log(4.0 * static_cast<double>(grid_nominal_size) / delta);
}

double max_consecutive_ratio(const Grid& grid) {
    double worst = 1.0;
    const auto& p = grid.points();
    for (std::size_t i = 1; i < p.size(); ++i) {
        worst = std::max(worst, static_cast<double>(p[i]) / static_cast<double>(p[i - 1]));
    }
    return worst;
}

}  // namespace eav
