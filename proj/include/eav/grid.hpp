#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eav {

class DeviationTable;

struct GeometricKind {
    double beta;
    friend bool operator==(const GeometricKind&, const GeometricKind&) = default;
};
struct LinearKind {
    std::size_t m;
    friend bool operator==(const LinearKind&, const LinearKind&) = default;
};
struct ExplicitKind {
    friend bool operator==(const ExplicitKind&, const ExplicitKind&) = default;
};

using GridKind = std::variant<GeometricKind, LinearKind, ExplicitKind>;

/// How |K| in delta_K = delta / |K| is counted for geometric grids.
enum class SizeConvention {
    Nominal,  ///< floor(log n / log beta), counted before de-duplication
    Distinct  ///< number of distinct points
};

/// Candidate set K of extreme sample sizes: strictly increasing positive
/// integers plus the size used for the union-bound level delta / |K|.
class Grid {
public:
    Grid(std::vector<std::size_t> points, std::size_t nominal_size, GridKind kind);

    const std::vector<std::size_t>& points() const noexcept { return points_; }
    std::size_t nominal_size() const noexcept { return nominal_size_; }
    const GridKind& kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::size_t min() const { return points_.front(); }
    std::size_t max() const { return points_.back(); }
    bool contains(std::size_t k) const;

    /// delta / |K|.
    double delta_grid(double delta) const;

    /// Human-readable description, e.g. "geometric:1.1".
    std::string describe() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<std::size_t> points_;
    std::size_t nominal_size_;
    GridKind kind_;
};

/// {floor(beta^m) : 1 <= m <= floor(log n / log beta)}, de-duplicated.
Grid geometric_grid(std::size_t n, double beta,
                    SizeConvention convention = SizeConvention::Nominal);

/// {floor(m n / M) : 1 <= m <= M}, de-duplicated, zeros removed; |K| = M.
Grid linear_grid(std::size_t n, std::size_t m);

/// Arbitrary candidate set; sorted and de-duplicated. |K| = number of points.
Grid explicit_grid(std::vector<std::size_t> points);

/// Sample-size independent grid recipe, resolved into a Grid once n is known.
/// Text syntax: `geometric:<beta>` | `linear:<M>` | `explicit:<k1,k2,...>`.
struct GridSpec {
    GridKind kind = GeometricKind{1.1};
    std::vector<std::size_t> explicit_points;
    SizeConvention convention = SizeConvention::Nominal;

    Grid resolve(std::size_t n) const;
    std::string describe() const;

    static GridSpec parse(std::string_view text);
};

/// Smallest grid point k such that V(j, delta_K) < 1/2 for every grid
/// point j >= k. Equals the first point with V < 1/2 when the table is
/// monotone. Throws NoAdmissibleCandidate if no such point exists.
std::size_t k0(const Grid& grid, const DeviationTable& table);

/// 36 log(4 |K| / delta), an upper bound on k0.
double k0_upper_bound(std::size_t grid_nominal_size, double delta);

/// Largest ratio between consecutive grid points (1 for singletons).
double max_consecutive_ratio(const Grid& grid);

}  // namespace eav
