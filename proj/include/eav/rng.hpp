#pragma once

#include <cstdint>
#include <random>

namespace eav {

/// splitmix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` under `root`, separated by a fixed `tag` so that
/// different consumers (replications, quantile tables, ...) never collide.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index,
                                    std::uint64_t tag) noexcept {
    return mix64(mix64(root ^ mix64(tag)) + index);
}

namespace stream_tag {
inline constexpr std::uint64_t replication = 0x5245504cULL;  // "REPL"
inline constexpr std::uint64_t deviation = 0x44455649ULL;    // "DEVI"
}  // namespace stream_tag

/// Deterministic 64-bit seeded generator. Identical seed, identical stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        double u = 0.0;
        while (u <= 0.0) u = unit_(engine_);
        return u;
    }

    double exponential() { return exp_(engine_); }

    /// Gamma(shape, rate 1).
    double gamma(double shape) {
        std::gamma_distribution<double> dist(shape, 1.0);
        return dist(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::exponential_distribution<double> exp_{1.0};
};

}  // namespace eav
