#include "eav/distributions.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "eav/errors.hpp"

namespace eav::dist {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto colon = text.find(':');
        const std::string_view item = text.substr(0, colon);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw InvalidArgument(fmt::format("invalid distribution parameter '{}'", item));
        }
        out.push_back(value);
        if (colon == std::string_view::npos) break;
        text.remove_prefix(colon + 1);
    }
    return out;
}

double pareto_from_survival(double alpha, double p) { return std::pow(p, -1.0 / alpha); }

double pcp_survival(const Pcp& d, double x) {
    if (x <= 1.0) return 1.0;
    const double tau = pcp_tau(d.gamma_prime, d.tail_prob);
    if (x <= tau) return std::pow(x, -1.0 / d.gamma_prime);
    return d.tail_prob * std::pow(x / tau, -1.0 / d.gamma);
}

// Solves c x^{-alpha} (log x)^beta = p on [x0, inf) by bisection in t = log x,
// where the log-survival beta log(e alpha / beta) - alpha t + beta log t is
// decreasing.
double perturb_from_survival(const Perturb& d, double p) {
    const double t0 = d.beta / d.alpha;
    if (p >= 1.0) return std::exp(t0);
    const double log_c = d.beta * (1.0 + std::log(d.alpha / d.beta));
    const double target = std::log(p);
    auto log_survival = [&](double t) { return log_c - d.alpha * t + d.beta * std::log(t); };
    double lo = t0;
    double hi = std::max(2.0 * t0, 1.0);
    while (log_survival(hi) > target) {
        lo = hi;
        hi *= 2.0;
    }
    // Relative accuracy on x equals absolute accuracy on t.
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (log_survival(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

// Quantile at survival level p = 1 - u, evaluated without forming 1 - p where
// that loses tail precision.
double from_survival(const DistributionSpec& spec, double p) {
    return std::visit(
        overloaded{
            [&](const Pareto& d) { return pareto_from_survival(d.alpha, p); },
            [&](const CounterExample& d) {
                return counterexample_transform(d.s, pareto_from_survival(d.alpha, p));
            },
            [&](const SymmetricStable&) -> double {
                throw InvalidArgument("symmetric stable law has no closed quantile");
            },
            [&](const Perturb& d) { return perturb_from_survival(d, p); },
            [&](const Frechet& d) { return d.shift + std::pow(-std::log1p(-p), -d.gamma); },
            [&](const Pcp& d) {
                if (p >= d.tail_prob) return std::pow(p, -d.gamma_prime);
                return pcp_tau(d.gamma_prime, d.tail_prob) * std::pow(p / d.tail_prob, -d.gamma);
            },
        },
        spec);
}

// Chambers-Mallows-Stuck with zero skewness and unit scale.
double stable_draw(double alpha, Rng& rng) {
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double w = rng.exponential();
    if (alpha == 1.0) return std::tan(v);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

void require(bool ok, std::string_view what) {
    if (!ok) throw InvalidArgument(std::string(what));
}

}  // namespace

void validate(const DistributionSpec& spec) {
    std::visit(overloaded{
                   [](const Pareto& d) { require(d.alpha > 0.0, "pareto: alpha must be > 0"); },
                   [](const CounterExample& d) {
                       require(d.alpha > 0.0, "counter: alpha must be > 0");
                       require(d.s > 0.0 && d.s <= 1.0, "counter: s must lie in (0, 1]");
                   },
                   [](const SymmetricStable& d) {
                       require(d.alpha > 0.0 && d.alpha < 2.0, "stable: alpha must lie in (0, 2)");
                   },
                   [](const Perturb& d) {
                       require(d.alpha > 0.0 && d.beta > 0.0, "perturb: alpha, beta must be > 0");
                   },
                   [](const Frechet& d) {
                       require(d.gamma > 0.0, "frechet: gamma must be > 0");
                       require(d.shift >= 0.0, "frechet: shift must be >= 0");
                   },
                   [](const Pcp& d) {
                       require(d.gamma_prime > 0.0 && d.gamma > 0.0, "pcp: indices must be > 0");
                       require(d.tail_prob > 0.0 && d.tail_prob < 1.0,
                               "pcp: tail probability must lie in (0, 1)");
                   },
               },
               spec);
}

DistributionSpec parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument(fmt::format("distribution spec '{}' lacks parameters", text));
    }
    const std::string_view name = text.substr(0, colon);
    const std::vector<double> p = parse_numbers(text.substr(colon + 1));
    auto arity = [&](std::size_t expected) {
        if (p.size() != expected) {
            throw InvalidArgument(fmt::format("distribution '{}' takes {} parameter(s), got {}",
                                              name, expected, p.size()));
        }
    };
    DistributionSpec spec;
    if (name == "pareto") {
        arity(1);
        spec = Pareto{p[0]};
    } else if (name == "counter") {
        arity(2);
        spec = CounterExample{p[0], p[1]};
    } else if (name == "stable") {
        arity(1);
        spec = SymmetricStable{p[0]};
    } else if (name == "perturb") {
        arity(2);
        spec = Perturb{p[0], p[1]};
    } else if (name == "frechet") {
        if (p.size() == 1) {
            spec = Frechet{p[0], 0.0};
        } else {
            arity(2);
            spec = Frechet{p[0], p[1]};
        }
    } else if (name == "pcp") {
        arity(3);
        spec = Pcp{p[0], p[1], p[2]};
    } else {
        throw InvalidArgument(fmt::format("unknown distribution '{}'", name));
    }
    validate(spec);
    return spec;
}

std::string describe(const DistributionSpec& spec) {
    return std::visit(
        overloaded{
            [](const Pareto& d) { return fmt::format("pareto:{}", d.alpha); },
            [](const CounterExample& d) { return fmt::format("counter:{}:{}", d.alpha, d.s); },
            [](const SymmetricStable& d) { return fmt::format("stable:{}", d.alpha); },
            [](const Perturb& d) { return fmt::format("perturb:{}:{}", d.alpha, d.beta); },
            [](const Frechet& d) { return fmt::format("frechet:{}:{}", d.gamma, d.shift); },
            [](const Pcp& d) {
                return fmt::format("pcp:{}:{}:{}", d.gamma_prime, d.gamma, d.tail_prob);
            },
        },
        spec);
}

double true_gamma(const DistributionSpec& spec) {
    return std::visit(overloaded{
                          [](const Pareto& d) { return 1.0 / d.alpha; },
                          [](const CounterExample& d) { return 1.0 / d.alpha; },
                          [](const SymmetricStable& d) { return 1.0 / d.alpha; },
                          [](const Perturb& d) { return 1.0 / d.alpha; },
                          [](const Frechet& d) { return d.gamma; },
                          [](const Pcp& d) { return d.gamma; },
                      },
                      spec);
}

double quantile(const DistributionSpec& spec, double u) {
    if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("quantile: u must lie in (0, 1)");
    return from_survival(spec, 1.0 - u);
}

double cdf(const DistributionSpec& spec, double x) {
    return std::visit(
        overloaded{
            [&](const Pareto& d) { return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -d.alpha); },
            [&](const CounterExample& d) { return counterexample_cdf(d.alpha, d.s, x); },
            [&](const SymmetricStable&) -> double {
                throw InvalidArgument("symmetric stable law has no closed distribution function");
            },
            [&](const Perturb& d) {
                if (x <= perturb_x0(d.alpha, d.beta)) return 0.0;
                return 1.0 - perturb_survival(d.alpha, d.beta, x);
            },
            [&](const Frechet& d) {
                if (x <= d.shift) return 0.0;
                return std::exp(-std::pow(x - d.shift, -1.0 / d.gamma));
            },
            [&](const Pcp& d) { return 1.0 - pcp_survival(d, x); },
        },
        spec);
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    std::vector<double> out(n);
    if (const auto* stable = std::get_if<SymmetricStable>(&spec)) {
        for (double& x : out) x = stable_draw(stable->alpha, rng);
        return out;
    }
    // Inverse transform; U and 1 - U share a law, so U is used as the
    // survival level directly.
    for (double& x : out) x = from_survival(spec, rng.uniform_open());
    return out;
}

std::vector<double> experiment_sample(const DistributionSpec& spec, std::size_t n, Rng& rng) {
    std::vector<double> draws = sample(spec, n, rng);
    if (std::holds_alternative<SymmetricStable>(spec)) {
        for (double& x : draws) x = std::abs(x);
    }
    return draws;
}

double pcp_tau(double gamma_prime, double tail_prob) {
    require(tail_prob > 0.0 && tail_prob < 1.0, "pcp_tau: tail probability must lie in (0, 1)");
    return std::pow(tail_prob, -gamma_prime);
}

std::size_t counterexample_block(double s, double x) {
    auto m = static_cast<std::size_t>(std::floor(std::pow(x, s)));
    if (m < 1) m = 1;
    const double inv_s = 1.0 / s;
    while (std::pow(static_cast<double>(m + 1), inv_s) <= x) ++m;
    while (m > 1 && std::pow(static_cast<double>(m), inv_s) > x) --m;
    return m;
}

double counterexample_transform(double s, double z) {
    const double lo = std::pow(static_cast<double>(counterexample_block(s, z)), 1.0 / s);
    return lo + 0.5 * (z - lo);
}

double counterexample_cdf(double alpha, double s, double x) {
    if (x <= 1.0) return 0.0;
    const std::size_t m = counterexample_block(s, x);
    const double lo = std::pow(static_cast<double>(m), 1.0 / s);
    const double hi = std::pow(static_cast<double>(m + 1), 1.0 / s);
    const double mid = 0.5 * (lo + hi);
    // On the upper half-block (lo + hi)/2 < x < hi there is no mass, so the
    // distribution function is flat at its value F(hi).
    const double z = x <= mid ? lo + 2.0 * (x - lo) : hi;
    return 1.0 - std::pow(z, -alpha);
}

double perturb_x0(double alpha, double beta) { return std::exp(beta / alpha); }

double perturb_survival(double alpha, double beta, double x) {
    const double x0 = perturb_x0(alpha, beta);
    if (x < x0 * (1.0 - 1e-15)) {
        throw InvalidArgument(fmt::format("perturb_survival: x={} below x0={}", x, x0));
    }
    if (x <= x0) return 1.0;
    const double c = std::pow(std::numbers::e * alpha / beta, beta);
    return std::min(1.0, c * std::pow(x, -alpha) * std::pow(std::log(x), beta));
}

}  // namespace eav::dist
