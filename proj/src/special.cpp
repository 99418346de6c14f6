#include "eav/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eav/errors.hpp"

namespace eav::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

int max_iterations(double a) { return 10000 + static_cast<int>(40.0 * std::sqrt(a)); }

// log of x^a e^{-x} / Gamma(a)
double log_prefactor(double a, double x) {
    const double d = (x - a) / a;
    return a * log1pmx(d) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) - stirling_error(a);
}

double lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    const int limit = max_iterations(a);
    for (int n = 1; n < limit; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    const int limit = max_iterations(a);
    for (int i = 1; i < limit; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(log_prefactor(a, x));
}

void check_domain(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw InvalidArgument("incomplete gamma requires a > 0 and x >= 0");
    }
}

}  // namespace

double log1pmx(double x) {
    if (std::abs(x) < 0.25) {
        // -x^2/2 + x^3/3 - ...
        double power = x * x;
        double sum = 0.0;
        for (int n = 2; n < 200; ++n) {
            const double term = power / n;
            sum += (n % 2 == 0) ? -term : term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
            power *= x;
        }
        return sum;
    }
    return std::log1p(x) - x;
}

double stirling_error(double a) {
    if (a >= 10.0) {
        const double inv = 1.0 / a;
        const double inv2 = inv * inv;
        return inv * (1.0 / 12.0 -
                      inv2 * (1.0 / 360.0 -
                              inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    }
    return std::lgamma(a) - ((a - 0.5) * std::log(a) - a + 0.5 * std::log(2.0 * std::numbers::pi));
}

double gamma_p(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_fraction(a, x);
}

}  // namespace eav::special
