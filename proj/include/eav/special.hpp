#pragma once

namespace eav::special {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction otherwise. The common
/// prefactor x^a e^{-x} / Gamma(a) is evaluated in saddle-point form so
/// that large shapes (a ~ 1e6 and beyond) keep ~1e-12 relative accuracy.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// log(1 + x) - x, accurate for small |x|.
double log1pmx(double x);

/// Stirling series remainder: lgamma(a) - [(a - 1/2) log a - a + log(2 pi)/2].
double stirling_error(double a);

}  // namespace eav::special
