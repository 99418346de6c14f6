#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eav/rng.hpp"

namespace eav::dist {

/// Survival t^{-alpha} on [1, inf).
struct Pareto {
    double alpha;
};

/// X = floor(Z^s)^{1/s} + (Z - floor(Z^s)^{1/s}) / 2 with Z ~ Pareto(alpha):
/// regularly varying, but the density vanishes on the upper half of every
/// block [m^{1/s}, (m+1)^{1/s}).
struct CounterExample {
    double alpha;
    double s;
};

/// Symmetric alpha-stable law with characteristic function exp(-|t|^alpha).
struct SymmetricStable {
    double alpha;
};

/// Survival c x^{-alpha} (log x)^beta on [x0, inf), c = (e alpha / beta)^beta,
/// x0 = exp(beta / alpha).
struct Perturb {
    double alpha;
    double beta;
};

/// Distribution function exp(-(x - shift)^{-1/gamma}) for x > shift.
struct Frechet {
    double gamma;
    double shift;
};

/// Pareto change point: survival x^{-1/gamma'} on [1, tau] and
/// tau^{-1/gamma'} (x / tau)^{-1/gamma} above, with tau^{-1/gamma'} = tail_prob.
struct Pcp {
    double gamma_prime;
    double gamma;
    double tail_prob;
};

using DistributionSpec =
    std::variant<Pareto, CounterExample, SymmetricStable, Perturb, Frechet, Pcp>;

/// Throws InvalidArgument on out-of-range parameters.
void validate(const DistributionSpec& spec);

/// Parses `pareto:2`, `counter:2:0.5`, `stable:1.5`, `perturb:2:1`,
/// `frechet:1:10`, `pcp:1:1.1:0.04`.
DistributionSpec parse(std::string_view text);

/// Inverse of `parse`, e.g. "pcp:1:1.1:0.04".
std::string describe(const DistributionSpec& spec);

/// Tail index gamma of the family.
double true_gamma(const DistributionSpec& spec);

/// Quantile function F^{-1}(u), 0 < u < 1. SymmetricStable has no closed
/// form and throws InvalidArgument.
double quantile(const DistributionSpec& spec, double u);

/// Distribution function, for every family but SymmetricStable.
double cdf(const DistributionSpec& spec, double x);

/// n independent draws.
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, Rng& rng);

/// Draws fed to the Monte-Carlo harness: `sample`, except that the
/// symmetric stable family is folded to |X|. |X| has the tail index of X
/// and keeps all n points usable by the Hill estimator.
std::vector<double> experiment_sample(const DistributionSpec& spec, std::size_t n, Rng& rng);

/// tau = tail_prob^{-gamma'}.
double pcp_tau(double gamma_prime, double tail_prob);

/// Distribution function of the CounterExample law, x >= 1.
double counterexample_cdf(double alpha, double s, double x);

/// The CounterExample transform of a Pareto draw z >= 1.
double counterexample_transform(double s, double z);

/// Largest integer m with m^{1/s} <= x (x >= 1), robust to rounding at block
/// boundaries.
std::size_t counterexample_block(double s, double x);

/// c x^{-alpha} (log x)^beta for x >= x0.
double perturb_survival(double alpha, double beta, double x);

/// exp(beta / alpha), the left endpoint of the Perturb support.
double perturb_x0(double alpha, double beta);

}  // namespace eav::dist
