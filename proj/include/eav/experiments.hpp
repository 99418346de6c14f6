#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eav/deviation.hpp"
#include "eav/distributions.hpp"
#include "eav/grid.hpp"

namespace eav {

class OrderedSample;

struct ExperimentConfig {
    dist::DistributionSpec spec = dist::Pareto{2.0};
    std::size_t n = 10000;
    std::size_t replications = 500;
    double delta = 0.9;
    GridSpec grid;
    QuantileMode mode = MonteCarloQuantile{2000, 0};
    std::uint64_t root_seed = 0;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned jobs = 1;
    bool restrict_to_admissible = false;

    void validate() const;
};

struct ReplicationResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t k_hat = 0;
    double gamma_hat = 0.0;
};

struct McSummary {
    double mse_hat = 0.0;
    double stderr_hat = 0.0;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    double k_mean = 0.0;
    double gamma_true = 0.0;
    std::vector<ReplicationResult> per_replication;
};

/// Seed of replication `index`.
std::uint64_t replication_seed(std::uint64_t root_seed, std::size_t index);

/// MSE = N^{-1} sum d_i^2 and stderr = N^{-1} (sum (d_i^2 - MSE)^2)^{1/2},
/// d_i = gamma_hat_i / gamma - 1, plus k statistics. Rows are sorted by index.
McSummary summarize(std::vector<ReplicationResult> replications, double gamma_true);

/// Per replication: draw n points, run the EAV rule, record (k_hat, gamma_hat).
/// Exact mode shares one deviation table; MonteCarlo mode draws a table per
/// replication i with seed derive_seed(mode seed, i, deviation tag). A
/// failing replication aborts the run with a ReplicationError.
McSummary run_mse_experiment(const ExperimentConfig& cfg);

/// Same replication loop with a caller-supplied estimator mapping
/// (sample, replication index) to (k, gamma_hat).
using Estimator =
    std::function<std::pair<std::size_t, double>(const OrderedSample&, std::size_t)>;
McSummary run_experiment_with(const ExperimentConfig& cfg, const Estimator& estimator);

struct KRange {
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    double k_mean = 0.0;
};

KRange k_range_summary(const ExperimentConfig& cfg);

struct RmsePoint {
    std::size_t k = 0;
    double rmse = 0.0;
    /// Monte-Carlo standard error of the MSE at k.
    double mse_stderr = 0.0;
};

/// Standardised RMSE(k) = sqrt(E[(gamma_hat(k)/gamma - 1)^2]) at every grid
/// point k <= n - 1 available in all replications. Replication samples are
/// the ones run_mse_experiment would draw for the same root seed.
std::vector<RmsePoint> rmse_curve(const dist::DistributionSpec& spec, std::size_t n,
                                  std::size_t replications, const GridSpec& grid,
                                  std::uint64_t root_seed, unsigned jobs = 1);

/// `distribution,gamma,n,N,delta,grid,mode,mse_x100,stderr_x100,k_min,k_max,k_mean`
void write_mse_header(std::ostream& out);
void write_mse_row(std::ostream& out, const ExperimentConfig& cfg, const McSummary& summary);
nlohmann::json to_json(const ExperimentConfig& cfg, const McSummary& summary);

/// `k,rmse`
void write_rmse_csv(std::ostream& out, const std::vector<RmsePoint>& curve);

}  // namespace eav
