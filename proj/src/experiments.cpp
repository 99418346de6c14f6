#include "eav/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>

#include "eav/eav.hpp"
#include "eav/errors.hpp"
#include "eav/hill.hpp"

namespace eav {

namespace {

unsigned resolve_jobs(unsigned jobs, std::size_t tasks) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, count) on `jobs` threads with a static stride
// partition. Exceptions are captured per task; the lowest failing index is
// rethrown so that the reported failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&](unsigned offset, unsigned stride) {
        for (std::size_t i = offset; i < count; i += stride) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = resolve_jobs(jobs, count);
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    dist::validate(spec);
    if (n < 3) throw InvalidArgument("experiment: n must be >= 3");
    if (replications < 2) throw InvalidArgument("experiment: replications must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("experiment: delta must lie in (0, 1)");
}

std::uint64_t replication_seed(std::uint64_t root_seed, std::size_t index) {
    return derive_seed(root_seed, index, stream_tag::replication);
}

McSummary summarize(std::vector<ReplicationResult> replications, double gamma_true) {
    if (replications.empty()) throw InvalidArgument("summarize: no replications");
    std::sort(replications.begin(), replications.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    const auto count = static_cast<double>(replications.size());

    McSummary s;
    s.gamma_true = gamma_true;
    double sum_sq = 0.0;
    double sum_k = 0.0;
    s.k_min = replications.front().k_hat;
    s.k_max = replications.front().k_hat;
    for (const auto& r : replications) {
        const double d = r.gamma_hat / gamma_true - 1.0;
        sum_sq += d * d;
        sum_k += static_cast<double>(r.k_hat);
        s.k_min = std::min(s.k_min, r.k_hat);
        s.k_max = std::max(s.k_max, r.k_hat);
    }
    s.mse_hat = sum_sq / count;
    s.k_mean = sum_k / count;
    double spread = 0.0;
    for (const auto& r : replications) {
        const double d = r.gamma_hat / gamma_true - 1.0;
        const double centered = d * d - s.mse_hat;
        spread += centered * centered;
    }
    s.stderr_hat = std::sqrt(spread) / count;
    s.per_replication = std::move(replications);
    return s;
}

McSummary run_experiment_with(const ExperimentConfig& cfg, const Estimator& estimator) {
    cfg.validate();
    std::vector<ReplicationResult> rows(cfg.replications);
    parallel_for(cfg.replications, cfg.jobs, [&](std::size_t i) {
        const std::uint64_t seed = replication_seed(cfg.root_seed, i);
        try {
            Rng rng(seed);
            const std::vector<double> data = dist::experiment_sample(cfg.spec, cfg.n, rng);
            const OrderedSample ordered = OrderedSample::from_raw(data);
            const auto [k, gamma] = estimator(ordered, i);
            rows[i] = ReplicationResult{i, seed, k, gamma};
        } catch (const std::exception& e) {
            throw ReplicationError(i, e.what());
        }
    });
    return summarize(std::move(rows), dist::true_gamma(cfg.spec));
}

McSummary run_mse_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    EavConfig eav_cfg;
    eav_cfg.delta = cfg.delta;
    eav_cfg.grid = cfg.grid.resolve(cfg.n);
    eav_cfg.mode = cfg.mode;
    eav_cfg.restrict_to_admissible = cfg.restrict_to_admissible;

    if (std::holds_alternative<ExactQuantile>(cfg.mode)) {
        const DeviationTable table = build_deviation_table(eav_cfg.grid, eav_cfg.delta, eav_cfg.mode);
        return run_experiment_with(cfg, [&](const OrderedSample& sample, std::size_t) {
            const EavResult r = select_k_eav(sample, eav_cfg, table);
            return std::pair{r.k_hat, r.gamma_hat};
        });
    }
    // Sampled quantiles: every replication draws its own table, so the
    // table noise is averaged over and shows up in the standard error.
    const auto mc = std::get<MonteCarloQuantile>(cfg.mode);
    return run_experiment_with(cfg, [&](const OrderedSample& sample, std::size_t index) {
        const QuantileMode mode =
            MonteCarloQuantile{mc.draws, derive_seed(mc.seed, index, stream_tag::deviation)};
        const DeviationTable table = build_deviation_table(eav_cfg.grid, eav_cfg.delta, mode);
        const EavResult r = select_k_eav(sample, eav_cfg, table);
        return std::pair{r.k_hat, r.gamma_hat};
    });
}

KRange k_range_summary(const ExperimentConfig& cfg) {
    const McSummary s = run_mse_experiment(cfg);
    return {s.k_min, s.k_max, s.k_mean};
}

std::vector<RmsePoint> rmse_curve(const dist::DistributionSpec& spec, std::size_t n,
                                  std::size_t replications, const GridSpec& grid_spec,
                                  std::uint64_t root_seed, unsigned jobs) {
    dist::validate(spec);
    if (n < 3) throw InvalidArgument("rmse_curve: n must be >= 3");
    if (replications < 2) throw InvalidArgument("rmse_curve: replications must be >= 2");
    const Grid grid = grid_spec.resolve(n);
    const double gamma = dist::true_gamma(spec);
    const std::size_t points = grid.size();

    // Squared standardised errors per replication and grid index; NaN marks
    // a grid point beyond n - 1 for that replication.
    std::vector<std::vector<double>> sq(replications);
    parallel_for(replications, jobs, [&](std::size_t i) {
        try {
            Rng rng(replication_seed(root_seed, i));
            const OrderedSample ordered = OrderedSample::from_raw(dist::experiment_sample(spec, n, rng));
            std::vector<double> row(points, std::nan(""));
            for (std::size_t g = 0; g < points; ++g) {
                const std::size_t k = grid.points()[g];
                if (k > ordered.size() - 1) break;
                const double d = hill_estimate(ordered, k) / gamma - 1.0;
                row[g] = d * d;
            }
            sq[i] = std::move(row);
        } catch (const std::exception& e) {
            throw ReplicationError(i, e.what());
        }
    });

    std::vector<RmsePoint> curve;
    const auto count = static_cast<double>(replications);
    for (std::size_t g = 0; g < points; ++g) {
        double sum = 0.0;
        bool complete = true;
        for (const auto& row : sq) {
            if (std::isnan(row[g])) {
                complete = false;
                break;
            }
            sum += row[g];
        }
        if (!complete) continue;
        const double mse = sum / count;
        double spread = 0.0;
        for (const auto& row : sq) spread += (row[g] - mse) * (row[g] - mse);
        curve.push_back({grid.points()[g], std::sqrt(mse), std::sqrt(spread) / count});
    }
    return curve;
}

void write_mse_header(std::ostream& out) {
    out << "distribution,gamma,n,N,delta,grid,mode,mse_x100,stderr_x100,k_min,k_max,k_mean\n";
}

void write_mse_row(std::ostream& out, const ExperimentConfig& cfg, const McSummary& s) {
    out << fmt::format("{},{:.17g},{},{},{:.17g},{},{},{:.17g},{:.17g},{},{},{:.17g}\n",
                       dist::describe(cfg.spec), s.gamma_true, cfg.n, cfg.replications, cfg.delta,
                       cfg.grid.describe(), describe(cfg.mode), 100.0 * s.mse_hat,
                       100.0 * s.stderr_hat, s.k_min, s.k_max, s.k_mean);
}

nlohmann::json to_json(const ExperimentConfig& cfg, const McSummary& s) {
    return {{"distribution", dist::describe(cfg.spec)},
            {"gamma", s.gamma_true},
            {"n", cfg.n},
            {"N", cfg.replications},
            {"delta", cfg.delta},
            {"grid", cfg.grid.describe()},
            {"mode", describe(cfg.mode)},
            {"root_seed", cfg.root_seed},
            {"mse_x100", 100.0 * s.mse_hat},
            {"stderr_x100", 100.0 * s.stderr_hat},
            {"k_min", s.k_min},
            {"k_max", s.k_max},
            {"k_mean", s.k_mean}};
}

void write_rmse_csv(std::ostream& out, const std::vector<RmsePoint>& curve) {
    out << "k,rmse\n";
    for (const auto& p : curve) out << fmt::format("{},{:.17g}\n", p.k, p.rmse);
}

}  // namespace eav
