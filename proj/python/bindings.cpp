#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "eav/bounds.hpp"
#include "eav/deviation.hpp"
#include "eav/distributions.hpp"
#include "eav/eav.hpp"
#include "eav/errors.hpp"
#include "eav/experiments.hpp"
#include "eav/grid.hpp"
#include "eav/hill.hpp"

namespace py = pybind11;
using namespace eav;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& data) {
    if (data.ndim() != 1) throw InvalidArgument("data must be one-dimensional");
    return {data.data(), data.data() + data.size()};
}

py::dict decision_dict(const StopDecision& d) {
    py::dict out;
    out["k"] = d.k;
    out["stop"] = d.stop;
    out["margin"] = d.margin;
    out["violating_j"] = d.violating_j ? py::cast(*d.violating_j) : py::none();
    return out;
}

py::dict estimate_py(const py::array_t<double, py::array::c_style | py::array::forcecast>& data, double delta,
                     const std::string& grid, const std::string& mode, std::uint64_t seed, bool restrict_j,
                     bool trace) {
    const std::vector<double> raw = to_vector(data);
    const OrderedSample sample = order_sample(raw);
    EavConfig cfg;
    cfg.delta = delta;
    cfg.grid = GridSpec::parse(grid).resolve(sample.raw_size());
    cfg.mode = parse_quantile_mode(mode, seed);
    cfg.restrict_to_admissible = restrict_j;
    EavResult r;
    {
        py::gil_scoped_release release;
        r = select_k_eav(sample, cfg);
    }
    py::dict out;
    out["k_hat"] = r.k_hat;
    out["gamma_hat"] = r.gamma_hat;
    out["k0"] = r.k0;
    out["delta"] = r.delta;
    out["delta_grid"] = r.delta_grid;
    out["grid"] = cfg.grid.describe();
    out["mode"] = describe(cfg.mode);
    out["hit_grid_max"] = r.hit_grid_max;
    out["n"] = sample.raw_size();
    out["n_positive"] = sample.size();
    if (trace) {
        py::list rows;
        for (const auto& d : r.trace) rows.append(decision_dict(d));
        out["trace"] = rows;
    }
    return out;
}

py::dict simulate_py(const std::string& dist, std::size_t n, std::size_t reps, double delta, const std::string& grid,
                     const std::string& mode, std::uint64_t seed, unsigned jobs, bool restrict_j) {
    ExperimentConfig cfg;
    cfg.spec = dist::parse(dist);
    cfg.n = n;
    cfg.replications = reps;
    cfg.delta = delta;
    cfg.grid = GridSpec::parse(grid);
    cfg.mode = parse_quantile_mode(mode, seed);
    cfg.root_seed = seed;
    cfg.jobs = jobs;
    cfg.restrict_to_admissible = restrict_j;
    McSummary s;
    {
        py::gil_scoped_release release;
        s = run_mse_experiment(cfg);
    }
    py::dict out;
    out["distribution"] = dist::describe(cfg.spec);
    out["gamma"] = s.gamma_true;
    out["n"] = n;
    out["N"] = reps;
    out["mse"] = s.mse_hat;
    out["stderr"] = s.stderr_hat;
    out["k_min"] = s.k_min;
    out["k_max"] = s.k_max;
    out["k_mean"] = s.k_mean;
    std::vector<std::size_t> ks;
    std::vector<double> gammas;
    for (const auto& r : s.per_replication) {
        ks.push_back(r.k_hat);
        gammas.push_back(r.gamma_hat);
    }
    out["k_hat"] = ks;
    out["gamma_hat"] = gammas;
    return out;
}

bounds::SecondOrderParams make_params(double gamma, double rho, double C, double c1, double c2, double beta) {
    bounds::SecondOrderParams p{gamma, rho, C, c1, c2, beta};
    p.validate();
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive choice of the number of order statistics for the Hill estimator";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NoAdmissibleCandidate>(m, "NoAdmissibleCandidate", PyExc_RuntimeError);
    py::register_exception<ReplicationError>(m, "ReplicationError", PyExc_RuntimeError);

    m.attr("DEFAULT_SEED") = kDefaultSeed;

    m.def("estimate", &estimate_py, py::arg("data"), py::arg("delta") = 0.9, py::arg("grid") = "geometric:1.1",
          py::arg("mode") = "mc", py::arg("seed") = kDefaultSeed, py::arg("restrict_j") = false,
          py::arg("trace") = false,
          "Select k with the adaptive validation rule and return the Hill estimate with diagnostics.");

    m.def(
        "hill",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t k) {
            return hill_estimate(order_sample(to_vector(data)), k);
        },
        py::arg("data"), py::arg("k"), "Hill estimate from the k largest observations.");

    m.def(
        "hill_sweep",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, const std::string& grid) {
            const std::vector<double> raw = to_vector(data);
            const OrderedSample sample = order_sample(raw);
            return hill_sweep(sample, GridSpec::parse(grid).resolve(sample.raw_size())).entries;
        },
        py::arg("data"), py::arg("grid") = "geometric:1.1", "List of (k, gamma_hat(k)) over the grid.");

    m.def(
        "grid", [](const std::string& spec, std::size_t n) { return GridSpec::parse(spec).resolve(n).points(); },
        py::arg("spec"), py::arg("n"), "Grid points for a sample of size n.");

    m.def("abs_gamma_cdf", &abs_gamma_cdf, py::arg("k"), py::arg("y"));
    m.def("exact_quantile", &exact_quantile, py::arg("k"), py::arg("delta"));
    m.def("mc_quantile", &mc_quantile, py::arg("k"), py::arg("delta"), py::arg("draws") = 2000,
          py::arg("seed") = kDefaultSeed);
    m.def("v_tilde", &v_tilde, py::arg("k"), py::arg("delta"));
    m.def("r_bound", &r_bound, py::arg("k"), py::arg("delta"));

    m.def(
        "sample",
        [](const std::string& dist, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            const std::vector<double> xs = dist::sample(dist::parse(dist), n, rng);
            py::array_t<double> out(static_cast<py::ssize_t>(xs.size()));
            std::copy(xs.begin(), xs.end(), out.mutable_data());
            return out;
        },
        py::arg("dist"), py::arg("n"), py::arg("seed") = kDefaultSeed, "Draw n values, e.g. sample('pareto:2', 100).");
    m.def(
        "true_gamma", [](const std::string& dist) { return dist::true_gamma(dist::parse(dist)); }, py::arg("dist"));

    m.def("simulate", &simulate_py, py::arg("dist"), py::arg("n") = 10000, py::arg("reps") = 500,
          py::arg("delta") = 0.9, py::arg("grid") = "geometric:1.1", py::arg("mode") = "mc",
          py::arg("seed") = kDefaultSeed, py::arg("jobs") = 0, py::arg("restrict_j") = false,
          "Monte-Carlo MSE of the adaptive estimate of gamma_hat / gamma - 1.");

    m.def(
        "rmse_curve",
        [](const std::string& dist, std::size_t n, std::size_t reps, const std::string& grid, std::uint64_t seed,
           unsigned jobs) {
            std::vector<RmsePoint> curve;
            {
                py::gil_scoped_release release;
                curve = rmse_curve(dist::parse(dist), n, reps, GridSpec::parse(grid), seed, jobs);
            }
            std::vector<std::pair<std::size_t, double>> out;
            for (const auto& p : curve) out.emplace_back(p.k, p.rmse);
            return out;
        },
        py::arg("dist"), py::arg("n") = 10000, py::arg("reps") = 500, py::arg("grid") = "geometric:1.1",
        py::arg("seed") = kDefaultSeed, py::arg("jobs") = 0, "List of (k, RMSE) of the Hill estimate per grid point.");

    m.def(
        "bounds",
        [](double gamma, double rho, double C, double delta, std::size_t n, const std::string& grid, double c1,
           double c2, double beta) {
            const auto p = make_params(gamma, rho, C, c1, c2, beta);
            const Grid g = GridSpec::parse(grid).resolve(n);
            const std::size_t size = g.nominal_size();
            const double delta_grid = g.delta_grid(delta);
            py::dict out;
            out["grid_nominal_size"] = size;
            out["delta_grid"] = delta_grid;
            out["C1"] = bounds::c1_constant(delta, p);
            out["C2"] = bounds::c2_of(p);
            out["k0_upper"] = k0_upper_bound(size, delta);
            out["oracle_bound"] = bounds::oracle_error_bound(delta, n, p);
            out["v_star_upper"] = bounds::v_star_upper_bound(delta, size, n, p);
            if (delta_grid <= c2 * c2 / 4.0) {
                out["kstar_lower"] = bounds::kstar_lower_bound(delta_grid, n, p).value;
                out["n0_upper"] = bounds::n0_upper_bound(delta, size, p);
            } else {
                out["kstar_lower"] = py::none();
                out["n0_upper"] = py::none();
            }
            return out;
        },
        py::arg("gamma") = 1.0, py::arg("rho") = -1.0, py::arg("C") = 1.0, py::arg("delta") = 0.9,
        py::arg("n") = 10000, py::arg("grid") = "geometric:1.1", py::arg("c1") = 1.0, py::arg("c2") = 2.0,
        py::arg("beta") = 1.1,
        "Second-order diagnostic bounds. c1 and c2 are user-supplied constants, not universal values.");

    m.def("adaptive_error_bound", &bounds::adaptive_error_bound, py::arg("gamma"), py::arg("v_star"));
}
