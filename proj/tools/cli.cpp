#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "eav/bounds.hpp"
#include "eav/distributions.hpp"
#include "eav/eav.hpp"
#include "eav/errors.hpp"
#include "eav/experiments.hpp"

namespace eav::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240917;

/// Raised for unreadable or malformed input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> read_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open '{}'", path));
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front()))) view.remove_prefix(1);
        while (!view.empty() && std::isspace(static_cast<unsigned char>(view.back()))) view.remove_suffix(1);
        if (view.empty() || view.front() == '#') continue;
        if (view.front() == '+') view.remove_prefix(1);
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), x);
        if (ec != std::errc{} || ptr != view.data() + view.size()) {
            throw InputError(fmt::format("{}:{}: not a decimal number: '{}'", path, line_no, line));
        }
        values.push_back(x);
    }
    if (values.empty()) throw InputError(fmt::format("'{}' contains no observations", path));
    return values;
}

void echo_config(const json& config, const std::string& format, std::ostream& out,
                 std::ostream& err) {
    // JSON output embeds the configuration; other formats keep stdout clean.
    if (format == "text") {
        out << "config: " << config.dump() << '\n';
    } else if (format != "json") {
        err << "# config: " << config.dump() << '\n';
    }
}

void add_format(CLI::App* cmd, std::string& format, std::vector<std::string> choices) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(std::move(choices)))
        ->capture_default_str();
}

struct EstimateArgs {
    std::string path;
    double delta = 0.9;
    std::string grid = "geometric:1.1";
    std::string mode = "mc";
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
    bool trace = false;
    bool restrict_j = false;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    const std::vector<double> raw = read_observations(a.path);
    const OrderedSample sample = OrderedSample::from_raw(raw);
    if (sample.dropped() > 0) {
        err << fmt::format("warning: dropped {} non-positive observation(s)\n", sample.dropped());
    }
    EavConfig cfg;
    cfg.delta = a.delta;
    cfg.grid = GridSpec::parse(a.grid).resolve(sample.raw_size());
    cfg.mode = parse_quantile_mode(a.mode, a.seed);
    cfg.restrict_to_admissible = a.restrict_j;
    cfg.validate();

    const json config = {{"command", "estimate"},   {"data", a.path},
                         {"delta", a.delta},        {"grid", a.grid},
                         {"mode", describe(cfg.mode)}, {"seed", a.seed},
                         {"restrict_j", a.restrict_j}, {"n", sample.raw_size()}};
    echo_config(config, a.format, out, err);

    const Estimate est = estimate(sample, cfg);
    const EavResult& r = est.result;
    if (a.format == "json") {
        json doc = to_json(r, cfg);
        if (!a.trace) doc.erase("trace");
        doc["n"] = sample.raw_size();
        doc["n_positive"] = sample.size();
        doc["table_monotone"] = est.table.monotone();
        doc["config"] = config;
        out << doc.dump(2) << '\n';
    } else if (a.format == "csv") {
        out << "k_hat,gamma_hat,k0,delta,delta_grid,grid,mode,hit_grid_max\n";
        out << fmt::format("{},{:.17g},{},{:.17g},{:.17g},{},{},{}\n", r.k_hat, r.gamma_hat, r.k0,
                           r.delta, r.delta_grid, cfg.grid.describe(), describe(cfg.mode),
                           r.hit_grid_max ? 1 : 0);
    } else {
        out << fmt::format("k_hat        {}\n", r.k_hat);
        out << fmt::format("gamma_hat    {:.17g}\n", r.gamma_hat);
        out << fmt::format("k0           {}\n", r.k0);
        out << fmt::format("delta        {:.17g}\n", r.delta);
        out << fmt::format("delta_grid   {:.17g}\n", r.delta_grid);
        out << fmt::format("grid         {} (|K| = {})\n", cfg.grid.describe(), cfg.grid.nominal_size());
        out << fmt::format("hit_grid_max {}\n", r.hit_grid_max);
        if (a.trace) {
            out << "k,S,margin,violating_j\n";
            for (const auto& d : r.trace) {
                out << fmt::format("{},{},{:.17g},{}\n", d.k, d.stop ? 1 : 0, d.margin,
                                   d.violating_j ? std::to_string(*d.violating_j) : "");
            }
        }
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string dist;
    std::size_t n = 10000;
    std::size_t reps = 500;
    double delta = 0.9;
    std::string grid = "geometric:1.1";
    std::string mode = "mc";
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 1;
    std::string format = "csv";
    bool restrict_j = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    cfg.spec = dist::parse(a.dist);
    cfg.n = a.n;
    cfg.replications = a.reps;
    cfg.delta = a.delta;
    cfg.grid = GridSpec::parse(a.grid);
    cfg.mode = parse_quantile_mode(a.mode, a.seed);
    cfg.root_seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.restrict_to_admissible = a.restrict_j;
    cfg.validate();

    const json config = {{"command", "simulate"}, {"dist", dist::describe(cfg.spec)},
                         {"n", a.n},              {"reps", a.reps},
                         {"delta", a.delta},      {"grid", a.grid},
                         {"mode", describe(cfg.mode)}, {"seed", a.seed},
                         {"restrict_j", a.restrict_j}};
    echo_config(config, a.format, out, err);

    const McSummary s = run_mse_experiment(cfg);
    if (a.format == "json") {
        json doc = to_json(cfg, s);
        doc["config"] = config;
        out << doc.dump(2) << '\n';
    } else if (a.format == "csv") {
        write_mse_header(out);
        write_mse_row(out, cfg, s);
    } else {
        out << fmt::format("{:<14} gamma={:.6g}  MSE x100 = {:.2f} ({:.2f})  k in [{}, {}], mean {:.0f}\n",
                           dist::describe(cfg.spec), s.gamma_true, 100.0 * s.mse_hat,
                           100.0 * s.stderr_hat, s.k_min, s.k_max, s.k_mean);
    }
    return kExitOk;
}

struct SweepArgs {
    std::string dist;
    std::size_t n = 10000;
    std::size_t reps = 500;
    std::string grid = "geometric:1.1";
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const auto spec = dist::parse(a.dist);
    const GridSpec grid = GridSpec::parse(a.grid);
    const json config = {{"command", "sweep"}, {"dist", dist::describe(spec)},
                         {"n", a.n},           {"reps", a.reps},
                         {"grid", a.grid},     {"seed", a.seed}};
    echo_config(config, "csv", out, err);
    write_rmse_csv(out, rmse_curve(spec, a.n, a.reps, grid, a.seed, a.jobs));
    return kExitOk;
}

struct BoundsArgs {
    double gamma = 1.0;
    double rho = -1.0;
    double C = 1.0;
    double beta = 1.1;
    double delta = 0.9;
    std::size_t n = 10000;
    std::string grid = "geometric:1.1";
    double c1 = 1.0;
    double c2 = 2.0;
    std::string format = "json";
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
    bounds::SecondOrderParams p{a.gamma, a.rho, a.C, a.c1, a.c2, a.beta};
    p.validate();
    if (!(a.delta > 0.0 && a.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const Grid grid = GridSpec::parse(a.grid).resolve(a.n);
    const std::size_t size = grid.nominal_size();
    const double delta_grid = grid.delta_grid(a.delta);

    const json config = {{"command", "bounds"}, {"gamma", a.gamma}, {"rho", a.rho},
                         {"C", a.C},            {"beta", a.beta},   {"delta", a.delta},
                         {"n", a.n},            {"grid", a.grid},   {"c1", a.c1},
                         {"c2", a.c2}};

    // Each quantity is reported independently; a failed precondition turns
    // into an "n/a: <reason>" entry instead of aborting the table.
    std::vector<std::pair<std::string, json>> fields;
    auto field = [&](std::string name, auto&& compute) {
        try {
            fields.emplace_back(std::move(name), json(compute()));
        } catch (const InvalidArgument& e) {
            fields.emplace_back(std::move(name), json(fmt::format("n/a: {}", e.what())));
        }
    };
    const bool delta_ok = delta_grid <= a.c2 * a.c2 / 4.0;
    field("grid_nominal_size", [&] { return size; });
    field("delta_grid", [&] { return delta_grid; });
    field("C1", [&] { return bounds::c1_constant(a.delta, p); });
    field("C1_upper", [&] { return bounds::c1_constant_upper(a.delta, p); });
    field("C2", [&] { return bounds::c2_of(p); });
    field("k0_upper", [&] { return k0_upper_bound(size, a.delta); });
    field("kstar_lower", [&]() -> json {
        if (!delta_ok) return "n/a: delta out of range";
        const auto b = bounds::kstar_lower_bound(delta_grid, a.n, p);
        return {{"value", b.value}, {"vacuous", b.vacuous}, {"exceeds_half_n", b.exceeds_half_n}};
    });
    field("n0_upper", [&]() -> json {
        if (!delta_ok) return "n/a: delta out of range";
        return bounds::n0_upper_bound(a.delta, size, p);
    });
    field("oracle_bound", [&] { return bounds::oracle_error_bound(a.delta, a.n, p); });
    field("v_star_upper", [&] { return bounds::v_star_upper_bound(a.delta, size, a.n, p); });
    field("adaptive_bound", [&] {
        return bounds::adaptive_error_bound(a.gamma, bounds::v_star_upper_bound(a.delta, size, a.n, p));
    });
    field("kstar_envelope", [&] { return bounds::kstar_under_envelope(grid, a.n, delta_grid, p); });
    field("grid_conditions", [&]() -> json {
        const auto c = bounds::check_grid_conditions(grid, a.n, delta_grid, p);
        return {{"wide", c.wide}, {"fine", c.fine}, {"beta_observed", c.beta_observed}};
    });

    const bool placeholder = p.default_constants();
    const std::string warning =
        "warning: c1, c2 are non-universal constants supplied by the user (defaults c1=1, c2=2)";
    if (placeholder) err << warning << '\n';

    if (a.format == "json") {
        json doc = json::object();
        for (const auto& [name, value] : fields) doc[name] = value;
        doc["constants"] = {{"c1", a.c1}, {"c2", a.c2}, {"non_universal", true}};
        if (placeholder) doc["warning"] = warning;
        doc["config"] = config;
        out << doc.dump(2) << '\n';
    } else {
        out << "config: " << config.dump() << '\n';
        out << fmt::format("{:<20}{}\n", "c1", a.c1) << fmt::format("{:<20}{}\n", "c2", a.c2);
        for (const auto& [name, value] : fields) {
            out << fmt::format("{:<20}{}\n", name, value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return kExitOk;
}

struct SampleArgs {
    std::string dist;
    std::size_t n = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::string out_path = "-";
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    const auto spec = dist::parse(a.dist);
    const json config = {{"command", "sample"}, {"dist", dist::describe(spec)},
                         {"n", a.n},            {"seed", a.seed},
                         {"out", a.out_path}};
    err << "# config: " << config.dump() << '\n';
    Rng rng(a.seed);
    const std::vector<double> values = dist::sample(spec, a.n, rng);
    std::ostringstream buffer;
    for (double x : values) buffer << fmt::format("{:.17g}\n", x);
    if (a.out_path == "-") {
        out << buffer.str();
    } else {
        std::ofstream file(a.out_path, std::ios::binary);
        if (!file) throw InputError(fmt::format("cannot write '{}'", a.out_path));
        file << buffer.str();
        if (!file) throw InputError(fmt::format("failed writing '{}'", a.out_path));
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive selection of the number of order statistics for Hill estimation"};
    app.name(args.empty() ? "eav" : args.front());
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Select k and estimate the tail index of a data file");
    estimate_cmd->add_option("data", est.path, "Newline-delimited observations")->required();
    estimate_cmd->add_option("--delta", est.delta, "Confidence parameter in (0,1)")->capture_default_str();
    estimate_cmd->add_option("--grid", est.grid, "geometric:<beta> | linear:<M> | explicit:<k,...>")->capture_default_str();
    estimate_cmd->add_option("--mode", est.mode, "Quantile mode: exact | mc | mc:<draws>")->capture_default_str();
    estimate_cmd->add_option("--seed", est.seed, "Seed for Monte-Carlo quantiles")->capture_default_str();
    estimate_cmd->add_flag("--trace", est.trace, "Include the per-k stopping trace");
    estimate_cmd->add_flag("--restrict-j", est.restrict_j, "Compare only against j >= k0");
    add_format(estimate_cmd, est.format, {"json", "csv", "text"});

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo MSE of the adaptive Hill estimator");
    simulate_cmd->add_option("--dist", sim.dist, "Distribution, e.g. pareto:2, pcp:1:1.1:0.04")->required();
    simulate_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
    simulate_cmd->add_option("--reps", sim.reps, "Replications (>= 2)")->capture_default_str();
    simulate_cmd->add_option("--delta", sim.delta)->capture_default_str();
    simulate_cmd->add_option("--grid", sim.grid)->capture_default_str();
    simulate_cmd->add_option("--mode", sim.mode)->capture_default_str();
    simulate_cmd->add_option("--seed", sim.seed)->capture_default_str();
    simulate_cmd->add_option("--jobs", sim.jobs, "Worker threads (0: all cores)")->capture_default_str();
    simulate_cmd->add_flag("--restrict-j", sim.restrict_j);
    add_format(simulate_cmd, sim.format, {"csv", "json", "text"});

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo RMSE of the Hill estimator per grid k");
    sweep_cmd->add_option("--dist", sw.dist)->required();
    sweep_cmd->add_option("--n", sw.n)->capture_default_str();
    sweep_cmd->add_option("--reps", sw.reps)->capture_default_str();
    sweep_cmd->add_option("--grid", sw.grid)->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed)->capture_default_str();
    sweep_cmd->add_option("--jobs", sw.jobs)->capture_default_str();

    BoundsArgs bd;
    auto* bounds_cmd = app.add_subcommand("bounds", "Second-order diagnostic bounds");
    bounds_cmd->add_option("--gamma", bd.gamma)->capture_default_str();
    bounds_cmd->add_option("--rho", bd.rho)->capture_default_str();
    bounds_cmd->add_option("--C", bd.C)->capture_default_str();
    bounds_cmd->add_option("--beta", bd.beta)->capture_default_str();
    bounds_cmd->add_option("--delta", bd.delta)->capture_default_str();
    bounds_cmd->add_option("--n", bd.n)->capture_default_str();
    bounds_cmd->add_option("--grid", bd.grid)->capture_default_str();
    bounds_cmd->add_option("--c1", bd.c1)->capture_default_str();
    bounds_cmd->add_option("--c2", bd.c2)->capture_default_str();
    add_format(bounds_cmd, bd.format, {"json", "text"});

    SampleArgs sm;
    auto* sample_cmd = app.add_subcommand("sample", "Draw a sample and write one value per line");
    sample_cmd->add_option("--dist", sm.dist)->required();
    sample_cmd->add_option("--n", sm.n)->capture_default_str();
    sample_cmd->add_option("--seed", sm.seed)->capture_default_str();
    sample_cmd->add_option("--out", sm.out_path, "Output path ('-' for stdout)")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("eav");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(estimate_cmd)) return cmd_estimate(est, out, err);
        if (app.got_subcommand(simulate_cmd)) return cmd_simulate(sim, out, err);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(sw, out, err);
        if (app.got_subcommand(bounds_cmd)) return cmd_bounds(bd, out, err);
        if (app.got_subcommand(sample_cmd)) return cmd_sample(sm, out, err);
    } catch (const NoAdmissibleCandidate& e) {
        err << "error: estimation infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ReplicationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace eav::cli
