#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kppwaves/asymptotics.hpp"
#include "kppwaves/config.hpp"
#include "kppwaves/errors.hpp"
#include "kppwaves/pde.hpp"
#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"
#include "kppwaves/profile.hpp"

using json = nlohmann::ordered_json;
using namespace kppwaves;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoWave = 2;
constexpr int kExitNumericalFailure = 3;

struct CommonOptions {
    std::string config_path;
    double tol = 1e-10;
    double tol_c = 1e-6;
    double rmin = 1e-6;
    double eps_seed = 1e-6;
};

PhaseOptions phase_options(const CommonOptions& c) {
    PhaseOptions p;
    p.tol = c.tol;
    p.r_min = c.rmin;
    p.eps_seed = c.eps_seed;
    return p;
}

json finite_or_tag(double v) {
    if (std::isinf(v)) return v > 0 ? json("+infinity") : json("-infinity");
    return json(v);
}

// Manifest embedded in every output (sidecar for CSV). Wall-clock timing is
// reported on stderr only so that repeated runs are byte-identical.
json make_manifest(const std::string& subcommand, const CommonOptions& c,
                   const std::vector<std::string>& outputs) {
    json m;
    m["subcommand"] = subcommand;
    m["spec"] = c.config_path;
    m["parameters"] = {
        {"tol", c.tol}, {"tol_c", c.tol_c}, {"rmin", c.rmin}, {"eps_seed", c.eps_seed}};
    m["outputs"] = outputs;
    return m;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

json classification_json(const ClassificationReport& report) {
    json j;
    j["region0"] = to_string(report.region0);
    j["region1"] = to_string(report.region1);
    j["existence"] = to_string(report.existence);
    if (report.z0_finite.has_value())
        j["z0_finite"] = *report.z0_finite;
    else
        j["z0_finite"] = nullptr;
    j["predicted_theta"] = report.predicted_theta;
    j["borderline"] = report.borderline;
    return j;
}

int cmd_analyze(const CommonOptions& opts, bool with_mu) {
    ProblemSpec spec = load_problem(opts.config_path);
    validate_spec(spec);
    ClassificationReport report = classify(spec);

    json out = classification_json(report);
    if (with_mu) {
        double mu = compute_mu(composite(spec));
        out["mu"] = finite_or_tag(mu);
        if (!std::isinf(mu)) out["speed_upper_bound"] = 2.0 * std::sqrt(mu);
    }
    out["manifest"] = make_manifest(with_mu ? "analyze" : "classify", opts, {});
    std::cout << out.dump(2) << "\n";
    return report.existence == Existence::Exists ? kExitOk : kExitNoWave;
}

int cmd_speed(const CommonOptions& opts, const std::string& out_path) {
    ProblemSpec spec = load_problem(opts.config_path);
    validate_spec(spec);
    SpeedOptions sopts;
    sopts.tol_c = opts.tol_c;
    sopts.phase = phase_options(opts);
    SpeedResult result = critical_speed(composite(spec), sopts);

    json out;
    out["c_star"] = result.c_star;
    out["bracket"] = {result.c_lo, result.c_hi};
    out["mu"] = result.mu;
    out["upper_bound"] = result.upper_bound;
    out["iterations"] = result.iterations;
    out["manifest"] = make_manifest("speed", opts, out_path.empty() ? std::vector<std::string>{}
                                                                    : std::vector{out_path});
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_profile(const CommonOptions& opts, double c_requested, const std::string& out_path) {
    ProblemSpec spec = load_problem(opts.config_path);
    validate_spec(spec);
    CompositeNonlinearity f = composite(spec);

    SpeedOptions sopts;
    sopts.tol_c = opts.tol_c;
    sopts.phase = phase_options(opts);
    SpeedResult speed = critical_speed(f, sopts);

    double c = c_requested > 0.0 ? c_requested : speed.c_star;
    if (c < speed.c_star - opts.tol_c)
        throw SpeedBelowCritical("requested speed " + std::to_string(c) +
                                     " is below the critical speed c* = " +
                                     std::to_string(speed.c_star),
                                 speed.c_star);

    PhaseSolution ps = solve_phase(f, c, phase_options(opts));
    WaveProfile wp = reconstruct_profile(spec, ps);
    ProfileResiduals res = residual_integral_form(spec, wp);
    ClassificationReport report = classify(spec);

    write_profile_csv(out_path, wp);

    json meta;
    meta["c"] = c;
    meta["c_star"] = speed.c_star;
    meta["z0"] = finite_or_tag(wp.z0);
    meta["z1"] = finite_or_tag(wp.z1);
    meta["z0_finite"] = wp.z0_finite;
    meta["z1_finite"] = wp.z1_finite;
    meta["z0_numeric_agrees"] = !wp.z0_disagreement;
    meta["residuals"] = {{"res_def", res.res_def}, {"res_speed", res.res_speed}};
    meta["classification"] = classification_json(report);
    meta["manifest"] = make_manifest("profile", opts, {out_path, out_path + ".meta.json"});
    write_text(out_path + ".meta.json", meta.dump(2) + "\n");
    std::cout << meta.dump(2) << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOptions& opts, double tmax, double h, const std::string& out_path) {
    ProblemSpec spec = load_problem(opts.config_path);
    validate_spec(spec);

    PdeOptions popts;
    popts.h = h;
    Simulator sim(spec, popts);
    sim.run(tmax);
    auto [c_measured, stderr_c] = sim.measure_speed(0.5 * tmax);

    std::string front_csv;
    front_csv.reserve(sim.front_history().size() * 48 + 16);
    front_csv += "t,x_front\n";
    char buf[64];
    for (const auto& fs : sim.front_history()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", fs.t, fs.x);
        front_csv += buf;
    }
    write_text(out_path, front_csv);

    json out;
    out["c_measured"] = c_measured;
    out["stderr"] = stderr_c;
    out["t_final"] = sim.time();
    out["manifest"] = make_manifest("simulate", opts, {out_path});
    write_text(out_path + ".meta.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct SweepAxis {
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

SweepAxis parse_axis(const std::string& text) {
    SweepAxis axis;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &axis.lo, &axis.hi, &axis.n) != 3 || axis.n < 0)
        throw SpecViolation("malformed sweep axis '" + text + "', expected a:b:n");
    return axis;
}

std::pair<SweepAxis, SweepAxis> parse_grid_spec(const std::string& grid_spec) {
    SweepAxis g1, d1;
    bool have_g1 = false, have_d1 = false;
    std::size_t pos = 0;
    while (pos < grid_spec.size()) {
        auto comma = grid_spec.find(',', pos);
        std::string item = grid_spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw SpecViolation("malformed --grid-spec item '" + item + "'");
        std::string key = item.substr(0, eq);
        if (key == "g1") {
            g1 = parse_axis(item.substr(eq + 1));
            have_g1 = true;
        } else if (key == "d1") {
            d1 = parse_axis(item.substr(eq + 1));
            have_d1 = true;
        } else {
            throw SpecViolation("unknown --grid-spec axis '" + key + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!have_g1 || !have_d1)
        throw SpecViolation("--grid-spec must define both g1=a:b:n and d1=a:b:n");
    return {g1, d1};
}

double axis_value(const SweepAxis& axis, int i) {
    if (axis.n <= 1) return axis.lo;
    return axis.lo + (axis.hi - axis.lo) * double(i) / double(axis.n - 1);
}

int sweep_thread_cap() {
    if (const char* env = std::getenv("KPPWAVES_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

int cmd_sweep(const CommonOptions& opts, const std::string& grid_spec, bool attach_solver,
              const std::string& out_path) {
    ProblemSpec base = load_problem(opts.config_path);
    auto [g1_axis, d1_axis] = parse_grid_spec(grid_spec);

    struct Cell {
        double gamma1, delta1;
        std::string region;
        int z0_finite = -1;  // -1: not predicted
        double theta = std::numeric_limits<double>::quiet_NaN();
        double theta_hat = std::numeric_limits<double>::quiet_NaN();
        bool admissible = false;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < g1_axis.n; ++i)
        for (int j = 0; j < d1_axis.n; ++j)
            cells.push_back({axis_value(g1_axis, i), axis_value(d1_axis, j), "", -1});

    auto run_cell = [&](Cell& cell) {
        try {
            auto near1 = classify_near_1(cell.gamma1, cell.delta1);
            cell.admissible = true;
            cell.region = to_string(near1.region);
            cell.z0_finite = near1.z0_finite ? 1 : 0;
            cell.theta = near1.predicted_theta;
        } catch (const OutOfDomain&) {
            cell.region = "inadmissible";
            return;
        }
        if (!attach_solver) return;
        try {
            // The sweep varies the near-1 exponents of the power family from
            // the base config; gamma0/delta0 and the coefficients stay fixed.
            ProblemSpec spec =
                ProblemSpec::power_law(base.gamma0, base.delta0, cell.gamma1, cell.delta1,
                                       base.g0, base.g1, base.d0, base.d1);
            CompositeNonlinearity f = composite(spec);
            SpeedOptions sopts;
            sopts.tol_c = opts.tol_c;
            sopts.phase = phase_options(opts);
            SpeedResult speed = critical_speed(f, sopts);
            // The exponent fit only looks at the window near r = 1, so the
            // probe does not need to descend toward r = 0.
            PhaseOptions fit_opts = phase_options(opts);
            fit_opts.r_min = 0.4;
            // Fit deep into the endpoint: the leading correction to the
            // power law decays slowly, so a shallow window biases the slope.
            fit_opts.eps_seed = std::min(fit_opts.eps_seed, 1e-8);
            PhaseSolution ps = solve_phase(f, 1.05 * speed.c_star, fit_opts);
            auto fit = estimate_exponent(ps, 1.0 - 1e-4, 1.0 - 100.0 * fit_opts.eps_seed);
            cell.theta_hat = fit.theta_hat;
        } catch (const std::exception&) {
            // Leave theta_hat as NaN; the classification columns stand.
        }
    };

    // Independent pure cells; assembled by index order regardless of
    // completion order.
    const int threads = std::min<int>(sweep_thread_cap(), std::max<std::size_t>(cells.size(), 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1))
            run_cell(cells[k]);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string csv = "gamma1,delta1,region,z0_finite,theta,theta_hat\n";
    char buf[160];
    for (const auto& cell : cells) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%s,%.17g,%.17g\n", cell.gamma1,
                      cell.delta1, cell.region.c_str(),
                      cell.z0_finite < 0 ? "" : (cell.z0_finite ? "true" : "false"), cell.theta,
                      cell.theta_hat);
        csv += buf;
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_text(out_path, csv);
        json manifest = make_manifest("sweep", opts, {out_path});
        manifest["parameters"]["grid_spec"] = grid_spec;
        manifest["parameters"]["solve"] = attach_solver;
        write_text(out_path + ".manifest.json", manifest.dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Travelling-wave solver and classifier for the Fisher-KPP equation with "
                 "density-dependent diffusion"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("config", common.config_path, "problem configuration file")->required();
        sub->add_option("--tol", common.tol, "phase integration tolerance");
        sub->add_option("--tol-c", common.tol_c, "bisection tolerance for c*");
        sub->add_option("--rmin", common.rmin, "left evaluation point of the backward IVP");
        sub->add_option("--eps-seed", common.eps_seed, "seeding distance from r = 1");
    };

    auto* analyze = app.add_subcommand("analyze", "classify the problem and report existence");
    add_common(analyze);
    auto* classify_cmd = app.add_subcommand("classify", "analyze without computing mu");
    add_common(classify_cmd);

    auto* speed = app.add_subcommand("speed", "compute the critical wave speed c*");
    add_common(speed);
    std::string speed_out;
    speed->add_option("--out", speed_out, "write the JSON result here as well");

    auto* profile = app.add_subcommand("profile", "reconstruct the wave profile U(z)");
    add_common(profile);
    double profile_c = 0.0;
    std::string profile_out = "profile.csv";
    profile->add_option("--c", profile_c, "wave speed (default: c*)");
    profile->add_option("--out", profile_out, "profile CSV path");

    auto* simulate = app.add_subcommand("simulate", "validate by direct PDE time integration");
    simulate->set_help_flag("--help", "print help");  // frees -h/--h for the grid spacing
    add_common(simulate);
    double tmax = 100.0, grid_h = 0.05;
    std::string sim_out = "front.csv";
    simulate->add_option("--tmax", tmax, "final time");
    simulate->add_option("--h", grid_h, "grid spacing");
    simulate->add_option("--out", sim_out, "front-history CSV path");

    auto* sweep = app.add_subcommand("sweep", "tabulate the (gamma1, delta1) region partition");
    add_common(sweep);
    std::string grid_spec, sweep_out;
    bool sweep_solve = false;
    sweep->add_option("--grid-spec", grid_spec, "axes, e.g. g1=0.25:2:8,d1=-0.5:1.5:9")
        ->required();
    sweep->add_option("--out", sweep_out, "table CSV path (default: stdout)");
    sweep->add_flag("--solve", sweep_solve, "run the solver per cell to attach theta_hat");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    auto started = std::chrono::steady_clock::now();
    int rc = kExitNumericalFailure;
    try {
        if (analyze->parsed()) rc = cmd_analyze(common, true);
        if (classify_cmd->parsed()) rc = cmd_analyze(common, false);
        if (speed->parsed()) rc = cmd_speed(common, speed_out);
        if (profile->parsed()) rc = cmd_profile(common, profile_c, profile_out);
        if (simulate->parsed()) rc = cmd_simulate(common, tmax, grid_h, sim_out);
        if (sweep->parsed()) rc = cmd_sweep(common, grid_spec, sweep_solve, sweep_out);
    } catch (const NoTravellingWave& e) {
        std::cerr << "no travelling wave: " << e.what() << "\n";
        rc = kExitNoWave;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        rc = kExitInputError;
    } catch (const SpecViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        rc = kExitInputError;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        rc = kExitNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitNumericalFailure;
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
    std::cerr << "wall-clock: " << elapsed.count() << " s\n";
    return rc;
}
