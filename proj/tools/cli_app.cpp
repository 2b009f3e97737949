#include "cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "chessflow/io.hpp"

#ifndef CHESSFLOW_PRESET_DIR
#define CHESSFLOW_PRESET_DIR "presets"
#endif

namespace chessflow::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Bad flags or parameters; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A file to be written once the command has finished computing.
struct Artifact {
    std::string name;
    std::string content;
};

struct Outcome {
    std::vector<Artifact> artifacts;
    int code = kOk;
};

struct Globals {
    std::string out_dir = ".";
    int threads = 0;
    bool full = false;
};

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(fmt::format("cannot open {} '{}'", what, path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_preset(const std::string& name) {
    fs::path path = name;
    if (!fs::is_regular_file(path)) path = fs::path(CHESSFLOW_PRESET_DIR) / (name + ".json");
    if (!fs::is_regular_file(path)) throw UsageError(fmt::format("unknown preset '{}'", name));
    try {
        return json::parse(read_file(path.string(), "preset"));
    } catch (const json::exception& e) {
        throw UsageError(fmt::format("preset '{}' is not valid JSON: {}", name, e.what()));
    }
}

template <typename T>
T preset_value(const json& preset, const char* key, T fallback) {
    return preset.contains(key) ? preset.at(key).get<T>() : fallback;
}

std::size_t pick_grid(const std::optional<std::size_t>& flag, const json& preset, const Globals& g) {
    if (flag) return *flag;
    if (g.full) return preset_value<std::size_t>(preset, "full_grid_size", 10'000);
    return preset_value<std::size_t>(preset, "grid_size", 999);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

void check_epsilons(const std::vector<double>& eps) {
    require(eps.size() >= 2, "--eps needs at least two tile sizes");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double e : eps) {
        require(e > 0.0 && e <= 1.0, "--eps values must lie in (0, 1]");
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    require(hi / lo >= 10.0 * (1.0 - 1e-12), "--eps values must span at least one decade");
}

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

// --- orbit -----------------------------------------------------------------

struct OrbitArgs {
    std::string domain_file;
    double lambda = 0.0;
    double s0 = 0.0;
    std::size_t n = 1000;
};

Outcome cmd_orbit(const OrbitArgs& a, std::ostream& out, std::ostream& err) {
    require(a.n >= 1 && a.n <= kMaxStoredOrbit, fmt::format("--n must lie in [1, {}]", kMaxStoredOrbit));
    require(a.s0 >= 0.0 && a.s0 < 1.0, "--s0 must lie in [0, 1)");
    const std::string text = read_file(a.domain_file, "domain file");
    const Domain domain = Domain::from_spec(io::parse_domain(text));
    const ChessParams params(a.lambda);

    const OrbitResult result = orbit(domain, params, boundary_point(domain, a.s0), a.n);
    Outcome outcome;
    outcome.artifacts.push_back({"orbit.csv", render([&](std::ostream& os) { io::write_orbit_csv(os, result.orbit); })});
    if (result.failure) {
        err << fmt::format("{} at step {}: {}\n", to_string(result.failure->kind), result.failure->step,
                           result.failure->message);
        outcome.code = kGeometryOrData;
    } else {
        out << fmt::format("orbit: {} mappings, lift {:.12g} -> {:.12g}\n", a.n, result.orbit.lift.front(),
                           result.orbit.lift.back());
    }
    return outcome;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string domain_file;
    std::string preset;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> n;
    std::optional<double> s0;
    PlateauOptions plateau{};
};

void check_plateau_options(const PlateauOptions& p) {
    require(p.tol > 0.0, "--tol must be positive");
    require(p.min_run >= 1, "--min-run must be at least 1");
    require(p.q_max >= 1, "--q-max must be at least 1");
}

Outcome cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    require(a.domain_file.empty() != a.preset.empty(), "sweep needs exactly one of --domain or --preset");
    json preset = json::object();
    DomainSpec spec;
    if (!a.preset.empty()) {
        preset = load_preset(a.preset);
        require(preset.value("command", "") == "sweep", fmt::format("preset '{}' is not a sweep preset", a.preset));
        spec = io::parse_domain(preset.at("domain").dump());
    }
    const std::size_t grid = pick_grid(a.grid, preset, g);
    const std::size_t n = a.n.value_or(preset_value<std::size_t>(preset, "n", kDefaultSweepIterations));
    const double s0 = a.s0.value_or(preset_value<double>(preset, "s0", 0.123));
    require(grid >= 2, "--grid must be at least 2");
    require(n >= kMinEstimateIterations, fmt::format("--n must be at least {}", kMinEstimateIterations));
    require(s0 >= 0.0 && s0 < 1.0, "--s0 must lie in [0, 1)");
    check_plateau_options(a.plateau);
    if (!a.domain_file.empty()) spec = io::parse_domain(read_file(a.domain_file, "domain file"));
    const Domain domain = Domain::from_spec(spec);

    const SweepResult result = sweep(domain, grid, n, s0);
    const PlateauReport plateaus = detect_plateaus(result, a.plateau);
    std::size_t failed = 0;
    for (const auto& e : result.estimates) failed += e.valid() ? 0 : 1;

    Outcome outcome;
    outcome.artifacts.push_back({"sweep.csv", render([&](std::ostream& os) { io::write_sweep_csv(os, result); })});
    outcome.artifacts.push_back(
        {"plateaus.json", render([&](std::ostream& os) { io::write_plateau_json(os, plateaus); })});
    if (failed == result.estimates.size()) {
        err << "every sweep point failed\n";
        outcome.code = kGeometryOrData;
    } else {
        out << fmt::format("sweep: {} points, {} failed, {} plateaus, S = {:.6g}\n", grid, failed,
                           plateaus.plateaus.size(), plateaus.S);
    }
    return outcome;
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
    std::string field_file;
    double lambda = 0.0;
    std::string mode = "paper";
    std::vector<double> times;
    std::optional<int> K;
    double s = 4.0;
    double beta = 0.1;
    int grid = 0;
    double resonance_tol = kDefaultResonanceTol;
};

constexpr double kResidualSpacing = 1e-3;

Outcome cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    require(a.mode == "paper" || a.mode == "ic_corrected", "--mode must be paper or ic_corrected");
    require(!a.times.empty(), "--times needs at least one value");
    for (double t : a.times) require(std::isfinite(t), "--times values must be finite");
    require(!a.K || *a.K >= 0, "--K must be non-negative");
    require(a.grid >= 0, "--grid must be non-negative");
    require(a.resonance_tol > 0.0, "--resonance-tol must be positive");
    require(std::isfinite(a.s) && std::isfinite(a.beta) && a.beta >= 0.0, "--s and --beta must be finite, beta >= 0");
    io::FieldFile file = io::parse_field(read_file(a.field_file, "field file"));
    if (file.empty) {
        out << "solve: empty field, no solution written\n";
        return {};
    }
    const ChessParams check(a.lambda);  // DegenerateLambda before any work
    (void)check;
    FourierField f = a.K ? file.field.truncated(*a.K) : file.field;

    SolverConfig config;
    config.lambda = a.lambda;
    config.mode = a.mode == "paper" ? SolverMode::paper : SolverMode::ic_corrected;
    config.resonance_tol = a.resonance_tol;
    config.basis = f.basis();

    const std::vector<FourierField> solution = solve(f, config, a.times);

    ResidualReport residual;
    for (double t : a.times) {
        const std::vector<double> stencil{t - kResidualSpacing, t, t + kResidualSpacing};
        const auto series = solve(f, config, stencil);
        const ResidualReport r = residual_check(series, f, config, stencil);
        residual.max_abs = std::max(residual.max_abs, r.max_abs);
        residual.max_relative = std::max(residual.max_relative, r.max_relative);
    }

    Outcome outcome;
    for (std::size_t i = 0; i < solution.size(); ++i) {
        outcome.artifacts.push_back({fmt::format("solution_t{}.csv", i),
                                     render([&](std::ostream& os) { io::write_solution_csv(os, solution[i]); })});
        if (a.grid > 0) {
            const Grid grid = synthesize(solution[i], a.grid);
            outcome.artifacts.push_back({fmt::format("grid_t{}.csv", i), render([&](std::ostream& os) {
                                             io::write_grid_csv(os, grid, f.basis());
                                         })});
        }
    }
    RegularityReport regularity;
    if (f.K() >= 4) {
        regularity = regularity_report(f, config, a.s, a.beta);
    } else {
        err << "note: K < 4, regularity sums not computed\n";
    }
    outcome.artifacts.push_back({"regularity.json", render([&](std::ostream& os) {
                                     io::write_regularity_json(os, regularity, residual, a.s, a.beta);
                                 })});
    out << fmt::format("solve: {} times, residual {:.3g} (relative {:.3g}), stabilized {}\n", a.times.size(),
                       residual.max_abs, residual.max_relative, regularity.stabilized);
    return outcome;
}

// --- diophantine -----------------------------------------------------------

struct DiophantineArgs {
    std::optional<double> r;
    std::optional<double> lambda;
    std::int64_t q_max = 1000;
};

Outcome cmd_diophantine(const DiophantineArgs& a, std::ostream& out) {
    require(a.r.has_value() != a.lambda.has_value(), "diophantine needs exactly one of --r or --lambda");
    require(a.q_max >= 1, "--q-max must be at least 1");
    double r = 0.0;
    if (a.lambda) {
        require(*a.lambda > 0.0 && *a.lambda < 1.0, "--lambda must lie in (0, 1)");
        r = r_square_exact(*a.lambda);
    } else {
        require(std::isfinite(*a.r), "--r must be finite");
        r = *a.r;
    }
    const DiophantineReport report = beta_estimate(r, a.q_max);
    out << fmt::format("diophantine: r = {:.12g}, beta_hat = {:.4g}, {} convergents\n", r, report.beta_hat,
                       report.convergents.size());
    return {{{"diophantine.json", render([&](std::ostream& os) { io::write_diophantine_json(os, report); })}},
            kOk};
}

// --- staircase and tilt ----------------------------------------------------

struct StaircaseArgs {
    std::string sweep_file;
    std::vector<double> eps = default_epsilons();
    PlateauOptions plateau{};
};

Outcome cmd_staircase(const StaircaseArgs& a, std::ostream& out) {
    check_epsilons(a.eps);
    check_plateau_options(a.plateau);
    std::istringstream in(read_file(a.sweep_file, "sweep CSV"));
    const SweepResult result = io::read_sweep_csv(in);
    const PlateauReport plateaus = detect_plateaus(result, a.plateau);
    const StaircaseAnalysis analysis = staircase_dimension(result, plateaus, a.eps);
    out << fmt::format("staircase: S = {:.6g}, D_summary = {:.6g}\n", analysis.S, analysis.D_summary);
    return {{{"analysis.json", render([&](std::ostream& os) { io::write_analysis_json(os, analysis); })}}, kOk};
}

struct TiltArgs {
    std::vector<double> angles;
    std::string preset;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> n;
    std::optional<double> s0;
    std::vector<double> eps = default_epsilons();
};

Outcome cmd_tilt(const TiltArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    json preset = json::object();
    std::vector<double> angles = a.angles;
    if (!a.preset.empty()) {
        preset = load_preset(a.preset);
        require(preset.value("command", "") == "tilt", fmt::format("preset '{}' is not a tilt preset", a.preset));
        if (angles.empty()) angles = preset.at("angles").get<std::vector<double>>();
    }
    require(!angles.empty(), "tilt needs --angles or a tilt --preset");
    for (double angle : angles) require(std::isfinite(angle), "--angles values must be finite");
    TiltSweepConfig config;
    config.grid_size = pick_grid(a.grid, preset, g);
    config.n_per_point = a.n.value_or(preset_value<std::size_t>(preset, "n", kDefaultSweepIterations));
    config.s0 = a.s0.value_or(preset_value<double>(preset, "s0", 0.123));
    config.epsilons = a.eps;
    require(config.grid_size >= 2, "--grid must be at least 2");
    require(config.n_per_point >= kMinEstimateIterations,
            fmt::format("--n must be at least {}", kMinEstimateIterations));
    require(config.s0 >= 0.0 && config.s0 < 1.0, "--s0 must lie in [0, 1)");
    check_epsilons(config.epsilons);

    const TiltStudy study = fit_tilt(tilt_dimensions(angles, config));
    Outcome outcome;
    outcome.artifacts.push_back({"tilt.csv", render([&](std::ostream& os) { io::write_tilt_csv(os, study); })});
    std::size_t missing = 0;
    for (const auto& p : study.points) {
        if (!p.D) {
            ++missing;
            err << fmt::format("angle {:.12g}: {}\n", p.angle, p.error);
        }
    }
    if (missing == study.points.size()) outcome.code = kGeometryOrData;
    out << fmt::format("tilt: {} angles, {} without a dimension\n", study.points.size(), missing);
    return outcome;
}

void write_artifacts(const Globals& g, const std::vector<Artifact>& artifacts) {
    if (artifacts.empty()) return;
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    if (ec) throw UsageError(fmt::format("cannot create output directory '{}': {}", g.out_dir, ec.message()));
    for (const auto& a : artifacts) {
        const fs::path path = fs::path(g.out_dir) / a.name;
        std::ofstream os(path, std::ios::binary);
        os << a.content;
        if (!os) throw UsageError(fmt::format("cannot write '{}'", path.string()));
    }
}

std::string list_modes(const ResonanceError& e) {
    std::string s;
    for (const auto& m : e.modes()) {
        s += fmt::format("  mode ({},{}): D = {:.3g}, lambda^2 ~ {:.12g}\n", m.k1, m.k2, m.denominator,
                         m.lambda_sq_rational);
    }
    return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chess-billiard rotation numbers, staircases and internal-wave spectral solves", "chessflow"};
    Globals g;
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "OpenMP threads (0 = auto)")->check(CLI::NonNegativeNumber);
    app.add_flag("--full", g.full, "Use the full 10,000-point grid for presets");
    app.require_subcommand(1);

    OrbitArgs orbit_args;
    auto* orbit_cmd = app.add_subcommand("orbit", "Iterate the billiard map and dump the orbit");
    orbit_cmd->add_option("--domain", orbit_args.domain_file, "Domain JSON file")->required();
    orbit_cmd->add_option("--lambda", orbit_args.lambda, "Forcing frequency in (0,1)")->required();
    orbit_cmd->add_option("--s0", orbit_args.s0, "Start arc parameter in [0,1)")->capture_default_str();
    orbit_cmd->add_option("--n", orbit_args.n, "Number of mappings")->capture_default_str();

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Rotation number over a lambda grid, with plateaus");
    sweep_cmd->add_option("--domain", sweep_args.domain_file, "Domain JSON file");
    sweep_cmd->add_option("--preset", sweep_args.preset, "Preset name or file");
    sweep_cmd->add_option("--grid", sweep_args.grid, "Grid size (default 999, 10000 with --full)");
    sweep_cmd->add_option("--n", sweep_args.n, "Mappings per grid point");
    sweep_cmd->add_option("--s0", sweep_args.s0, "Start arc parameter");
    sweep_cmd->add_option("--tol", sweep_args.plateau.tol, "Plateau tolerance")->capture_default_str();
    sweep_cmd->add_option("--min-run", sweep_args.plateau.min_run, "Minimum plateau length")->capture_default_str();
    sweep_cmd->add_option("--q-max", sweep_args.plateau.q_max, "Largest locked denominator")->capture_default_str();

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Closed-form spectral solution of the forced wave equation");
    solve_cmd->add_option("--field", solve_args.field_file, "Forcing field JSON")->required();
    solve_cmd->add_option("--lambda", solve_args.lambda, "Forcing frequency in (0,1)")->required();
    solve_cmd->add_option("--mode", solve_args.mode, "paper | ic_corrected")->capture_default_str();
    solve_cmd->add_option("--times", solve_args.times, "Comma-separated output times")->delimiter(',')->required();
    solve_cmd->add_option("--K", solve_args.K, "Truncate the field to |k| <= K");
    solve_cmd->add_option("--s", solve_args.s, "Sobolev exponent of f")->capture_default_str();
    solve_cmd->add_option("--beta", solve_args.beta, "Diophantine exponent")->capture_default_str();
    solve_cmd->add_option("--grid", solve_args.grid, "Also dump u on an N x N grid (0 = off)")->capture_default_str();
    solve_cmd->add_option("--resonance-tol", solve_args.resonance_tol, "Resonance threshold on |D|")
        ->capture_default_str();

    DiophantineArgs dio_args;
    auto* dio_cmd = app.add_subcommand("diophantine", "Continued-fraction diagnostics of a rotation number");
    dio_cmd->add_option("--r", dio_args.r, "Rotation number");
    dio_cmd->add_option("--lambda", dio_args.lambda, "Unit-square lambda, mapped to its rotation number");
    dio_cmd->add_option("--q-max", dio_args.q_max, "Largest convergent denominator")->capture_default_str();

    StaircaseArgs stair_args;
    auto* stair_cmd = app.add_subcommand("staircase", "Plateau fraction and box dimension of a sweep CSV");
    stair_cmd->add_option("--sweep", stair_args.sweep_file, "Sweep CSV")->required();
    stair_cmd->add_option("--eps", stair_args.eps, "Comma-separated tile sizes")->delimiter(',');
    stair_cmd->add_option("--tol", stair_args.plateau.tol, "Plateau tolerance")->capture_default_str();
    stair_cmd->add_option("--min-run", stair_args.plateau.min_run, "Minimum plateau length")->capture_default_str();
    stair_cmd->add_option("--q-max", stair_args.plateau.q_max, "Largest locked denominator")->capture_default_str();

    TiltArgs tilt_args;
    auto* tilt_cmd = app.add_subcommand("tilt", "Staircase dimension of tilted squares against angle");
    tilt_cmd->add_option("--angles", tilt_args.angles, "Comma-separated tilt angles (radians)")->delimiter(',');
    tilt_cmd->add_option("--preset", tilt_args.preset, "Preset name or file");
    tilt_cmd->add_option("--grid", tilt_args.grid, "Grid size per sweep");
    tilt_cmd->add_option("--n", tilt_args.n, "Mappings per grid point");
    tilt_cmd->add_option("--s0", tilt_args.s0, "Start arc parameter");
    tilt_cmd->add_option("--eps", tilt_args.eps, "Comma-separated tile sizes")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }

    try {
        if (g.threads > 0) omp_set_num_threads(g.threads);
        Outcome outcome;
        if (*orbit_cmd) outcome = cmd_orbit(orbit_args, out, err);
        else if (*sweep_cmd) outcome = cmd_sweep(sweep_args, g, out, err);
        else if (*solve_cmd) outcome = cmd_solve(solve_args, out, err);
        else if (*dio_cmd) outcome = cmd_diophantine(dio_args, out);
        else if (*stair_cmd) outcome = cmd_staircase(stair_args, out);
        else outcome = cmd_tilt(tilt_args, g, out, err);
        write_artifacts(g, outcome.artifacts);
        return outcome.code;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const GeometryError& e) {
        err << e.what() << '\n';
        return kGeometryOrData;
    } catch (const ResonanceError& e) {
        err << e.what() << '\n' << list_modes(e);
        return kResonance;
    } catch (const ArithmeticError& e) {
        err << e.what() << '\n';
        if (e.fraction()) err << fmt::format("detected {}/{}\n", e.fraction()->first, e.fraction()->second);
        return kArithmetic;
    } catch (const FractalError& e) {
        err << e.what() << '\n';
        return e.kind() == FractalErrorKind::InvalidEpsilons ? kUsage : kGeometryOrData;
    } catch (const SpectralError& e) {
        err << e.what() << '\n';
        return kGeometryOrData;
    } catch (const FormatError& e) {
        err << e.what() << '\n';
        return kGeometryOrData;
    }
}

}  // namespace chessflow::cli
