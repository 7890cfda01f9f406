#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "curvlab/format.hpp"
#include "curvlab/functionals.hpp"
#include "curvlab/mass.hpp"
#include "curvlab/report_store.hpp"
#include "curvlab/verify.hpp"

namespace curvlab::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string model = "schwarzschild";
    double mass = 1.0;
    double r0 = 1.0;
    double k = 0.5;
    double b = 1.0;
    std::string profile;
    std::string assume_nonnegative_R;
    int grid = 256;
    double t_min_factor = 1.0;
    double t_max_factor = 1e3;
    double tol = 1e-10;
    std::string out_dir;
    bool save_report = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

// Canonical key=value dump; the run id hashes this.
std::string echo(const std::string& command, const RunConfig& c) {
    std::ostringstream out;
    out << "command=" << command << '\n'
        << "model=" << c.model << '\n'
        << "mass=" << format_double(c.mass) << '\n'
        << "r0=" << format_double(c.r0) << '\n'
        << "k=" << format_double(c.k) << '\n'
        << "b=" << format_double(c.b) << '\n'
        << "profile=" << c.profile << '\n'
        << "assume_nonnegative_R=" << c.assume_nonnegative_R << '\n'
        << "grid=" << c.grid << '\n'
        << "t_min_factor=" << format_double(c.t_min_factor) << '\n'
        << "t_max_factor=" << format_double(c.t_max_factor) << '\n'
        << "tol=" << format_double(c.tol) << '\n';
    return out.str();
}

void apply_thread_cap(const char* value) {
    if (value == nullptr || *value == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (*end != '\0' || n < 1) throw UsageError(std::string("CURVLAB_THREADS must be a positive integer, got '") + value + "'");
    omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
}

MetricProfile build_profile(const RunConfig& c) {
    if (c.model == "schwarzschild") return schwarzschild(c.mass);
    if (c.model == "euclidean") return euclidean();
    if (c.model == "flat-exterior") return flat_exterior();
    if (c.model == "mollified-schwarzschild") return to_warped(mollified_schwarzschild(c.mass, c.r0));
    if (c.model == "perturbed-schwarzschild") return to_warped(perturbed_schwarzschild(c.mass, c.k, c.b));
    if (c.model == "custom") {
        if (c.profile.empty()) throw UsageError("--model custom needs --profile <csv>");
        if (!fs::exists(c.profile)) throw UsageError("profile not found: " + c.profile);
        // Parse the table before looking at the declaration so table errors surface first.
        std::ifstream in(c.profile);
        std::ostringstream text;
        text << in.rdbuf();
        MetricProfile probe = parse_profile_csv(text.str(), c.profile, false);
        if (c.assume_nonnegative_R != "true" && c.assume_nonnegative_R != "false") {
            throw UsageError("custom profiles need --assume-nonnegative-R true|false");
        }
        if (c.assume_nonnegative_R == "false") return probe;
        return parse_profile_csv(text.str(), c.profile, true);
    }
    throw UsageError("unknown model '" + c.model + "' (see `curvlab models`)");
}

std::vector<double> build_grid(const PotentialSolution& sol, const RunConfig& c) {
    if (c.grid < 8) throw UsageError("--grid must be at least 8");
    if (!(c.t_min_factor >= 1.0)) throw UsageError("--t-min-factor must be >= 1");
    if (!(c.t_max_factor * 2.0 > c.t_min_factor)) throw UsageError("--t-max-factor too small for --t-min-factor");
    return sol.default_grid(c.grid, c.t_min_factor, c.t_max_factor);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

fs::path output_dir(const RunConfig& c) {
    const fs::path dir = c.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

void maybe_save(const RunConfig& c, const std::string& command, std::vector<store::Payload> payloads,
                std::ostream& out) {
    if (!c.save_report) return;
    const fs::path dir = (c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir)) / "runs";
    const store::RunRecord record = store::make_record(echo(command, c), std::move(payloads));
    out << "# saved=" << store::save(record, dir).string() << '\n';
}

int cmd_models(std::ostream& out) {
    out << "schwarzschild            spatial Schwarzschild, minimal boundary (--mass)\n"
        << "euclidean                flat R^3, boundaryless\n"
        << "flat-exterior            exterior of the unit ball in R^3 (boundary not minimal)\n"
        << "mollified-schwarzschild  boundaryless, Schwarzschild outside r0 (--mass, --r0)\n"
        << "perturbed-schwarzschild  minimal boundary, R > 0 (--mass, --k, --b)\n"
        << "custom                   CSV table `r,w` or `s,f` (--profile, --assume-nonnegative-R)\n";
    return 0;
}

int cmd_potential(const RunConfig& c, std::ostream& out) {
    const PotentialSolution sol = PotentialSolution::solve(build_profile(c));
    const std::vector<double> grid = build_grid(sol, c);
    std::ostringstream text;
    text << "# profile=" << sol.profile().label() << '\n';
    text << "# kind=" << to_string(sol.profile().kind()) << '\n';
    if (sol.has_boundary()) text << "# capacity=" << format_double(sol.capacity()) << '\n';
    for (const std::string& w : sol.warnings()) text << "# warning=" << w << '\n';
    text << "t,r,s,u,grad,area\n";
    for (double t : grid) {
        const LevelSetSample s = sol.level_integrals(t);
        text << format_double(t) << ',' << format_double(s.r) << ',' << format_double(s.s) << ','
             << format_double(s.u) << ',' << format_double(s.grad) << ',' << format_double(s.area) << '\n';
    }
    out << text.str();
    if (!c.out_dir.empty()) write_file(output_dir(c) / "potential.csv", text.str());
    return 0;
}

int cmd_functionals(const RunConfig& c, std::ostream& out) {
    const PotentialSolution sol = PotentialSolution::solve(build_profile(c));
    const functionals::FunctionalSeries series = functionals::evaluate_series(sol, build_grid(sol, c));
    std::ostringstream text;
    functionals::write_series_csv(text, series);
    out << text.str();
    if (!c.out_dir.empty()) write_file(output_dir(c) / "functionals.csv", text.str());
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const PotentialSolution sol = PotentialSolution::solve(build_profile(c));
    const std::vector<double> grid = build_grid(sol, c);
    numerics::Tolerance tol;
    tol.rel = c.tol;
    const verify::VerificationReport report = verify::run_battery(sol, grid, verify::BatteryTolerances::from(tol));
    std::ostringstream text;
    verify::write_report_text(text, report);
    out << "# generated=" << timestamp() << '\n' << text.str();
    if (!c.out_dir.empty()) {
        const fs::path dir = output_dir(c);
        write_file(dir / "verify_report.txt", text.str());
        std::ostringstream csv;
        verify::write_report_csv(csv, report);
        write_file(dir / "verify_report.csv", csv.str());
    }
    maybe_save(c, "verify", {{"verification", text.str()}}, out);
    return report.any_fail() || report.hypothesis_flagged() ? 1 : 0;
}

int cmd_mass(const RunConfig& c, std::ostream& out) {
    const MetricProfile profile = build_profile(c);
    if (profile.kind() != ProfileKind::Boundaryless) {
        throw UsageError("mass needs a boundaryless model; " + profile.label() + " has a boundary");
    }
    const PotentialSolution sol = PotentialSolution::solve(profile);
    const mass::MassReport report = mass::compute_report(sol);
    std::ostringstream csv;
    mass::write_mass_csv(csv, report);
    out << "# generated=" << timestamp() << '\n';
    mass::write_mass_summary(out, report);
    if (!c.out_dir.empty()) write_file(output_dir(c) / "mass.csv", csv.str());
    maybe_save(c, "mass", {{"mass", csv.str()}}, out);
    return 0;
}

bool input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::WrongKind:
        case ErrorCode::OutOfRange:
        case ErrorCode::GridTooCoarse:
        case ErrorCode::IoError:
        case ErrorCode::SchemaMismatch:
            return true;
        default:
            return false;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"curvlab: level-set comparison geometry on rotationally symmetric 3-manifolds"};
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    RunConfig c;
    app.add_option("--model", c.model, "model name (see `models`)");
    app.add_option("--mass", c.mass, "mass parameter m");
    app.add_option("--r0", c.r0, "glue radius of mollified-schwarzschild");
    app.add_option("--k", c.k, "perturbation strength of perturbed-schwarzschild");
    app.add_option("--b", c.b, "core radius of perturbed-schwarzschild");
    app.add_option("--profile", c.profile, "CSV table for --model custom");
    app.add_option("--assume-nonnegative-R", c.assume_nonnegative_R, "declaration for custom profiles")
        ->check(CLI::IsMember({"true", "false"}));
    app.add_option("--grid", c.grid, "number of t-grid points");
    app.add_option("--t-min-factor", c.t_min_factor, "grid starts at factor * C/2");
    app.add_option("--t-max-factor", c.t_max_factor, "grid ends at factor * C");
    app.add_option("--tol", c.tol, "relative tolerance; check thresholds scale with it");
    app.add_option("--out", c.out_dir, "directory for CSV and report files");
    app.add_flag("--save-report", c.save_report, "store the run under <out>/runs");

    auto* potential = app.add_subcommand("potential", "u, |grad u| and capacity on the t-grid")->fallthrough();
    auto* series = app.add_subcommand("functionals", "functional series as CSV")->fallthrough();
    auto* verify_cmd = app.add_subcommand("verify", "run the inequality battery")->fallthrough();
    auto* mass_cmd = app.add_subcommand("mass", "ADM mass by flux and by volume growth")->fallthrough();
    auto* models = app.add_subcommand("models", "list built-in models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_thread_cap(std::getenv("CURVLAB_THREADS"));
        if (models->parsed()) return cmd_models(out);
        if (potential->parsed()) return cmd_potential(c, out);
        if (series->parsed()) return cmd_functionals(c, out);
        if (verify_cmd->parsed()) return cmd_verify(c, out);
        if (mass_cmd->parsed()) return cmd_mass(c, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error(e.code()) ? 2 : 1;
    }
    return 2;
}

}  // namespace curvlab::cli
