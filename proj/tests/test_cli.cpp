#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "curvlab/format.hpp"
#include "scratch_dir.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "curvlab");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = curvlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string without_generated(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("# generated=", 0) == 0) continue;
        out += line + '\n';
    }
    return out;
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

double summary_value(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

fs::path write_table(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string negative_table() {
    std::string text = "r,w\n";
    for (int i = 0; i < 200; ++i) {
        const double r = 8.0 * i / 199.0;
        text += curvlab::format_double(r) + "," + curvlab::format_double(1.0 - 0.3 * std::exp(-r * r)) + "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("verify schwarzschild: exit 0 with five equality cases") {
    const Run r = run({"verify", "--model", "schwarzschild", "--mass", "1"});
    CHECK(r.code == 0);
    for (const char* name : {"a_boundary_gradient EqualityDetected", "b_A1_bound EqualityDetected",
                             "c_area_comparison EqualityDetected", "d_area_capacity EqualityDetected",
                             "e_volume_comparison EqualityDetected"}) {
        CAPTURE(name);
        CHECK(count(r.out, name) == 1);
    }
    CHECK(r.out.rfind("# generated=", 0) == 0);
}

TEST_CASE("mass mollified schwarzschild: exit 0, estimators agree") {
    const Run r = run({"mass", "--model", "mollified-schwarzschild", "--mass", "1", "--r0", "1"});
    CHECK(r.code == 0);
    CHECK(summary_value(r.out, "m_surface  ") == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(summary_value(r.out, "m_volume   ") == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("custom table with a non-monotone column: exit 2") {
    const fs::path dir = testing::scratch_dir("cli_bad");
    const fs::path bad = write_table(dir, "bad.csv", "r,w\n0.5,1.5\n0.4,1.4\n1.0,1.2\n2.0,1.1\n");
    const Run r = run({"verify", "--model", "custom", "--profile", bad.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"verify", "--model", "custom", "--profile", bad.string(), "--assume-nonnegative-R", "true"}).code == 2);
}

TEST_CASE("custom table with negative curvature: exit 1 and annotated") {
    const fs::path dir = testing::scratch_dir("cli_neg");
    const fs::path neg = write_table(dir, "neg.csv", negative_table());
    const Run r = run({"verify", "--model", "custom", "--profile", neg.string(), "--assume-nonnegative-R", "false"});
    CHECK(r.code == 1);
    CHECK(r.out.find("annotation=hypothesis violated") != std::string::npos);
    CHECK(r.out.find("r_nonneg_confirmed=false") != std::string::npos);
}

TEST_CASE("custom table needs the curvature declaration") {
    const fs::path dir = testing::scratch_dir("cli_decl");
    const fs::path neg = write_table(dir, "neg.csv", negative_table());
    CHECK(run({"verify", "--model", "custom", "--profile", neg.string()}).code == 2);
    CHECK(run({"verify", "--model", "custom", "--profile", neg.string(), "--assume-nonnegative-R", "maybe"}).code == 2);
    CHECK(run({"verify", "--model", "custom", "--profile", (dir / "missing.csv").string(),
               "--assume-nonnegative-R", "true"}).code == 2);
}

TEST_CASE("output is deterministic apart from the timestamp") {
    const std::vector<std::string> args = {"verify", "--model", "perturbed-schwarzschild", "--grid", "64"};
    const Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(without_generated(a.out) == without_generated(b.out));
    const Run m1 = run({"mass", "--model", "euclidean"}), m2 = run({"mass", "--model", "euclidean"});
    CHECK(without_generated(m1.out) == without_generated(m2.out));
}

TEST_CASE("config file values yield to command-line flags") {
    const fs::path dir = testing::scratch_dir("cli_config");
    const fs::path cfg = write_table(dir, "run.toml", "model = \"schwarzschild\"\nmass = 2\ngrid = 16\n");
    const Run from_file = run({"potential", "--config", cfg.string()});
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("# capacity=2\n") != std::string::npos);
    CHECK(count(from_file.out, "\n") == 4 + 16);
    const Run overridden = run({"potential", "--config", cfg.string(), "--mass", "3"});
    CHECK(overridden.out.find("# capacity=3\n") != std::string::npos);
}

TEST_CASE("help, models and usage errors") {
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("verify") != std::string::npos);
    CHECK(run({"models"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"verify", "--no-such-flag"}).code == 2);
    CHECK(run({"verify", "--model", "nonsense"}).code == 2);
    CHECK(run({"verify", "--grid", "4"}).code == 2);
    CHECK(run({"verify", "--t-min-factor", "0.5"}).code == 2);
    CHECK(run({"mass", "--model", "schwarzschild"}).code == 2);
    CHECK(run({"verify", "--model", "schwarzschild", "--mass", "-1"}).code == 2);
}

TEST_CASE("non-minimal boundary: exit 1") {
    const Run r = run({"verify", "--model", "flat-exterior"});
    CHECK(r.code == 1);
    CHECK(r.out.find("hyp_minimal_boundary Fail") != std::string::npos);
}

TEST_CASE("thread cap from the environment") {
    setenv("CURVLAB_THREADS", "zero", 1);
    CHECK(run({"models"}).code == 2);
    setenv("CURVLAB_THREADS", "1", 1);
    const Run one = run({"verify", "--model", "perturbed-schwarzschild", "--grid", "32"});
    unsetenv("CURVLAB_THREADS");
    const Run many = run({"verify", "--model", "perturbed-schwarzschild", "--grid", "32"});
    CHECK(one.code == 0);
    CHECK(without_generated(one.out) == without_generated(many.out));
}

TEST_CASE("files under --out and saved runs") {
    const fs::path dir = testing::scratch_dir("cli_out");
    const std::vector<std::string> args = {"verify", "--model", "schwarzschild", "--grid", "32", "--out", dir.string(),
                                           "--save-report"};
    const Run first = run(args);
    CHECK(first.code == 0);
    CHECK(fs::exists(dir / "verify_report.txt"));
    CHECK(fs::exists(dir / "verify_report.csv"));
    int runs = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "runs")) ++runs;
    CHECK(runs == 1);
    CHECK(first.out.find("# saved=") != std::string::npos);
    CHECK(run(args).code == 0);

    CHECK(run({"functionals", "--model", "mollified-schwarzschild", "--grid", "16", "--out", dir.string()}).code == 0);
    std::ifstream csv(dir / "functionals.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,s,u,area,grad,H,R,Fhat,G,F,A1,A1tilde,a,B1,Fprime,Gprime,volume");
    CHECK(run({"potential", "--model", "euclidean", "--grid", "16", "--out", dir.string()}).code == 0);
    CHECK(fs::exists(dir / "potential.csv"));
    CHECK(run({"mass", "--model", "euclidean", "--out", dir.string(), "--save-report"}).code == 0);
    CHECK(fs::exists(dir / "mass.csv"));
}
