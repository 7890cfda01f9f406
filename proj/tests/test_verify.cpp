#include <doctest.h>

#include <cmath>
#include <sstream>

#include "curvlab/verify.hpp"

using namespace curvlab;
using namespace curvlab::verify;

namespace {

const char* const kTheoremChecks[] = {"a_boundary_gradient", "b_A1_bound", "c_area_comparison", "d_area_capacity",
                                      "e_volume_comparison"};

VerificationReport battery(const MetricProfile& p, int points = 64) {
    const PotentialSolution sol = PotentialSolution::solve(p);
    return run_battery(sol, sol.default_grid(points));
}

MetricProfile dented() {
    ConformalProfile c;
    c.factor = [](double r) {
        const double e = std::exp(-r * r);
        return ConformalSample{1.0 - 0.3 * e, 0.6 * r * e, 0.6 * e * (1.0 - 2.0 * r * r)};
    };
    c.label = "dent";
    c.assume_nonnegative_R = false;
    return to_warped(c);
}

void check_status_semantics(const VerificationReport& r) {
    for (const CheckResult& c : r.checks) {
        CAPTURE(c.name);
        if (c.status == Status::Skipped) continue;
        CHECK((c.status == Status::Fail) == (c.worst_margin < -c.tolerance_used));
        if (c.status == Status::EqualityDetected) CHECK(std::abs(c.worst_margin) <= c.tolerance_used);
    }
}

}  // namespace

TEST_CASE("schwarzschild: rigidity detected for every mass") {
    for (double m : {0.5, 1.0, 2.0, 5.0}) {
        CAPTURE(m);
        const VerificationReport r = battery(schwarzschild(m), 256);
        CHECK(r.r_nonneg_confirmed);
        CHECK_FALSE(r.any_fail());
        CHECK_FALSE(r.hypothesis_flagged());
        CHECK(r.capacity == doctest::Approx(m).epsilon(1e-12));
        for (const char* name : kTheoremChecks) {
            CAPTURE(name);
            REQUIRE(r.find(name) != nullptr);
            CHECK(r.find(name)->status == Status::EqualityDetected);
        }
        CHECK(r.find("G_nonpositive")->status == Status::EqualityDetected);
        CHECK(r.find("G_monotone")->status == Status::EqualityDetected);
        CHECK(r.find("deficit_nonnegative")->status == Status::EqualityDetected);
        check_status_semantics(r);
    }
}

TEST_CASE("boundary report lists every check exactly once") {
    const VerificationReport r = battery(schwarzschild(1.0));
    for (const char* name :
         {"a_boundary_gradient", "b_A1_bound", "c_area_comparison", "d_area_capacity", "e_volume_comparison",
          "G_monotone", "G_nonpositive", "deficit_nonnegative", "identity_A1_G", "identity_F_Gprime", "identity_flux",
          "derivative_G", "derivative_F", "cauchy_schwarz", "F_prime_half_B1", "riccati", "step1_A1", "step1_A1tilde",
          "inverse_gradient_bound", "hyp_R_nonnegative", "hyp_minimal_boundary", "hyp_gradient_decay"}) {
        int count = 0;
        for (const CheckResult& c : r.checks) count += c.name == name;
        CAPTURE(name);
        CHECK(count == 1);
    }
}

TEST_CASE("euclidean: comparisons saturate") {
    const VerificationReport r = battery(euclidean(), 256);
    CHECK(r.kind == "Boundaryless");
    CHECK_FALSE(r.any_fail());
    for (const char* name : {"area_comparison", "volume_comparison", "Fhat_nonpositive", "Fhat_monotone"}) {
        CAPTURE(name);
        REQUIRE(r.find(name) != nullptr);
        CHECK(r.find(name)->status == Status::EqualityDetected);
    }
    CHECK(r.find("b_A1_bound") == nullptr);
    check_status_semantics(r);
}

TEST_CASE("perturbed schwarzschild: strict inequalities") {
    const VerificationReport r = battery(to_warped(perturbed_schwarzschild(1.0, 0.5, 1.0)), 128);
    CHECK(r.r_nonneg_confirmed);
    CHECK_FALSE(r.any_fail());
    CHECK(r.find("b_A1_bound")->status == Status::Pass);
    CHECK(r.find("b_A1_bound")->worst_margin > 1e-6);
    CHECK(r.find("deficit_nonnegative")->status == Status::Pass);
    CHECK(r.find("a_boundary_gradient")->status == Status::Pass);
    for (const char* name : {"F_prime_half_B1", "riccati", "step1_A1", "step1_A1tilde", "cauchy_schwarz"}) {
        CAPTURE(name);
        CHECK(r.find(name)->status != Status::Fail);
        CHECK(r.find(name)->status != Status::Skipped);
    }
    check_status_semantics(r);
}

TEST_CASE("mollified schwarzschild: boundaryless checks pass") {
    const VerificationReport r = battery(to_warped(mollified_schwarzschild(1.0, 1.0)), 128);
    CHECK_FALSE(r.any_fail());
    CHECK(r.find("Fhat_monotone")->status == Status::Pass);
    CHECK(r.find("Fhat_nonpositive")->status == Status::Pass);
    check_status_semantics(r);
}

TEST_CASE("negative scalar curvature is reported, not asserted away") {
    const VerificationReport r = battery(dented());
    CHECK_FALSE(r.r_nonneg_confirmed);
    CHECK(r.min_scalar_curvature < 0.0);
    CHECK(r.hypothesis_flagged());
    REQUIRE_FALSE(r.annotations.empty());
    CHECK(r.annotations.front().rfind("hypothesis violated", 0) == 0);
    CHECK(r.find("hyp_R_nonnegative")->status == Status::Fail);
    CHECK(r.find("area_comparison") != nullptr);
}

TEST_CASE("non-minimal boundary: theorem checks skipped") {
    const VerificationReport r = battery(flat_exterior());
    CHECK(r.find("a_boundary_gradient")->status == Status::Skipped);
    CHECK(r.find("a_boundary_gradient")->note == "boundary not minimal");
    CHECK(r.find("hyp_minimal_boundary")->status == Status::Fail);
    CHECK(r.any_fail());
}

TEST_CASE("deficit values") {
    CHECK(std::abs(deficit(PotentialSolution::solve(schwarzschild(1.0)))) <= 1e-12);
    CHECK(std::abs(deficit(PotentialSolution::solve(schwarzschild(3.0)))) <= 1e-11);
    CHECK(deficit(PotentialSolution::solve(to_warped(perturbed_schwarzschild(1.0, 0.5, 1.0)))) >= -1e-9);
    CHECK_THROWS_AS(deficit(PotentialSolution::solve(euclidean())), Error);
}

TEST_CASE("battery is deterministic") {
    const MetricProfile p = to_warped(perturbed_schwarzschild(1.0, 0.5, 1.0));
    std::ostringstream a, b;
    write_report_text(a, battery(p));
    write_report_text(b, battery(p));
    CHECK(a.str() == b.str());
}

TEST_CASE("report text round trip") {
    const VerificationReport r = battery(dented());
    std::ostringstream out;
    write_report_text(out, r);
    const VerificationReport back = parse_report_text(out.str());
    CHECK(back.profile_label == r.profile_label);
    CHECK(back.kind == r.kind);
    CHECK(std::isnan(r.capacity));
    CHECK(std::isnan(back.capacity));
    CHECK(back.r_nonneg_confirmed == r.r_nonneg_confirmed);
    CHECK(back.min_scalar_curvature == r.min_scalar_curvature);
    CHECK(back.annotations == r.annotations);
    REQUIRE(back.checks.size() == r.checks.size());
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        CHECK(back.checks[i].name == r.checks[i].name);
        CHECK(back.checks[i].status == r.checks[i].status);
        CHECK(back.checks[i].worst_margin == r.checks[i].worst_margin);
        CHECK(back.checks[i].worst_t == r.checks[i].worst_t);
        CHECK(back.checks[i].tolerance_used == r.checks[i].tolerance_used);
        CHECK(back.checks[i].note == r.checks[i].note);
    }
    CHECK_THROWS_AS(parse_report_text("garbage"), Error);
    CHECK_THROWS_AS(parse_report_text("report=verification\nprofile=x\nx Maybe 1 2 3\n"), Error);
}

TEST_CASE("report csv header") {
    std::ostringstream out;
    write_report_csv(out, battery(schwarzschild(1.0), 16));
    CHECK(out.str().rfind("name,status,worst_margin,worst_t,tol,note\n", 0) == 0);
}

TEST_CASE("status names round trip") {
    for (Status s : {Status::Pass, Status::Fail, Status::EqualityDetected, Status::Skipped}) {
        CHECK(status_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(status_from_string("Maybe"), Error);
}

TEST_CASE("input validation") {
    const PotentialSolution sol = PotentialSolution::solve(schwarzschild(1.0));
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code_of([&] { run_battery(sol, sol.default_grid(4)); }) == ErrorCode::GridTooCoarse);
    std::vector<double> bad = sol.default_grid(16);
    std::swap(bad[3], bad[4]);
    CHECK(code_of([&] { run_battery(sol, bad); }) == ErrorCode::InvalidInput);
    std::vector<double> low = sol.default_grid(16);
    low.front() = 0.1;
    CHECK(code_of([&] { run_battery(sol, low); }) == ErrorCode::OutOfRange);
}

TEST_CASE("tolerances scale with the user tolerance") {
    numerics::Tolerance tol;
    tol.rel = 1e-8;
    const BatteryTolerances scaled = BatteryTolerances::from(tol);
    const BatteryTolerances base;
    CHECK(scaled.inequality == doctest::Approx(100.0 * base.inequality));
    CHECK(scaled.identity_algebraic == doctest::Approx(100.0 * base.identity_algebraic));
    tol.rel = 1e-10;
    CHECK(BatteryTolerances::from(tol).step1 == doctest::Approx(base.step1));
}
