#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "curvlab/functionals.hpp"

namespace curvlab::verify {

enum class Status { Pass, Fail, EqualityDetected, Skipped };

std::string_view to_string(Status status);
Status status_from_string(std::string_view text);

/// Inequality checks compare a normalized margin (>= 0 means the inequality
/// holds) against `tolerance_used`:
///   Fail             worst_margin < -tolerance_used
///   EqualityDetected |margin| <= tolerance_used at every grid point
///   Pass             otherwise
/// Identity checks carry -|relative discrepancy| as the margin and are either
/// Pass or Fail.
struct CheckResult {
    std::string name;
    Status status = Status::Skipped;
    double worst_margin = 0.0;
    double worst_t = 0.0;
    double tolerance_used = 0.0;
    std::string note;
};

struct VerificationReport {
    std::string profile_label;
    std::string kind;
    double capacity = 0.0;
    bool r_nonneg_confirmed = false;
    double min_scalar_curvature = 0.0;
    std::vector<std::string> annotations;
    std::vector<CheckResult> checks;

    bool any_fail() const;
    /// True when an annotation reports a violated hypothesis.
    bool hypothesis_flagged() const;
    const CheckResult* find(std::string_view name) const;
};

/// Tolerances applied by the battery. `inequality` is the uniform
/// equality-detection threshold for normalized margins.
struct BatteryTolerances {
    double inequality = 1e-8;
    double identity_algebraic = 1e-10;  // A1 = 4 pi + 4t G / C^2
    double identity_relation = 1e-9;    // F = 4 t^3 G' / C^2, flux constancy
    double identity_derivative = 1e-5;  // analytic vs central-difference derivatives
    double proposition = 1e-9;          // Cauchy-Schwarz chain, F' >= B1/2 (absolute)
    double riccati = 1e-8;              // a' >= (1 - 4 pi / A1 - a^2/4) / t (absolute)
    double step1 = 1e-8;                // Step-1 integral inequality (absolute)
    double curvature = 1e-10;           // R >= -curvature on the sampling grid
    double minimal_boundary = 1e-10;    // |H(dM)| tolerance

    /// Scales every threshold from the user tolerance (rel): inequality = 100 rel.
    static BatteryTolerances from(const numerics::Tolerance& tol);
};

/// Runs the full battery on `t_grid` (at least 8 points; GridTooCoarse otherwise).
/// Boundary solutions get Theorem checks (a)-(e), monotonicity and sign of G,
/// deficit sign, identities and the Proposition inequalities; boundaryless
/// solutions get the area/volume comparisons and Fhat checks.
VerificationReport run_battery(const PotentialSolution& sol, const std::vector<double>& t_grid,
                               const BatteryTolerances& tol = {});

/// Boundary deficit A = 2C (pi - int_{dM} |grad u|^2).
double deficit(const PotentialSolution& sol);

/// `name status worst_margin worst_t tol` per check after `key=value` header lines.
void write_report_text(std::ostream& out, const VerificationReport& report);
void write_report_csv(std::ostream& out, const VerificationReport& report);

/// Inverse of write_report_text. SchemaMismatch on malformed input.
VerificationReport parse_report_text(const std::string& text);

}  // namespace curvlab::verify
