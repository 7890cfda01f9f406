#include "curvlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curvlab/format.hpp"
#include "parallel.hpp"

namespace curvlab::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Semantics { Inequality, Identity };

class Accumulator {
public:
    Accumulator(std::string name, double tol, Semantics semantics)
        : name_(std::move(name)), tol_(tol), semantics_(semantics) {}

    void add(double margin, double t) {
        ++count_;
        if (std::isnan(margin)) margin = -kInf;
        if (margin < worst_ || count_ == 1) {
            worst_ = margin;
            worst_t_ = t;
        }
        max_abs_ = std::max(max_abs_, std::abs(margin));
    }

    // Identity discrepancy, already relative.
    void add_identity(double discrepancy, double t) { add(0.0 - std::abs(discrepancy), t); }

    void skip(std::string reason) { skip_reason_ = std::move(reason); }
    void note(std::string text) { note_ = std::move(text); }

    CheckResult finish() const {
        CheckResult r;
        r.name = name_;
        r.tolerance_used = tol_;
        r.note = note_;
        if (!skip_reason_.empty() || count_ == 0) {
            r.status = Status::Skipped;
            r.worst_margin = kNaN;
            r.worst_t = kNaN;
            if (!skip_reason_.empty()) r.note = skip_reason_;
            return r;
        }
        r.worst_margin = worst_;
        r.worst_t = worst_t_;
        if (worst_ < -tol_) {
            r.status = Status::Fail;
        } else if (semantics_ == Semantics::Inequality && max_abs_ <= tol_) {
            r.status = Status::EqualityDetected;
        } else {
            r.status = Status::Pass;
        }
        return r;
    }

private:
    std::string name_;
    double tol_;
    Semantics semantics_;
    double worst_ = 0.0;
    double worst_t_ = 0.0;
    double max_abs_ = 0.0;
    std::size_t count_ = 0;
    std::string skip_reason_;
    std::string note_;
};

void validate_grid(const PotentialSolution& sol, const std::vector<double>& grid) {
    if (grid.size() < 8) {
        throw Error(ErrorCode::GridTooCoarse, "battery needs at least 8 grid points, got " + std::to_string(grid.size()));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw Error(ErrorCode::InvalidInput, "non-finite grid point");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidInput, "grid must be strictly increasing");
    }
    const double lo = sol.t_min();
    if (sol.has_boundary() ? grid.front() < lo * (1.0 - 1e-14) : !(grid.front() > 0.0)) {
        throw Error(ErrorCode::OutOfRange, "grid starts below the admissible range");
    }
}

struct Hypotheses {
    bool r_nonneg = true;
    double min_R = 0.0;
    double argmin_R = 0.0;
    double R_scale = 1.0;
    bool minimal_boundary = true;
    double boundary_fs = 0.0;
    bool decay_verified = true;
};

Hypotheses examine(const PotentialSolution& sol, const BatteryTolerances& tol) {
    const MetricProfile& p = sol.profile();
    Hypotheses h;
    const CurvatureScan scan = scan_scalar_curvature(p, 1000);
    h.min_R = scan.min_value;
    h.argmin_R = scan.argmin;
    h.R_scale = std::max(1.0, scan.max_abs);
    h.r_nonneg = h.min_R >= -tol.curvature * h.R_scale;
    if (sol.has_boundary()) {
        h.boundary_fs = p.warp_ds(p.r_min());
        h.minimal_boundary = std::abs(h.boundary_fs) <= tol.minimal_boundary;
    }
    h.decay_verified = sol.warnings().empty();
    return h;
}

struct Derivatives {
    std::vector<double> G, F, a;
};

Derivatives numeric_derivatives(const PotentialSolution& sol, const std::vector<double>& grid, bool with_riccati) {
    const double c = sol.capacity();
    const double deficit = functionals::boundary_deficit(sol);
    const numerics::Domain domain{sol.t_min(), kInf};
    auto values = [&](double t) {
        return functionals::boundary_values(sol.level_integrals(t), c, deficit);
    };
    const numerics::Function g = [&](double t) { return values(t).G; };
    const numerics::Function f = [&](double t) { return values(t).F; };
    const numerics::Function a = [&](double t) { return values(t).a_growth; };

    Derivatives d;
    const std::size_t n = grid.size();
    d.G.assign(n, kNaN);
    d.F.assign(n, kNaN);
    d.a.assign(n, kNaN);
    detail::parallel_for(n, [&](std::size_t i) {
        const double t = grid[i];
        if (i > 0 && i + 1 < n) {
            const double h = numerics::default_step(t);
            d.G[i] = numerics::differentiate(g, t, h, domain).value;
            d.F[i] = numerics::differentiate(f, t, h, domain).value;
        }
        // a(t) carries more cancellation than G or F, so a wider stencil.
        if (with_riccati) d.a[i] = numerics::differentiate(a, t, 1e-3 * t, domain).value;
    });
    return d;
}

double schwarzschild_volume(double c, double t) {
    if (t <= 0.5 * c) return 0.0;
    return numerics::integrate(
               [c](double s) {
                   const double q = 1.0 + c / (2.0 * s);
                   const double q2 = q * q;
                   return 4.0 * kPi * s * s * q2 * q2 * q2;
               },
               0.5 * c, t, {1e-13, 0.0, 400})
        .value;
}

void append_hypothesis_checks(VerificationReport& report, const Hypotheses& h, const PotentialSolution& sol,
                              const BatteryTolerances& tol) {
    Accumulator curvature("hyp_R_nonnegative", tol.curvature, Semantics::Inequality);
    curvature.add(h.min_R / h.R_scale, h.argmin_R);
    curvature.note("min over chart radius");
    report.checks.push_back(curvature.finish());

    if (sol.has_boundary()) {
        Accumulator minimal("hyp_minimal_boundary", tol.minimal_boundary, Semantics::Identity);
        minimal.add_identity(h.boundary_fs, sol.profile().r_min());
        report.checks.push_back(minimal.finish());
    }

    Accumulator decay("hyp_gradient_decay", tol.inequality, Semantics::Identity);
    if (h.decay_verified) {
        decay.add_identity(0.0, kInf);
    } else {
        decay.skip("hypothesis unverified");
    }
    report.checks.push_back(decay.finish());
}

void boundary_battery(VerificationReport& report, const PotentialSolution& sol, const std::vector<double>& grid,
                      const BatteryTolerances& tol, const Hypotheses& hyp) {
    const functionals::FunctionalSeries s = functionals::evaluate_series(sol, grid);
    const double c = s.capacity;
    const double A = s.deficit_A;
    const std::size_t n = grid.size();
    const bool theorem = hyp.minimal_boundary;
    const std::string skip_reason = "boundary not minimal";
    const MetricProfile& p = sol.profile();

    // (a) boundary gradient integral estimate.
    const LevelSetSample boundary = sol.sample_at(p.r_min(), 0.5 * c);
    Accumulator a("a_boundary_gradient", tol.inequality, Semantics::Inequality);
    a.add((kPi - boundary.int_grad2) / kPi, 0.5 * c);

    // (b) A1 <= 4 pi.
    Accumulator b("b_A1_bound", tol.inequality, Semantics::Inequality);
    // (c) area comparison.
    Accumulator cc("c_area_comparison", tol.inequality, Semantics::Inequality);
    // (e) volume comparison; both sides vanish at t = C/2.
    Accumulator e("e_volume_comparison", tol.inequality, Semantics::Inequality);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        const double q = 1.0 + c / (2.0 * t);
        b.add((4.0 * kPi - s.A1[i]) / (4.0 * kPi), t);
        const double area_bound = 4.0 * kPi * t * t * q * q * q * q;
        cc.add((s.area[i] - area_bound) / area_bound, t);
        const double vol_bound = schwarzschild_volume(c, t);
        if (vol_bound > 0.0) e.add((s.volume[i] - vol_bound) / vol_bound, t);
    }

    // (d) area-capacity inequality.
    Accumulator d("d_area_capacity", tol.inequality, Semantics::Inequality);
    d.add((std::sqrt(boundary.area / (16.0 * kPi)) - c) / c, 0.5 * c);

    // Monotonicity and sign of G, normalized by pi C^2 / t.
    Accumulator g_mono("G_monotone", tol.inequality, Semantics::Inequality);
    Accumulator g_sign("G_nonpositive", tol.inequality, Semantics::Inequality);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = kPi * c * c / grid[i];
        g_sign.add(-s.G[i] / scale, grid[i]);
        if (i + 1 < n) g_mono.add((s.G[i + 1] - s.G[i]) / scale, grid[i + 1]);
    }
    if (!hyp.decay_verified) g_mono.note("hypothesis unverified");

    Accumulator deficit_sign("deficit_nonnegative", tol.inequality, Semantics::Inequality);
    deficit_sign.add(A / (2.0 * kPi * c), 0.5 * c);

    for (Accumulator* acc : {&a, &b, &cc, &d, &e, &g_mono, &g_sign, &deficit_sign}) {
        if (!theorem) acc->skip(skip_reason);
        report.checks.push_back(acc->finish());
    }

    // Identities.
    Accumulator id_a1("identity_A1_G", tol.identity_algebraic, Semantics::Identity);
    Accumulator id_f("identity_F_Gprime", tol.identity_relation, Semantics::Identity);
    Accumulator id_flux("identity_flux", tol.identity_relation, Semantics::Identity);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        const double a1_from_g = 4.0 * kPi + 4.0 * t * s.G[i] / (c * c);
        id_a1.add_identity((s.A1[i] - a1_from_g) / std::max(std::abs(s.A1[i]), 4.0 * kPi), t);
        const double f_from_g = 4.0 * t * t * t * s.Gprime_analytic[i] / (c * c);
        id_f.add_identity((s.F[i] - f_from_g) / std::max(std::abs(s.F[i]), 4.0 * kPi * t), t);
        id_flux.add_identity((s.levels[i].int_grad - 4.0 * kPi * c) / (4.0 * kPi * c), t);
    }

    const Derivatives nd = numeric_derivatives(sol, grid, theorem);
    Accumulator dg("derivative_G", tol.identity_derivative, Semantics::Identity);
    Accumulator df("derivative_F", tol.identity_derivative, Semantics::Identity);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double t = grid[i];
        const double g_scale = std::max(std::abs(s.Gprime_analytic[i]), kPi * c * c / (t * t));
        dg.add_identity((nd.G[i] - s.Gprime_analytic[i]) / g_scale, t);
        const double f_scale = std::max(std::abs(s.Fprime_analytic[i]), 4.0 * kPi);
        df.add_identity((nd.F[i] - s.Fprime_analytic[i]) / f_scale, t);
    }
    for (Accumulator* acc : {&id_a1, &id_f, &id_flux, &dg, &df}) report.checks.push_back(acc->finish());

    // Proposition inequalities; absolute margins.
    Accumulator cs("cauchy_schwarz", tol.proposition, Semantics::Inequality);
    Accumulator fp("F_prime_half_B1", tol.proposition, Semantics::Inequality);
    Accumulator ric("riccati", tol.riccati, Semantics::Inequality);
    Accumulator st1("step1_A1", tol.step1, Semantics::Inequality);
    Accumulator st1t("step1_A1tilde", tol.step1, Semantics::Inequality);
    Accumulator inv("inverse_gradient_bound", tol.inequality, Semantics::Inequality);

    std::vector<double> cumulative;
    if (theorem) {
        std::vector<double> nodes = grid;
        const bool prepend = grid.front() > sol.t_min();
        if (prepend) nodes.insert(nodes.begin(), sol.t_min());
        cumulative = functionals::cumulative_r1_b1(sol, nodes);
        if (prepend) cumulative.erase(cumulative.begin());
    }

    for (std::size_t i = 0; theorem && i < n; ++i) {
        const double t = grid[i];
        const double ta1p = t * s.A1prime[i];
        cs.add((2.0 / 3.0) * s.A1[i] * s.B1[i] - ta1p * ta1p, t);
        fp.add(s.Fprime_analytic[i] - 0.5 * s.B1[i], t);
        const double a = s.a_growth[i];
        ric.add(nd.a[i] - (1.0 - 4.0 * kPi / s.A1[i] - 0.25 * a * a) / t, t);
        const double integral = cumulative[i] / (2.0 * t);
        if (A >= 0.0) st1.add(ta1p - (s.A1[i] - 4.0 * kPi) - integral, t);
        // t A1~' = t A1' - A / (2t).
        st1t.add(ta1p - A / (2.0 * t) - (s.A1tilde[i] - 4.0 * kPi) - integral, t);
        const double q = 1.0 + c / (2.0 * t);
        const double bound = 4.0 * kPi * t * t * q * q * q * q * q * q;
        const double lhs = c / (t * t) / (q * q) * s.levels[i].int_inv_grad;
        inv.add((lhs - bound) / bound, t);
    }
    if (theorem && A < 0.0) st1.skip("deficit negative");
    for (Accumulator* acc : {&cs, &fp, &ric, &st1, &st1t, &inv}) {
        if (!theorem) acc->skip(skip_reason);
        report.checks.push_back(acc->finish());
    }
}

void boundaryless_battery(VerificationReport& report, const PotentialSolution& sol,
                          const std::vector<double>& grid, const BatteryTolerances& tol, const Hypotheses& hyp) {
    const functionals::FunctionalSeries s = functionals::evaluate_series(sol, grid);
    const std::size_t n = grid.size();

    Accumulator area("area_comparison", tol.inequality, Semantics::Inequality);
    Accumulator vol("volume_comparison", tol.inequality, Semantics::Inequality);
    Accumulator mono("Fhat_monotone", tol.inequality, Semantics::Inequality);
    Accumulator sign("Fhat_nonpositive", tol.inequality, Semantics::Inequality);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        const double area_bound = 4.0 * kPi * t * t;
        area.add((s.area[i] - area_bound) / area_bound, t);
        const double vol_bound = 4.0 / 3.0 * kPi * t * t * t;
        vol.add((s.volume[i] - vol_bound) / vol_bound, t);
        const double scale = 4.0 * kPi / t;
        sign.add(-s.Fhat[i] / scale, t);
        if (i + 1 < n) mono.add((s.Fhat[i + 1] - s.Fhat[i]) / scale, grid[i + 1]);
    }
    if (!hyp.decay_verified) mono.note("hypothesis unverified");

    Accumulator flux("identity_flux", tol.identity_relation, Semantics::Identity);
    Accumulator inv("inverse_gradient_bound", tol.inequality, Semantics::Inequality);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        flux.add_identity((s.levels[i].int_grad - 4.0 * kPi) / (4.0 * kPi), t);
        const double bound = 4.0 * kPi * t * t * t * t;
        inv.add((s.levels[i].int_inv_grad - bound) / bound, t);
    }
    for (Accumulator* acc : {&area, &vol, &mono, &sign, &flux, &inv}) report.checks.push_back(acc->finish());
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaMismatch, "malformed number '" + text + "'");
    }
    if (used != text.size()) throw Error(ErrorCode::SchemaMismatch, "malformed number '" + text + "'");
    return value;
}

}  // namespace

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Pass: return "Pass";
        case Status::Fail: return "Fail";
        case Status::EqualityDetected: return "EqualityDetected";
        case Status::Skipped: return "Skipped";
    }
    return "?";
}

Status status_from_string(std::string_view text) {
    for (Status s : {Status::Pass, Status::Fail, Status::EqualityDetected, Status::Skipped}) {
        if (to_string(s) == text) return s;
    }
    throw Error(ErrorCode::SchemaMismatch, "unknown status '" + std::string(text) + "'");
}

bool VerificationReport::any_fail() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::Fail; });
}

bool VerificationReport::hypothesis_flagged() const {
    return std::any_of(annotations.begin(), annotations.end(),
                       [](const std::string& a) { return a.rfind("hypothesis violated", 0) == 0; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
    for (const CheckResult& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

BatteryTolerances BatteryTolerances::from(const numerics::Tolerance& tol) {
    tol.validate();
    const double k = tol.rel / 1e-10;
    BatteryTolerances out;
    if (k == 0.0) return out;
    out.inequality *= k;
    out.identity_algebraic *= k;
    out.identity_relation *= k;
    out.identity_derivative *= k;
    out.proposition *= k;
    out.riccati *= k;
    out.step1 *= k;
    out.curvature *= k;
    out.minimal_boundary *= k;
    return out;
}

double deficit(const PotentialSolution& sol) { return functionals::boundary_deficit(sol); }

VerificationReport run_battery(const PotentialSolution& sol, const std::vector<double>& t_grid,
                               const BatteryTolerances& tol) {
    validate_grid(sol, t_grid);
    const Hypotheses hyp = examine(sol, tol);

    VerificationReport report;
    report.profile_label = sol.profile().label();
    report.kind = std::string(to_string(sol.profile().kind()));
    report.capacity = sol.has_boundary() ? sol.capacity() : kNaN;
    report.r_nonneg_confirmed = hyp.r_nonneg;
    report.min_scalar_curvature = hyp.min_R;

    if (!hyp.r_nonneg) {
        report.annotations.push_back("hypothesis violated: scalar curvature negative, min R = " +
                                     format_double(hyp.min_R) + " at r = " + format_double(hyp.argmin_R));
    }
    if (!hyp.minimal_boundary) {
        report.annotations.push_back("hypothesis violated: boundary not minimal, f_s = " +
                                     format_double(hyp.boundary_fs));
    }
    for (const std::string& w : sol.warnings()) report.annotations.push_back(w);

    if (sol.has_boundary()) {
        boundary_battery(report, sol, t_grid, tol, hyp);
    } else {
        boundaryless_battery(report, sol, t_grid, tol, hyp);
    }
    append_hypothesis_checks(report, hyp, sol, tol);
    return report;
}

void write_report_text(std::ostream& out, const VerificationReport& report) {
    out << "report=verification\n";
    out << "profile=" << report.profile_label << '\n';
    out << "kind=" << report.kind << '\n';
    out << "capacity=" << format_double(report.capacity) << '\n';
    out << "r_nonneg_confirmed=" << (report.r_nonneg_confirmed ? "true" : "false") << '\n';
    out << "min_scalar_curvature=" << format_double(report.min_scalar_curvature) << '\n';
    for (const std::string& a : report.annotations) out << "annotation=" << a << '\n';
    for (const CheckResult& c : report.checks) {
        if (!c.note.empty()) out << "note=" << c.name << ": " << c.note << '\n';
    }
    for (const CheckResult& c : report.checks) {
        out << c.name << ' ' << to_string(c.status) << ' ' << format_double(c.worst_margin) << ' '
            << format_double(c.worst_t) << ' ' << format_double(c.tolerance_used) << '\n';
    }
}

void write_report_csv(std::ostream& out, const VerificationReport& report) {
    out << "name,status,worst_margin,worst_t,tol,note\n";
    for (const CheckResult& c : report.checks) {
        out << c.name << ',' << to_string(c.status) << ',' << format_double(c.worst_margin) << ','
            << format_double(c.worst_t) << ',' << format_double(c.tolerance_used) << ',' << c.note << '\n';
    }
}

VerificationReport parse_report_text(const std::string& text) {
    VerificationReport report;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    std::vector<std::pair<std::string, std::string>> notes;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            if (line != "report=verification") throw Error(ErrorCode::SchemaMismatch, "not a verification report");
            first = false;
            continue;
        }
        const auto eq = line.find('=');
        const auto sp = line.find(' ');
        if (eq != std::string::npos && (sp == std::string::npos || eq < sp)) {
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key == "profile") {
                report.profile_label = value;
            } else if (key == "kind") {
                report.kind = value;
            } else if (key == "capacity") {
                report.capacity = parse_number(value);
            } else if (key == "r_nonneg_confirmed") {
                if (value != "true" && value != "false") throw Error(ErrorCode::SchemaMismatch, "bad boolean");
                report.r_nonneg_confirmed = value == "true";
            } else if (key == "min_scalar_curvature") {
                report.min_scalar_curvature = parse_number(value);
            } else if (key == "annotation") {
                report.annotations.push_back(value);
            } else if (key == "note") {
                const auto colon = value.find(": ");
                if (colon == std::string::npos) throw Error(ErrorCode::SchemaMismatch, "bad note line");
                notes.emplace_back(value.substr(0, colon), value.substr(colon + 2));
            } else {
                throw Error(ErrorCode::SchemaMismatch, "unknown report key '" + key + "'");
            }
            continue;
        }
        std::istringstream fields(line);
        std::string name, status, margin, t, tol, extra;
        if (!(fields >> name >> status >> margin >> t >> tol) || (fields >> extra)) {
            throw Error(ErrorCode::SchemaMismatch, "malformed check line '" + trim(line) + "'");
        }
        CheckResult c;
        c.name = name;
        c.status = status_from_string(status);
        c.worst_margin = parse_number(margin);
        c.worst_t = parse_number(t);
        c.tolerance_used = parse_number(tol);
        report.checks.push_back(std::move(c));
    }
    if (first) throw Error(ErrorCode::SchemaMismatch, "empty report");
    for (const auto& [name, note] : notes) {
        auto it = std::find_if(report.checks.begin(), report.checks.end(),
                               [&](const CheckResult& c) { return c.name == name; });
        if (it == report.checks.end()) throw Error(ErrorCode::SchemaMismatch, "note for unknown check " + name);
        it->note = note;
    }
    return report;
}

}  // namespace curvlab::verify
