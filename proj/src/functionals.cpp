#include "curvlab/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace curvlab::functionals {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_boundary(const PotentialSolution& sol, const char* what) {
    if (!sol.has_boundary()) throw Error(ErrorCode::WrongKind, std::string(what) + " needs a boundary");
}

void require_boundaryless(const PotentialSolution& sol, const char* what) {
    if (sol.has_boundary()) throw Error(ErrorCode::WrongKind, std::string(what) + " needs a boundaryless model");
}

LevelValues boundary_at(const PotentialSolution& sol, double t, const char* what) {
    require_boundary(sol, what);
    return boundary_values(sol.level_integrals(t), sol.capacity(), boundary_deficit(sol));
}

}  // namespace

double b_density_reduced(const LevelSetSample& s) {
    // 1 - u^2 = (1 - u)(1 + u), with 1 - u carried exactly.
    const double one_minus_u2 = s.one_minus_u * (2.0 - s.one_minus_u);
    const double k = 4.0 * s.u / one_minus_u2 * s.grad - s.mean_curvature;
    return 0.75 * k * k;
}

LevelValues boundary_values(const LevelSetSample& s, double capacity, double deficit) {
    const double c = capacity;
    const double t = s.t;
    const double x = c / (2.0 * t);
    const double p = 1.0 + x;
    const double p2 = p * p;
    const double p3 = p2 * p;
    const double p4 = p2 * p2;
    const double i2 = s.int_grad2;
    const double ih = s.int_grad_h;

    LevelValues v;
    v.fhat = kNaN;
    v.G = -kPi * c * c / t + 0.25 * t * p4 * i2;
    v.Gprime = kPi * c * c / (t * t) + 0.25 * p3 * (1.0 - 3.0 * x) * i2 - (c / (4.0 * t)) * p2 * ih;
    // F = 4 pi t [1 + rho^2 (1 - 3x)/p - 2 rho f_s] with rho = t p^2 / f; the bracket
    // rearranged so its O(1) parts cancel analytically.
    const double rho = t * p2 / s.f;
    const double delta = 1.0 - rho;
    v.F = 4.0 * kPi * t * (delta * delta + 2.0 * rho * s.ds_defect - 4.0 * x * rho * rho / p);
    v.A1 = (t * t / (c * c)) * p4 * i2;
    v.A1tilde = v.A1 + deficit / (2.0 * t);
    v.A1prime = (2.0 * t / (c * c)) * p3 * (1.0 - x) * i2 - (1.0 / c) * p2 * ih;
    v.a_growth = t * v.A1prime / v.A1;
    v.B1 = 2.0 * s.area * b_density_reduced(s);
    v.R1 = s.int_R;
    v.Fprime = 4.0 * kPi - 0.5 * s.int_sigma_curvature + 0.5 * s.int_R + 0.5 * v.B1;
    return v;
}

LevelValues boundaryless_values(const LevelSetSample& s) {
    LevelValues v;
    v.fhat = -4.0 * kPi / s.t + s.t * s.int_grad2;
    v.G = v.F = v.A1 = v.A1tilde = v.A1prime = v.a_growth = v.B1 = v.Fprime = v.Gprime = kNaN;
    v.R1 = s.int_R;
    return v;
}

double fhat(const PotentialSolution& sol, double t) {
    require_boundaryless(sol, "Fhat");
    return boundaryless_values(sol.level_integrals(t)).fhat;
}

double g_func(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "G").G; }
double g_prime(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "G'").Gprime; }
double f_func(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "F").F; }
double f_prime_analytic(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "F'").Fprime; }
double a1(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "A1").A1; }
double a1_tilde(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "A1~").A1tilde; }
double a1_prime(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "A1'").A1prime; }
double b1(const PotentialSolution& sol, double t) { return boundary_at(sol, t, "B1").B1; }

double a_growth(const PotentialSolution& sol, double t) {
    const LevelValues v = boundary_at(sol, t, "a");
    if (!(v.A1 > 0.0)) throw Error(ErrorCode::OutOfRange, "growth rate needs A1 > 0");
    return v.a_growth;
}

double boundary_deficit(const PotentialSolution& sol) {
    require_boundary(sol, "deficit");
    const double c = sol.capacity();
    const LevelSetSample s = sol.sample_at(sol.profile().r_min(), 0.5 * c);
    return 2.0 * c * (kPi - s.int_grad2);
}

double volume_sublevel(const PotentialSolution& sol, double t) {
    const MetricProfile& p = sol.profile();
    const double r = sol.level_radius(t);
    if (r == p.r_min()) return 0.0;
    return numerics::integrate_split(
               [&p](double x) {
                   const ChartSample c = p.chart(x);
                   return 4.0 * kPi * c.f * c.f * c.a;
               },
               p.r_min(), r, p.breakpoints(), {1e-13, 0.0, 400})
        .value;
}

double volume_sublevel_coarea(const PotentialSolution& sol, double t) {
    const double t0 = sol.t_min();
    if (sol.has_boundary() ? t < t0 : !(t > 0.0)) throw Error(ErrorCode::OutOfRange, "level below range");
    const double c = sol.flux_scale();
    const bool boundary = sol.has_boundary();
    auto integrand = [&](double level) {
        const LevelSetSample s = sol.sample_at(sol.level_radius(level), level);
        const double speed = boundary ? c / (level * level * (1.0 + c / (2.0 * level)) * (1.0 + c / (2.0 * level)))
                                      : 1.0 / (level * level);
        return speed * s.int_inv_grad;
    };
    return numerics::integrate(integrand, t0, t, {1e-11, 0.0, 200}).value;
}

}  // namespace curvlab::functionals
