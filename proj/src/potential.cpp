#include "curvlab/potential.hpp"

#include <cmath>
#include <numbers>

#include "curvlab/format.hpp"

namespace curvlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

}  // namespace

PotentialSolution::PotentialSolution(MetricProfile profile, SolutionKind kind, double c_norm)
    : profile_(std::move(profile)), kind_(kind), c_norm_(c_norm) {}

PotentialSolution PotentialSolution::solve(MetricProfile profile) {
    const bool boundary = profile.kind() == ProfileKind::WithBoundary;
    PotentialSolution sol(std::move(profile), boundary ? SolutionKind::CapacitaryWithBoundary
                                                       : SolutionKind::GreenBoundaryless,
                          1.0);
    if (boundary) {
        const double total = sol.tail(sol.profile_.r_min());
        if (!std::isfinite(total) || !(total > 0.0)) {
            throw Error(ErrorCode::NonConvergent, sol.profile_.label() + ": capacitary integral diverges");
        }
        sol.c_norm_ = 1.0 / total;
    }

    // |grad u| has to vanish at infinity; sample a few decades out.
    const double base = std::max(1.0, sol.profile_.r_min());
    const double near = sol.grad(base * 10.0);
    double previous = near;
    bool decays = true;
    for (double r = base * 1e3; r <= base * 1e7; r *= 100.0) {
        const double g = sol.grad(r);
        decays = decays && g < previous;
        previous = g;
    }
    if (!decays || !(previous < 1e-6 * near)) {
        sol.warnings_.push_back("hypothesis unverified: |grad u| -> 0 at infinity is inconclusive");
    }
    return sol;
}

double PotentialSolution::capacity() const {
    if (!has_boundary()) throw Error(ErrorCode::WrongKind, "capacity needs a boundary");
    return c_norm_;
}

double PotentialSolution::capacity_bulk() const {
    if (!has_boundary()) throw Error(ErrorCode::WrongKind, "capacity needs a boundary");
    const auto integrand = [this](double r) {
        const ChartSample c = profile_.chart(r);
        const double g = c_norm_ / (c.f * c.f);
        return g * g * kFourPi * c.f * c.f * c.a;
    };
    return numerics::integrate_split(integrand, profile_.r_min(), numerics::kInf, profile_.breakpoints(),
                                     tail_tolerance())
               .value /
           kFourPi;
}

double PotentialSolution::t_min() const { return has_boundary() ? 0.5 * c_norm_ : 0.0; }

double PotentialSolution::tail(double r) const {
    profile_.require_in_domain(r);
    if (!has_boundary() && r == 0.0) return numerics::kInf;
    return numerics::integrate_split(
               [this](double x) {
                   const ChartSample c = profile_.chart(x);
                   return c.a / (c.f * c.f);
               },
               r, numerics::kInf, profile_.breakpoints(), tail_tolerance())
        .value;
}

double PotentialSolution::tail_derivative(double r) const {
    const ChartSample c = profile_.chart(r);
    return -c.a / (c.f * c.f);
}

double PotentialSolution::one_minus_u(double r) const { return c_norm_ * tail(r); }

double PotentialSolution::u(double r) const { return 1.0 - one_minus_u(r); }

double PotentialSolution::grad(double r) const {
    const double f = profile_.warp(r);
    return c_norm_ / (f * f);
}

double PotentialSolution::t_of_r(double r) const {
    // WithBoundary: t = (C/2)(1 + u)/(1 - u) = 1/Phi - C/2; boundaryless: t = 1/Phi.
    const double phi = tail(r);
    return has_boundary() ? 1.0 / phi - 0.5 * c_norm_ : 1.0 / phi;
}

LevelParam PotentialSolution::level(double t) const {
    LevelParam out;
    out.t = t;
    out.r = level_radius(t);
    if (has_boundary()) {
        out.u = out.r == profile_.r_min() ? 0.0 : (2.0 * t - c_norm_) / (2.0 * t + c_norm_);
    } else {
        out.u = 1.0 - 1.0 / t;
    }
    out.s = out.r == profile_.r_min() ? 0.0 : profile_.arclength(out.r);
    return out;
}

double PotentialSolution::level_radius(double t) const {
    const double t0 = t_min();
    if (!std::isfinite(t) || (has_boundary() ? t < t0 * (1.0 - 1e-14) : !(t > 0.0))) {
        throw Error(ErrorCode::OutOfRange, "level t = " + format_double(t) + " below the admissible range");
    }
    const double target = has_boundary() ? 1.0 / (t + t0) : 1.0 / t;
    if (has_boundary() && t <= t0 * (1.0 + 1e-14)) return profile_.r_min();

    // Bracket: tail is strictly decreasing in r.
    double lo;
    double hi;
    if (has_boundary()) {
        lo = profile_.r_min();
        hi = std::max(2.0 * lo, 1.0 / target);
        while (tail(hi) > target) {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        hi = t;
        while (tail(hi) > target) hi *= 2.0;
        lo = 0.5 * hi;
        while (tail(lo) < target) {
            hi = lo;
            lo *= 0.5;
        }
    }
    const double log_target = std::log(target);
    double r = numerics::find_root([&](double x) { return std::log(tail(x)) - log_target; }, lo, hi,
                                   {1e-15, 0.0, 1});
    // Brent stops on bracket width; one Newton step removes the remaining slack.
    const double newton = r - (tail(r) - target) / tail_derivative(r);
    if (newton >= lo && newton <= hi) r = newton;
    return r;
}

LevelSetSample PotentialSolution::sample_at(double r, double t) const {
    profile_.require_in_domain(r);
    const ChartSample c = profile_.chart(r);
    LevelSetSample out;
    out.t = t;
    out.r = r;
    if (has_boundary()) {
        out.u = (2.0 * t - c_norm_) / (2.0 * t + c_norm_);
        out.one_minus_u = 2.0 * c_norm_ / (2.0 * t + c_norm_);
    } else {
        out.u = 1.0 - 1.0 / t;
        out.one_minus_u = 1.0 / t;
    }
    const double f2 = c.f * c.f;
    const double fs = c.df / c.a;
    out.f = c.f;
    out.ds_defect = profile_.warp_ds_defect(r);
    out.area = kFourPi * f2;
    out.grad = c_norm_ / f2;
    out.mean_curvature = 2.0 * fs / c.f;
    out.scalar_curvature = scalar_curvature(profile_, r);
    out.sigma_curvature = 2.0 / f2;
    out.int_grad = out.area * out.grad;
    out.int_grad2 = out.area * out.grad * out.grad;
    out.int_grad_h = out.area * out.grad * out.mean_curvature;
    out.int_inv_grad = out.area / out.grad;
    out.int_R = out.area * out.scalar_curvature;
    out.int_sigma_curvature = out.area * out.sigma_curvature;
    return out;
}

LevelSetSample PotentialSolution::level_integrals(double t) const {
    const LevelParam p = level(t);
    LevelSetSample out = sample_at(p.r, t);
    out.s = p.s;
    out.u = p.u;
    return out;
}

std::vector<double> PotentialSolution::default_grid(int points, double min_factor, double max_factor) const {
    if (points < 2) throw Error(ErrorCode::GridTooCoarse, "grid needs at least two points");
    const double t0 = 0.5 * c_norm_;
    return numerics::geometric_grid(min_factor * t0, max_factor * 2.0 * t0, points);
}

}  // namespace curvlab
