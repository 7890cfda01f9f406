#include "curvlab/mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvlab/format.hpp"
#include "curvlab/functionals.hpp"
#include "parallel.hpp"

namespace curvlab::mass {

namespace {

constexpr double kPi = std::numbers::pi;

// Value at x = 0 of the interpolating polynomial through (x_i, y_i).
double neville_at_zero(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const std::size_t j = i + level;
            y[i] = (x[j] * y[i] - x[i] * y[i + 1]) / (x[j] - x[i]);
        }
    }
    return y[0];
}

void require_radii(const ConformalProfile& c, const std::vector<double>& radii) {
    if (radii.empty()) throw Error(ErrorCode::InvalidInput, "no radii given");
    const double core = std::max(c.r_min, c.harmonic_from.value_or(0.0));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > core) || !(radii[i] > 0.0)) {
            throw Error(ErrorCode::OutOfRange, "radius " + format_double(radii[i]) + " inside the core");
        }
        if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorCode::InvalidInput, "radii must increase");
    }
}

void require_boundaryless(const PotentialSolution& sol) {
    if (sol.has_boundary()) throw Error(ErrorCode::WrongKind, "mass estimators need a boundaryless model");
}

}  // namespace

double adm_flux(const ConformalProfile& c, double r) {
    const ConformalSample s = c(r);
    return -2.0 * r * r * s.w * s.w * s.w * s.dw;
}

double adm_surface(const ConformalProfile& c, const std::vector<double>& radii) {
    require_radii(c, radii);
    std::vector<double> x, flux, w;
    for (double r : radii) {
        x.push_back(1.0 / r);
        flux.push_back(adm_flux(c, r));
        w.push_back(c(r).w);
    }
    const double w_inf = neville_at_zero(x, w);
    return neville_at_zero(x, flux) / (w_inf * w_inf) + 0.0;
}

VolumeEstimate mass_from_volume(const PotentialSolution& sol, const std::vector<double>& t_samples) {
    require_boundaryless(sol);
    if (t_samples.size() < 2) throw Error(ErrorCode::GridTooCoarse, "need at least two volume samples");
    VolumeEstimate out;
    out.samples.resize(t_samples.size());
    detail::parallel_for(t_samples.size(), [&](std::size_t i) {
        const double t = t_samples[i];
        const double vol = functionals::volume_sublevel(sol, t);
        out.samples[i] = {t, (vol - 4.0 / 3.0 * kPi * t * t * t) / (4.0 * kPi * t * t)};
    });

    const double t_top = t_samples.back();
    std::vector<double> x, y;
    for (const MassSample& s : out.samples) {
        if (s.t >= 0.1 * t_top * (1.0 - 1e-12)) {
            x.push_back(s.t);
            y.push_back(s.m_est);
        }
    }
    if (x.size() < 2) throw Error(ErrorCode::GridTooCoarse, "fewer than two samples in the last decade");
    const numerics::InverseFit fit = numerics::fit_inverse(x, y);
    out.m_volume = fit.intercept;
    out.correction = fit.slope;
    return out;
}

std::vector<ResidualSample> expansion_residuals(const PotentialSolution& sol, double m,
                                                const std::vector<double>& radii) {
    require_boundaryless(sol);
    std::vector<ResidualSample> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        if (!(r > sol.profile().r_min())) throw Error(ErrorCode::OutOfRange, "radius at or below the pole");
        const double f = sol.profile().warp(r);
        const double q = sol.one_minus_u(r) * f;  // (1 - u) / sqrt|grad u|
        const double q2 = q * q;
        out[i] = {r, r * (q2 * q2 - 1.0 - 2.0 * m / r)};
    }
    return out;
}

double MassReport::min_sample() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const MassSample& s : samples) lo = std::min(lo, s.m_est);
    return lo;
}

MassReport compute_report(const PotentialSolution& sol, const MassOptions& options) {
    require_boundaryless(sol);
    const MetricProfile& p = sol.profile();
    if (!p.conformal()) throw Error(ErrorCode::WrongKind, p.label() + ": surface mass needs a conformal factor");

    MassReport report;
    report.profile_label = p.label();
    report.mass_tag = p.mass_tag();
    report.m_surface = adm_surface(*p.conformal(), options.adm_radii);
    const VolumeEstimate v = mass_from_volume(sol, options.t_samples);
    report.m_volume = v.m_volume;
    report.volume_correction = v.correction;
    report.samples = v.samples;
    report.expansion_residuals =
        expansion_residuals(sol, report.mass_tag.value_or(report.m_surface), options.residual_radii);

    std::vector<double> r, res;
    for (const ResidualSample& s : report.expansion_residuals) {
        if (s.residual != 0.0) {
            r.push_back(s.r);
            res.push_back(s.residual);
        }
    }
    report.residual_slope = r.size() >= 2 ? numerics::loglog_slope(r, res) : 0.0;
    return report;
}

void write_mass_csv(std::ostream& out, const MassReport& report) {
    out << "t,m_est\n";
    for (const MassSample& s : report.samples) out << format_double(s.t) << ',' << format_double(s.m_est) << '\n';
    out << "# profile=" << report.profile_label << '\n';
    out << "# mass_tag=" << (report.mass_tag ? format_double(*report.mass_tag) : "none") << '\n';
    out << "# m_surface=" << format_double(report.m_surface) << '\n';
    out << "# m_volume=" << format_double(report.m_volume) << '\n';
    out << "# volume_correction=" << format_double(report.volume_correction) << '\n';
    out << "# min_m_est=" << format_double(report.min_sample()) << '\n';
    out << "# residual_slope=" << format_double(report.residual_slope) << '\n';
}

void write_mass_summary(std::ostream& out, const MassReport& report) {
    out << "profile    " << report.profile_label << '\n';
    out << "mass_tag   " << (report.mass_tag ? format_double(*report.mass_tag) : "none") << '\n';
    out << "m_surface  " << format_double(report.m_surface) << '\n';
    out << "m_volume   " << format_double(report.m_volume) << "  (fit m + c/t, c = "
        << format_double(report.volume_correction) << ")\n";
    out << "min m_est  " << format_double(report.min_sample()) << " over " << report.samples.size()
        << " samples\n";
    out << "residual   slope " << format_double(report.residual_slope) << " over " << report.expansion_residuals.size()
        << " radii\n";
    for (const ResidualSample& s : report.expansion_residuals) {
        out << "  r=" << format_double(s.r) << " residual=" << format_double(s.residual) << '\n';
    }
}

}  // namespace curvlab::mass
