#include "curvlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvlab/format.hpp"

namespace curvlab {

using numerics::Tolerance;

std::string_view to_string(ProfileKind kind) {
    return kind == ProfileKind::WithBoundary ? "WithBoundary" : "Boundaryless";
}

MetricProfile::MetricProfile(Chart chart, double r_min, ProfileKind kind, std::string label,
                             Options options)
    : chart_(std::move(chart)),
      r_min_(r_min),
      kind_(kind),
      label_(std::move(label)),
      options_(std::move(options)) {
    if (!(r_min_ >= 0.0)) throw Error(ErrorCode::InvalidInput, label_ + ": r_min must be >= 0");
    const ChartSample at_min = chart_(r_min_);
    if (kind_ == ProfileKind::WithBoundary) {
        if (!(at_min.f > 0.0)) {
            throw Error(ErrorCode::InvalidInput, label_ + ": boundary sphere must have positive radius");
        }
    } else {
        if (r_min_ != 0.0 || std::abs(at_min.f) > 1e-12 || std::abs(at_min.df / at_min.a - 1.0) > 1e-8) {
            throw Error(ErrorCode::InvalidInput, label_ + ": a pole needs f(0) = 0 and f'(0) = 1");
        }
    }

    Tolerance tol{1e-8, 0.0, 200};
    const double far = r_min_ + 1.0;
    const auto tail = numerics::integrate_split(
        [this](double r) {
            const ChartSample c = chart_(r);
            return c.a / (c.f * c.f);
        },
        far, numerics::kInf, options_.breakpoints, tol);
    if (!std::isfinite(tail.value)) {
        throw Error(ErrorCode::NonConvergent, label_ + ": profile is parabolic (tail of f^-2 diverges)");
    }

    if (options_.asymptotically_flat) {
        const double r_far = std::max(1.0, r_min_) * 1e6;
        const double ratio = warp(r_far) / arclength(r_far);
        if (std::abs(ratio - 1.0) > 0.05) {
            throw Error(ErrorCode::InvalidInput,
                        label_ + ": declared asymptotically flat but f/s = " + format_double(ratio));
        }
    }
}

MetricProfile MetricProfile::warped(std::function<double(double)> f, std::function<double(double)> df,
                                    std::function<double(double)> d2f, double s_min, ProfileKind kind,
                                    std::string label, Options options) {
    Chart chart = [f = std::move(f), df = std::move(df), d2f = std::move(d2f)](double s) {
        return ChartSample{f(s), df(s), d2f(s), 1.0, 0.0};
    };
    return MetricProfile(std::move(chart), s_min, kind, std::move(label), std::move(options));
}

double MetricProfile::warp_ds(double r) const {
    const ChartSample c = chart_(r);
    return c.df / c.a;
}

double MetricProfile::warp_ds_defect(double r) const {
    if (options_.conformal && r > 0.0) {
        const ConformalSample s = (*options_.conformal)(r);
        return -2.0 * r * s.dw / s.w;
    }
    return 1.0 - warp_ds(r);
}

double MetricProfile::warp_dss(double r) const {
    const ChartSample c = chart_(r);
    return (c.d2f * c.a - c.df * c.da) / (c.a * c.a * c.a);
}

double MetricProfile::arclength(double r) const {
    require_in_domain(r);
    Tolerance tol{1e-12, 0.0, 200};
    return numerics::integrate_split([this](double x) { return chart_(x).a; }, r_min_, r,
                                     options_.breakpoints, tol)
        .value;
}

void MetricProfile::require_in_domain(double r) const {
    if (!(r >= r_min_) || !std::isfinite(r)) {
        throw Error(ErrorCode::DomainEdge, label_ + ": radius " + format_double(r) + " outside the domain");
    }
}

MetricProfile schwarzschild(double m) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidInput, "schwarzschild mass must be positive");
    // f = r (1 + m/2r)^2 = r + m + m^2 / (4r), a = (1 + m/2r)^2.
    auto chart = [m](double r) {
        const double w = 1.0 + m / (2.0 * r);
        return ChartSample{r + m + m * m / (4.0 * r), 1.0 - m * m / (4.0 * r * r), m * m / (2.0 * r * r * r),
                           w * w, -m * w / (r * r)};
    };
    MetricProfile::Options options;
    options.mass_tag = m;
    options.conformal = schwarzschild_conformal(m);
    return MetricProfile(chart, 0.5 * m, ProfileKind::WithBoundary, "schwarzschild(m=" + format_double(m) + ")",
                         std::move(options));
}

MetricProfile euclidean() {
    MetricProfile::Options options;
    options.mass_tag = 0.0;
    options.conformal = euclidean_conformal();
    return MetricProfile([](double r) { return ChartSample{r, 1.0, 0.0, 1.0, 0.0}; }, 0.0,
                         ProfileKind::Boundaryless, "euclidean", std::move(options));
}

MetricProfile flat_exterior() {
    return MetricProfile::warped([](double s) { return s + 1.0; }, [](double) { return 1.0; },
                                 [](double) { return 0.0; }, 0.0, ProfileKind::WithBoundary,
                                 "flat-exterior(unit ball)");
}

ConformalProfile mollified_schwarzschild(double m, double r0) {
    if (!(m > 0.0) || !(r0 > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "mollified schwarzschild needs m > 0 and r0 > 0");
    }
    ConformalProfile c;
    c.factor = [m, r0](double r) {
        if (r < r0) {
            const double r03 = r0 * r0 * r0;
            return ConformalSample{1.0 + m * (3.0 * r0 * r0 - r * r) / (4.0 * r03), -m * r / (2.0 * r03),
                                   -m / (2.0 * r03)};
        }
        return ConformalSample{1.0 + m / (2.0 * r), -m / (2.0 * r * r), m / (r * r * r)};
    };
    c.r_min = 0.0;
    c.mass_tag = m;
    c.harmonic_from = r0;
    c.breakpoints = {r0};
    c.label = "mollified-schwarzschild(m=" + format_double(m) + ",r0=" + format_double(r0) + ")";
    return c;
}

ConformalProfile perturbed_schwarzschild(double m, double k, double b) {
    if (!(m > 0.0) || !(k >= 0.0) || !(b > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "perturbed schwarzschild needs m > 0, k >= 0, b > 0");
    }
    auto factor = [m, k, b](double r) {
        const double rho2 = r * r + b * b;
        const double rho = std::sqrt(rho2);
        const double rho3 = rho2 * rho;
        const double rho5 = rho3 * rho2;
        return ConformalSample{1.0 + m / (2.0 * r) + k / (2.0 * rho), -m / (2.0 * r * r) - k * r / (2.0 * rho3),
                               m / (r * r * r) + 0.5 * k * (2.0 * r * r - b * b) / rho5};
    };
    // d(r w^2)/dr = w (w + 2 r w'); the minimal sphere is the outermost zero of w + 2 r w'.
    auto expansion = [&factor](double r) {
        const ConformalSample s = factor(r);
        return s.w + 2.0 * r * s.dw;
    };
    double hi = 2.0 * (m + k + b);
    double lo = 0.5 * hi;
    while (expansion(lo) > 0.0) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-12 * m) throw Error(ErrorCode::NoBracket, "no minimal sphere found");
    }
    const double r_b = numerics::find_root(expansion, lo, hi, {1e-16, 0.0, 1});

    ConformalProfile c;
    c.factor = factor;
    c.r_min = r_b;
    c.mass_tag = m + k;
    c.label = "perturbed-schwarzschild(m=" + format_double(m) + ",k=" + format_double(k) +
              ",b=" + format_double(b) + ")";
    return c;
}

ConformalProfile euclidean_conformal() {
    ConformalProfile c;
    c.factor = [](double) { return ConformalSample{1.0, 0.0, 0.0}; };
    c.r_min = 0.0;
    c.mass_tag = 0.0;
    c.harmonic_from = 0.0;
    c.label = "euclidean";
    return c;
}

ConformalProfile schwarzschild_conformal(double m) {
    ConformalProfile c;
    c.factor = [m](double r) {
        return ConformalSample{1.0 + m / (2.0 * r), -m / (2.0 * r * r), m / (r * r * r)};
    };
    c.r_min = 0.5 * m;
    c.mass_tag = m;
    c.harmonic_from = 0.5 * m;
    c.label = "schwarzschild(m=" + format_double(m) + ")";
    return c;
}

MetricProfile to_warped(const ConformalProfile& c) {
    auto factor = c.factor;
    auto chart = [factor](double r) {
        const ConformalSample s = factor(r);
        const double w2 = s.w * s.w;
        return ChartSample{r * w2, w2 + 2.0 * r * s.w * s.dw,
                           4.0 * s.w * s.dw + 2.0 * r * (s.dw * s.dw + s.w * s.d2w), w2, 2.0 * s.w * s.dw};
    };
    MetricProfile::Options options;
    options.breakpoints = c.breakpoints;
    options.mass_tag = c.mass_tag;
    options.conformal = c;
    options.assume_nonnegative_R = c.assume_nonnegative_R;
    const ProfileKind kind = c.r_min == 0.0 ? ProfileKind::Boundaryless : ProfileKind::WithBoundary;
    return MetricProfile(chart, c.r_min, kind, c.label, std::move(options));
}

double scalar_curvature(const MetricProfile& p, double r) {
    p.require_in_domain(r);
    const ChartSample c = p.chart(r);
    if (c.f == 0.0) throw Error(ErrorCode::DomainEdge, p.label() + ": scalar curvature formula singular at the pole");
    const double sigma = p.warp_ds_defect(r);
    const double fss = (c.d2f * c.a - c.df * c.da) / (c.a * c.a * c.a);
    return 2.0 * (sigma * (2.0 - sigma) / (c.f * c.f) - 2.0 * fss / c.f);
}

double conformal_scalar_curvature(const ConformalProfile& c, double r) {
    if (!(r > 0.0) || r < c.r_min) throw Error(ErrorCode::DomainEdge, "radius outside conformal domain");
    const ConformalSample s = c(r);
    const double w2 = s.w * s.w;
    return -8.0 * (s.d2w + 2.0 * s.dw / r) / (w2 * w2 * s.w);
}

SphereGeometry sphere_geometry(const MetricProfile& p, double r) {
    p.require_in_domain(r);
    const ChartSample c = p.chart(r);
    if (c.f == 0.0) return {0.0, numerics::kInf};
    return {4.0 * std::numbers::pi * c.f * c.f, 2.0 * (c.df / c.a) / c.f};
}

CurvatureScan scan_scalar_curvature(const MetricProfile& p, int samples) {
    if (samples < 3) throw Error(ErrorCode::InvalidInput, "curvature scan needs at least 3 samples");
    std::vector<double> radii;
    if (p.kind() == ProfileKind::WithBoundary) {
        // Offsets from the boundary, dense near it.
        const double scale = std::max(p.r_min(), 1.0);
        radii.push_back(p.r_min());
        for (double d : numerics::geometric_grid(1e-6 * scale, 1e4 * scale, samples - 1)) radii.push_back(p.r_min() + d);
    } else {
        radii = numerics::geometric_grid(1e-3, 1e4, samples);
    }
    CurvatureScan scan{numerics::kInf, radii.front(), 0.0, samples};
    for (double r : radii) {
        const double value = scalar_curvature(p, r);
        scan.max_abs = std::max(scan.max_abs, std::abs(value));
        if (value < scan.min_value) {
            scan.min_value = value;
            scan.argmin = r;
        }
    }
    return scan;
}

}  // namespace curvlab
