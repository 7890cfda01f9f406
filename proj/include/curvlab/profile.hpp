#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/numerics.hpp"

namespace curvlab {

enum class ProfileKind { WithBoundary, Boundaryless };

std::string_view to_string(ProfileKind kind);

/// Line element a(r)^2 dr^2 + f(r)^2 g_{S^2} and its chart derivatives at r.
/// With a == 1 the chart coordinate is arclength and f is the warp factor.
struct ChartSample {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
    double a = 1.0;
    double da = 0.0;
};

struct ConformalSample {
    double w = 1.0;
    double dw = 0.0;
    double d2w = 0.0;
};

/// Conformally flat metric w(|x|)^4 g_eucl on {|x| >= r_min}.
struct ConformalProfile {
    std::function<ConformalSample(double)> factor;
    double r_min = 0.0;
    double mass_tag = 0.0;
    /// w(r) = 1 + mass_tag / (2r) exactly for r >= harmonic_from.
    std::optional<double> harmonic_from;
    /// Radii where w is only C^1; quadratures split there.
    std::vector<double> breakpoints;
    std::string label;
    bool assume_nonnegative_R = true;

    ConformalSample operator()(double r) const { return factor(r); }
};

struct ProfileOptions {
    std::vector<double> breakpoints;
    std::optional<double> mass_tag;
    std::optional<ConformalProfile> conformal;
    bool assume_nonnegative_R = true;
    bool asymptotically_flat = true;
};

/// Rotationally symmetric 3-metric, immutable after construction.
///
/// The profile is stored in a radial chart r in [r_min, inf) with line
/// element a(r)^2 dr^2 + f(r)^2 g_{S^2}. Pure warped products have a == 1
/// (r is arclength); conformal profiles use the Euclidean radius |x| and
/// a = w^2, f = r w^2. All geometric quantities are chart independent.
class MetricProfile {
public:
    using Chart = std::function<ChartSample(double)>;

    using Options = ProfileOptions;

    /// Validates the profile: f(r_min) > 0 for WithBoundary, f(0) = 0 and
    /// df/ds = 1 at a pole, and nonparabolicity (the tail integral of a/f^2
    /// beyond r_min + 1 converges; NonConvergent otherwise).
    MetricProfile(Chart chart, double r_min, ProfileKind kind, std::string label, Options options);

    /// Warp-factor form ds^2 + f(s)^2 g_{S^2}, s >= s_min.
    static MetricProfile warped(std::function<double(double)> f, std::function<double(double)> df,
                                std::function<double(double)> d2f, double s_min, ProfileKind kind,
                                std::string label, Options options = {});

    ChartSample chart(double r) const { return chart_(r); }
    double r_min() const { return r_min_; }
    ProfileKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const std::vector<double>& breakpoints() const { return options_.breakpoints; }
    std::optional<double> mass_tag() const { return options_.mass_tag; }
    const std::optional<ConformalProfile>& conformal() const { return options_.conformal; }
    bool assume_nonnegative_R() const { return options_.assume_nonnegative_R; }
    bool asymptotically_flat() const { return options_.asymptotically_flat; }

    /// Warp factor and its arclength derivatives at chart radius r.
    double warp(double r) const { return chart_(r).f; }
    double warp_ds(double r) const;
    double warp_dss(double r) const;
    /// 1 - f_s. Conformal profiles give it as -2 r w'/w, free of cancellation
    /// where f_s is close to 1.
    double warp_ds_defect(double r) const;

    /// Arclength from the boundary (or pole) to chart radius r.
    double arclength(double r) const;

    /// Throws DomainEdge when r lies outside [r_min, inf).
    void require_in_domain(double r) const;

private:
    Chart chart_;
    double r_min_;
    ProfileKind kind_;
    std::string label_;
    Options options_;
};

// Built-in models.

/// Spatial Schwarzschild of mass m > 0 in isotropic radius, r >= m/2.
MetricProfile schwarzschild(double m);

/// Flat R^3 with a pole at the origin, f(s) = s.
MetricProfile euclidean();

/// Flat exterior of the unit ball, f(s) = s + 1 for s >= 0. The boundary is
/// not minimal; the profile is for capacity arithmetic only.
MetricProfile flat_exterior();

/// Boundaryless conformal model, harmonic (Schwarzschild of mass m) outside r0
/// and capped by 1 + m (3 r0^2 - r^2) / (4 r0^3) inside; C^1 at r0.
ConformalProfile mollified_schwarzschild(double m, double r0);

/// w = 1 + m/(2r) + k / (2 sqrt(r^2 + b^2)) on r >= r_b, with r_b the
/// outermost zero of d(r w^2)/dr (a minimal sphere). Smooth, superharmonic,
/// R > 0, ADM mass m + k.
ConformalProfile perturbed_schwarzschild(double m, double k, double b);

/// Euclidean space written as w == 1.
ConformalProfile euclidean_conformal();

/// Schwarzschild exterior as a conformal factor on r >= m/2.
ConformalProfile schwarzschild_conformal(double m);

/// Change of variables f = r w^2, ds = w^2 dr. A pole (r_min == 0) gives a
/// Boundaryless profile, otherwise WithBoundary.
MetricProfile to_warped(const ConformalProfile& c);

/// R = 2 [(1 - f_s^2) / f^2 - 2 f_ss / f]. DomainEdge outside the domain and
/// at a pole.
double scalar_curvature(const MetricProfile& p, double r);

/// R = -8 w^-5 (w'' + 2 w' / r).
double conformal_scalar_curvature(const ConformalProfile& c, double r);

struct SphereGeometry {
    double area = 0.0;
    double mean_curvature = 0.0;  // outward normal; +inf at a pole
};

/// Area 4 pi f^2 and mean curvature 2 f_s / f of the coordinate sphere at r.
SphereGeometry sphere_geometry(const MetricProfile& p, double r);

struct CurvatureScan {
    double min_value = 0.0;
    double argmin = 0.0;
    double max_abs = 0.0;
    int samples = 0;
};

/// Samples R on `samples` chart radii: log-spaced offsets from the boundary,
/// or log-spaced radii in [1e-3, 1e4] around a pole.
CurvatureScan scan_scalar_curvature(const MetricProfile& p, int samples = 1000);

/// Builds a profile from a CSV table with header `r,w` (conformal factor over
/// Euclidean radius) or `s,f` (warp factor over arclength). The first column
/// must be strictly increasing. Derivatives come from a natural cubic spline,
/// so they are less accurate than the closed forms of the built-ins. Beyond
/// the last row the table is continued C^1: w = alpha + beta / r, or f linear.
MetricProfile load_profile_csv(const std::string& path, bool assume_nonnegative_R);

/// Same as load_profile_csv but from in-memory text.
MetricProfile parse_profile_csv(const std::string& text, const std::string& label,
                                bool assume_nonnegative_R);

}  // namespace curvlab
