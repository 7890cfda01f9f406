#pragma once

#include <string>
#include <vector>

#include "curvlab/profile.hpp"

namespace curvlab {

enum class SolutionKind { CapacitaryWithBoundary, GreenBoundaryless };

/// One level of u in the three parametrizations (plus the chart radius).
///   WithBoundary: u = (1 - C/2t) / (1 + C/2t), t >= C/2
///   Boundaryless: u = 1 - 1/t, t > 0
struct LevelParam {
    double t = 0.0;
    double r = 0.0;  // chart radius
    double s = 0.0;  // arclength from the boundary or pole
    double u = 0.0;
};

/// Geometry of one round level set Sigma_t. All surface integrals are
/// 4 pi f^2 times the (constant) pointwise value.
struct LevelSetSample {
    double t = 0.0;
    double r = 0.0;
    double s = 0.0;
    double u = 0.0;
    double one_minus_u = 1.0;
    double f = 0.0;          // warp factor
    double ds_defect = 0.0;  // 1 - df/ds
    double area = 0.0;
    double grad = 0.0;            // |grad u|
    double mean_curvature = 0.0;  // H w.r.t. grad u / |grad u|
    double scalar_curvature = 0.0;
    double sigma_curvature = 0.0;  // scalar curvature of Sigma_t, 2 / f^2
    double int_grad = 0.0;         // int |grad u|
    double int_grad2 = 0.0;        // int |grad u|^2
    double int_grad_h = 0.0;       // int |grad u| H
    double int_inv_grad = 0.0;     // int 1 / |grad u|
    double int_R = 0.0;            // int R
    double int_sigma_curvature = 0.0;
};

/// Radial harmonic function on a MetricProfile.
///
/// With Phi(r) = int_r^inf a / f^2 (the tail of the radial Green integral):
///   WithBoundary: u = 1 - c Phi(r), c = 1 / Phi(r_min), capacity C = c
///   Boundaryless: u = 1 - Phi(r) = 1 - 4 pi G_o
/// so |grad u| = c / f^2 and int_{Sigma} |grad u| = 4 pi c on every level.
/// Every level query re-integrates Phi; nothing is accumulated across levels.
class PotentialSolution {
public:
    static PotentialSolution solve(MetricProfile profile);

    const MetricProfile& profile() const { return profile_; }
    SolutionKind kind() const { return kind_; }
    bool has_boundary() const { return kind_ == SolutionKind::CapacitaryWithBoundary; }

    /// u'(s) = c_norm / f(s)^2.
    double c_norm() const { return c_norm_; }

    /// Boundary capacity C = (1/4pi) int_{dM} |grad u|. WrongKind when boundaryless.
    double capacity() const;

    /// (1/4pi) int_M |grad u|^2 dvol by quadrature; equals capacity().
    double capacity_bulk() const;

    /// Scale of the level parametrization: C with a boundary, 1 without
    /// (the flux int |grad u| is 4 pi times this).
    double flux_scale() const { return c_norm_; }

    /// Smallest admissible t: C/2, or 0 (exclusive) when boundaryless.
    double t_min() const;

    double tail(double r) const;
    double u(double r) const;
    double one_minus_u(double r) const;
    double grad(double r) const;
    double t_of_r(double r) const;

    /// Solves u(r) = level(t) by bracketing on the tail integral and a final
    /// Newton step. OutOfRange for t below t_min().
    LevelParam level(double t) const;

    /// Chart radius of the level t (level() without the arclength).
    double level_radius(double t) const;

    LevelSetSample level_integrals(double t) const;

    /// Geometry at a known chart radius; `t` is carried through unchanged.
    LevelSetSample sample_at(double r, double t) const;

    /// Geometric grid over [min_factor * t0, max_factor * 2 t0], t0 = flux_scale() / 2.
    std::vector<double> default_grid(int points = 256, double min_factor = 1.0, double max_factor = 1e3) const;

    /// Non-fatal findings from solve(), e.g. an inconclusive |grad u| -> 0 check.
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Internal quadrature accuracy for the tail integral.
    static numerics::Tolerance tail_tolerance() { return {1e-13, 0.0, 400}; }

private:
    PotentialSolution(MetricProfile profile, SolutionKind kind, double c_norm);

    double tail_derivative(double r) const;

    MetricProfile profile_;
    SolutionKind kind_;
    double c_norm_;
    std::vector<std::string> warnings_;
};

}  // namespace curvlab
