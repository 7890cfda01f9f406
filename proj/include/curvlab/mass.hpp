#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "curvlab/potential.hpp"

namespace curvlab::mass {

struct MassSample {
    double t = 0.0;
    double m_est = 0.0;
};

struct ResidualSample {
    double r = 0.0;
    double residual = 0.0;
};

/// ADM flux (1/16 pi) int (d_j g_ij - d_i g_jj) x^i/|x| on the coordinate
/// sphere |x| = r for g = w^4 delta. In radial symmetry the integrand is
/// constant on the sphere and the flux reduces to -2 r^2 w^3 w'(r).
double adm_flux(const ConformalProfile& c, double r);

/// Extrapolates adm_flux to r -> inf (Neville in 1/r through all radii).
/// Radii must be increasing and outside the non-harmonic core (OutOfRange).
/// If w tends to alpha != 1 the flux is rescaled to coordinates where the
/// metric tends to delta.
double adm_surface(const ConformalProfile& c, const std::vector<double>& radii);

struct VolumeEstimate {
    double m_volume = 0.0;
    double correction = 0.0;  // c in m_est(t) ~ m + c / t
    std::vector<MassSample> samples;
};

/// m_est(t) = [Vol{u <= 1 - 1/t} - 4 pi t^3 / 3] / (4 pi t^2) at each sample,
/// and m_volume from a least-squares fit m + c/t over the samples in the last
/// decade of t. WrongKind unless boundaryless.
VolumeEstimate mass_from_volume(const PotentialSolution& sol, const std::vector<double>& t_samples);

/// r [(1 - u)^4 / |grad u|^2 - 1 - 2m/r] at each chart radius.
std::vector<ResidualSample> expansion_residuals(const PotentialSolution& sol, double m,
                                                const std::vector<double>& radii);

struct MassOptions {
    std::vector<double> t_samples = numerics::geometric_grid(1e2, 1e4, 21);
    std::vector<double> adm_radii = {1e3, 2e3, 4e3, 8e3, 1.6e4};
    std::vector<double> residual_radii = numerics::geometric_grid(10.0, 1e3, 13);
};

struct MassReport {
    std::string profile_label;
    std::optional<double> mass_tag;
    double m_surface = 0.0;
    double m_volume = 0.0;
    double volume_correction = 0.0;
    double residual_slope = 0.0;  // log-log slope of |residual| against r
    std::vector<MassSample> samples;
    std::vector<ResidualSample> expansion_residuals;

    double min_sample() const;
};

/// Both estimators plus the expansion residuals, using mass_tag (or m_surface
/// when the profile has none) as m. Needs a boundaryless profile that carries
/// its conformal factor.
MassReport compute_report(const PotentialSolution& sol, const MassOptions& options = {});

/// `t,m_est` rows followed by `# key=value` summary lines.
void write_mass_csv(std::ostream& out, const MassReport& report);
void write_mass_summary(std::ostream& out, const MassReport& report);

}  // namespace curvlab::mass
