#pragma once

#include <ostream>
#include <vector>

#include "curvlab/potential.hpp"

namespace curvlab::functionals {

// Boundaryless (u = 1 - 1/t).

/// Fhat(t) = -4 pi / t + t int_{u = 1 - 1/t} |grad u|^2. WrongKind with a boundary.
double fhat(const PotentialSolution& sol, double t);

// Boundary case (u = (1 - C/2t)/(1 + C/2t), t >= C/2). All throw WrongKind
// on boundaryless solutions and OutOfRange below C/2.

double g_func(const PotentialSolution& sol, double t);
double g_prime(const PotentialSolution& sol, double t);
double f_func(const PotentialSolution& sol, double t);
/// F'(t) = 4 pi - int R^Sigma / 2 + int [R/2 + 3/4 (4u |grad u| / (1 - u^2) - H)^2];
/// the tangential-gradient and traceless second fundamental form terms are
/// identically zero on round level sets.
double f_prime_analytic(const PotentialSolution& sol, double t);
double a1(const PotentialSolution& sol, double t);
double a1_tilde(const PotentialSolution& sol, double t);
double a1_prime(const PotentialSolution& sol, double t);
/// t A1'(t) / A1(t).
double a_growth(const PotentialSolution& sol, double t);
/// int |B|^2 / |grad u|^2 with B the traceless part of Hess u + 6u/(1-u^2) du (x) du.
double b1(const PotentialSolution& sol, double t);

/// A = F(C/2) = 2 C (pi - int_{dM} |grad u|^2).
double boundary_deficit(const PotentialSolution& sol);

/// Volume of {u <= level(t)} from the radial volume element 4 pi f^2 a dr.
double volume_sublevel(const PotentialSolution& sol, double t);

/// The same volume through the coarea formula: integrates
/// int_{Sigma_s} |grad u|^-1 against the level speed du/ds over s.
/// Much slower (one level solve per quadrature node); used as a cross-check.
double volume_sublevel_coarea(const PotentialSolution& sol, double t);

/// Algebra on an already-solved level. `C` is the capacity (boundary case).
struct LevelValues {
    double fhat = 0.0;
    double G = 0.0;
    double F = 0.0;
    double A1 = 0.0;
    double A1tilde = 0.0;
    double A1prime = 0.0;
    double a_growth = 0.0;
    double B1 = 0.0;
    double Fprime = 0.0;
    double Gprime = 0.0;
    double R1 = 0.0;  // int_{Sigma_t} R
};

LevelValues boundary_values(const LevelSetSample& s, double capacity, double deficit);
LevelValues boundaryless_values(const LevelSetSample& s);

/// |B|^2 / (2 |grad u|^2) from the pointwise reduced formula
/// 3/4 (4u/(1-u^2) |grad u| - H)^2.
double b_density_reduced(const LevelSetSample& s);

/// Grids of functionals. Parallel arrays indexed like t_grid.
struct FunctionalSeries {
    bool boundary = true;
    double capacity = 0.0;
    double deficit_A = 0.0;
    std::vector<double> t_grid;
    std::vector<LevelSetSample> levels;
    std::vector<double> Fhat, G, F, A1, A1tilde, a_growth, B1, Fprime_analytic, Gprime_analytic, A1prime, R1,
        area, volume;
};

/// Evaluates every functional on the grid. Grid points are independent and
/// evaluated in parallel (OpenMP); the output is bitwise identical to
/// evaluate_series_serial.
FunctionalSeries evaluate_series(const PotentialSolution& sol, const std::vector<double>& t_grid);

/// Serial reference implementation of evaluate_series.
FunctionalSeries evaluate_series_serial(const PotentialSolution& sol, const std::vector<double>& t_grid);

/// Cumulative int_{t_grid[0]}^{t_grid[i]} (R1 + B1) dt, one quadrature panel per
/// grid interval (panels evaluated in parallel, summed in order).
std::vector<double> cumulative_r1_b1(const PotentialSolution& sol, const std::vector<double>& t_grid);
std::vector<double> cumulative_r1_b1_serial(const PotentialSolution& sol, const std::vector<double>& t_grid);

/// CSV with header
/// t,s,u,area,grad,H,R,Fhat,G,F,A1,A1tilde,a,B1,Fprime,Gprime,volume
/// Columns that do not apply to the solution kind are written as `nan`.
void write_series_csv(std::ostream& out, const FunctionalSeries& series);

}  // namespace curvlab::functionals
