#include <cmath>
#include <limits>
#include <numbers>

#include "curvlab/format.hpp"
#include "curvlab/functionals.hpp"
#include "parallel.hpp"

namespace curvlab::functionals {

namespace {

FunctionalSeries allocate(const PotentialSolution& sol, const std::vector<double>& t_grid) {
    FunctionalSeries s;
    s.boundary = sol.has_boundary();
    s.capacity = sol.has_boundary() ? sol.capacity() : std::numeric_limits<double>::quiet_NaN();
    s.deficit_A = sol.has_boundary() ? boundary_deficit(sol) : std::numeric_limits<double>::quiet_NaN();
    s.t_grid = t_grid;
    const std::size_t n = t_grid.size();
    s.levels.resize(n);
    for (auto* column : {&s.Fhat, &s.G, &s.F, &s.A1, &s.A1tilde, &s.a_growth, &s.B1, &s.Fprime_analytic,
                         &s.Gprime_analytic, &s.A1prime, &s.R1, &s.area, &s.volume}) {
        column->resize(n);
    }
    return s;
}

// Everything written for index i depends on t_grid[i] only.
void fill_point(const PotentialSolution& sol, FunctionalSeries& s, std::size_t i) {
    const double t = s.t_grid[i];
    const LevelSetSample level = sol.level_integrals(t);
    const LevelValues v = s.boundary ? boundary_values(level, s.capacity, s.deficit_A) : boundaryless_values(level);
    s.levels[i] = level;
    s.Fhat[i] = v.fhat;
    s.G[i] = v.G;
    s.F[i] = v.F;
    s.A1[i] = v.A1;
    s.A1tilde[i] = v.A1tilde;
    s.a_growth[i] = v.a_growth;
    s.B1[i] = v.B1;
    s.Fprime_analytic[i] = v.Fprime;
    s.Gprime_analytic[i] = v.Gprime;
    s.A1prime[i] = v.A1prime;
    s.R1[i] = v.R1;
    s.area[i] = level.area;
    s.volume[i] = volume_sublevel(sol, t);
}

double r1_b1_at(const PotentialSolution& sol, double t) {
    const LevelSetSample level = sol.sample_at(sol.level_radius(t), t);
    return level.int_R + 2.0 * level.area * b_density_reduced(level);
}

double panel(const PotentialSolution& sol, double a, double b) {
    // Both terms are sums of O(8 pi) pieces that cancel on scalar-flat models, so
    // the absolute floor follows that scale rather than the (possibly zero) result.
    const double floor = 1e-11 * 8.0 * std::numbers::pi * (b - a);
    return numerics::integrate([&](double t) { return r1_b1_at(sol, t); }, a, b, {1e-11, floor, 200}).value;
}

std::vector<double> prefix_sum(const std::vector<double>& panels) {
    std::vector<double> out(panels.size() + 1, 0.0);
    for (std::size_t i = 0; i < panels.size(); ++i) out[i + 1] = out[i] + panels[i];
    return out;
}

}  // namespace

FunctionalSeries evaluate_series(const PotentialSolution& sol, const std::vector<double>& t_grid) {
    FunctionalSeries s = allocate(sol, t_grid);
    detail::parallel_for(t_grid.size(), [&](std::size_t i) { fill_point(sol, s, i); });
    return s;
}

FunctionalSeries evaluate_series_serial(const PotentialSolution& sol, const std::vector<double>& t_grid) {
    FunctionalSeries s = allocate(sol, t_grid);
    for (std::size_t i = 0; i < t_grid.size(); ++i) fill_point(sol, s, i);
    return s;
}

std::vector<double> cumulative_r1_b1(const PotentialSolution& sol, const std::vector<double>& t_grid) {
    if (t_grid.empty()) return {};
    std::vector<double> panels(t_grid.size() - 1);
    detail::parallel_for(panels.size(), [&](std::size_t k) { panels[k] = panel(sol, t_grid[k], t_grid[k + 1]); });
    return prefix_sum(panels);
}

std::vector<double> cumulative_r1_b1_serial(const PotentialSolution& sol, const std::vector<double>& t_grid) {
    if (t_grid.empty()) return {};
    std::vector<double> panels(t_grid.size() - 1);
    for (std::size_t k = 0; k < panels.size(); ++k) panels[k] = panel(sol, t_grid[k], t_grid[k + 1]);
    return prefix_sum(panels);
}

void write_series_csv(std::ostream& out, const FunctionalSeries& s) {
    out << "t,s,u,area,grad,H,R,Fhat,G,F,A1,A1tilde,a,B1,Fprime,Gprime,volume\n";
    for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
        const LevelSetSample& l = s.levels[i];
        const double row[] = {s.t_grid[i], l.s,        l.u,     l.area,  l.grad,     l.mean_curvature,
                              l.scalar_curvature,       s.Fhat[i], s.G[i], s.F[i], s.A1[i], s.A1tilde[i],
                              s.a_growth[i], s.B1[i],  s.Fprime_analytic[i], s.Gprime_analytic[i],
                              s.volume[i]};
        bool first = true;
        for (double value : row) {
            if (!first) out << ',';
            out << format_double(value);
            first = false;
        }
        out << '\n';
    }
}

}  // namespace curvlab::functionals
