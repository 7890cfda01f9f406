#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "curvlab/error.hpp"

namespace curvlab::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-12;
    int max_refinements = 60;

    /// Throws InvalidInput unless rel, abs >= 0, rel + abs > 0 and max_refinements >= 1.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

using Function = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) quadrature on [a, b].
///
/// `b` may be +inf; the tail is mapped onto [0, 1) with
///   s = a + L x / (1 - x),   L = |a| (1 when a = 0),
/// which turns O(s^-2) integrands into bounded ones. `max_refinements` bounds
/// the number of interval bisections. Throws NonConvergent when the budget is
/// exhausted before max(rel |value|, abs) is reached.
QuadratureResult integrate(const Function& f, double a, double b, const Tolerance& tol = {});

/// Same as `integrate`, but splits at the given interior breakpoints first
/// (points outside (a, b) are ignored). Used for profiles glued at a radius.
QuadratureResult integrate_split(const Function& f, double a, double b,
                                 std::span<const double> breakpoints,
                                 const Tolerance& tol = {});

struct Domain {
    double lo = -kInf;
    double hi = kInf;
};

struct Derivative {
    double value = 0.0;
    bool reduced_order = false;  // stencil had to go one-sided
};

/// Default stencil half-width: 1e-4 * max(1, |t|).
double default_step(double t);

/// Central difference with one Richardson step (error O(h^4)); stencil
/// points t +- h, t +- h/2. Near a domain edge the stencil goes one-sided
/// (second-order forward/backward differences, Richardson-improved) and the
/// result is flagged `reduced_order`. Throws DomainEdge when even the
/// one-sided stencil does not fit.
Derivative differentiate(const Function& f, double t, double h, Domain domain = {});

/// Convenience overload returning only the value.
inline double derivative(const Function& f, double t, double h) {
    return differentiate(f, t, h).value;
}

/// Brent's method. Requires f(lo) * f(hi) <= 0 (NoBracket otherwise).
/// Stops when |f(x)| <= tol.abs or the bracket is narrower than tol.rel * |x|.
double find_root(const Function& f, double lo, double hi, const Tolerance& tol = {});

/// Least squares fit of y = c0 + c1 / x; returns {c0, c1}.
struct InverseFit {
    double intercept = 0.0;
    double slope = 0.0;
};
InverseFit fit_inverse(std::span<const double> x, std::span<const double> y);

/// Slope of log|y| against log x by least squares.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// `n` geometrically spaced points covering [lo, hi] inclusive.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace curvlab::numerics
