#include "curvlab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "curvlab/format.hpp"

namespace curvlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::DomainEdge: return "DomainEdge";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::WrongKind: return "WrongKind";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    }
    return "Unknown";
}

}  // namespace curvlab

namespace curvlab::numerics {

void Tolerance::validate() const {
    if (!(rel >= 0.0) || !(abs >= 0.0) || !(rel + abs > 0.0) || max_refinements < 1) {
        throw Error(ErrorCode::InvalidInput, "tolerance needs rel, abs >= 0, rel + abs > 0, max_refinements >= 1");
    }
}

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double roundoff;  // part of `error` that bisection cannot remove
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        return x.error - x.roundoff < y.error - y.roundoff;
    }
};

template <class F>
Panel gauss_kronrod(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double width = std::abs(half);
    resasc *= width;
    resabs *= width;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double roundoff = 0.0;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        roundoff = 50.0 * eps * resabs;
        err = std::max(roundoff, err);
    }
    return {a, b, resk * half, err, roundoff};
}

template <class F>
QuadratureResult adaptive(const F& f, double a, double b, const Tolerance& tol) {
    std::priority_queue<Panel, std::vector<Panel>, ByError> panels;
    panels.push(gauss_kronrod(f, a, b));
    QuadratureResult out;
    out.evaluations = 21;
    int refinements = 0;
    for (;;) {
        // Re-summing every pass keeps the result independent of update order.
        double value = 0.0;
        double error = 0.0;
        double roundoff = 0.0;
        auto copy = panels;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            roundoff += copy.top().roundoff;
            copy.pop();
        }
        out.value = value;
        out.error_estimate = error;
        if (error - roundoff <= std::max(tol.rel * std::abs(value), tol.abs)) return out;
        if (refinements >= tol.max_refinements) {
            throw Error(ErrorCode::NonConvergent,
                        "quadrature budget exhausted (error " + format_double(error) + " on [" +
                            format_double(a) + ", " + format_double(b) + "])");
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        panels.push(gauss_kronrod(f, worst.a, mid));
        panels.push(gauss_kronrod(f, mid, worst.b));
        out.evaluations += 42;
        ++refinements;
    }
}

}  // namespace

QuadratureResult integrate(const Function& f, double a, double b, const Tolerance& tol) {
    tol.validate();
    if (std::isnan(a) || std::isnan(b) || std::isinf(a)) {
        throw Error(ErrorCode::InvalidInput, "integration bounds must be finite (upper may be +inf)");
    }
    if (a == b) return {};
    if (std::isinf(b)) {
        if (b < 0) throw Error(ErrorCode::InvalidInput, "upper bound -inf not supported");
        const double scale = a != 0.0 ? std::abs(a) : 1.0;
        auto mapped = [&](double x) {
            const double one_minus = 1.0 - x;
            return f(a + scale * x / one_minus) * scale / (one_minus * one_minus);
        };
        return adaptive(mapped, 0.0, 1.0, tol);
    }
    if (b < a) {
        QuadratureResult r = adaptive(f, b, a, tol);
        r.value = -r.value;
        return r;
    }
    return adaptive(f, a, b, tol);
}

QuadratureResult integrate_split(const Function& f, double a, double b,
                                 std::span<const double> breakpoints, const Tolerance& tol) {
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(b);
    if (cuts.size() == 2) return integrate(f, a, b, tol);

    Tolerance piece = tol;
    piece.abs = tol.abs / static_cast<double>(cuts.size() - 1);
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const QuadratureResult r = integrate(f, cuts[i], cuts[i + 1], piece);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    return total;
}

double default_step(double t) { return 1e-4 * std::max(1.0, std::abs(t)); }

Derivative differentiate(const Function& f, double t, double h, Domain domain) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidInput, "derivative step must be positive");
    if (t - h >= domain.lo && t + h <= domain.hi) {
        auto central = [&](double step) { return (f(t + step) - f(t - step)) / (2.0 * step); };
        const double coarse = central(h);
        const double fine = central(0.5 * h);
        return {(4.0 * fine - coarse) / 3.0, false};
    }
    double sign = 0.0;
    if (t + 2.0 * h <= domain.hi && t >= domain.lo) {
        sign = 1.0;
    } else if (t - 2.0 * h >= domain.lo && t <= domain.hi) {
        sign = -1.0;
    } else {
        throw Error(ErrorCode::DomainEdge, "derivative stencil does not fit the domain");
    }
    const double f0 = f(t);
    auto one_sided = [&](double step) {
        const double s = sign * step;
        return (-3.0 * f0 + 4.0 * f(t + s) - f(t + 2.0 * s)) / (2.0 * s);
    };
    const double coarse = one_sided(h);
    const double fine = one_sided(0.5 * h);
    return {(4.0 * fine - coarse) / 3.0, true};
}

double find_root(const Function& f, double lo, double hi, const Tolerance& tol) {
    tol.validate();
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw Error(ErrorCode::NoBracket, "function has the same sign at both bracket ends");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < 300; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double xtol = 2.0 * eps * std::abs(b) + 0.5 * tol.rel * std::abs(b);
        const double half = 0.5 * (c - b);
        if (std::abs(fb) <= tol.abs || std::abs(half) <= xtol || fb == 0.0) return b;
        if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * half * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * half * q - std::abs(xtol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > xtol ? d : (half > 0.0 ? xtol : -xtol);
        fb = f(b);
    }
    throw Error(ErrorCode::NonConvergent, "root finder iteration limit reached");
}

InverseFit fit_inverse(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "fit needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double sz = 0.0, sy = 0.0, szz = 0.0, szy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = 1.0 / x[i];
        sz += z;
        sy += y[i];
        szz += z * z;
        szy += z * y[i];
    }
    const double det = n * szz - sz * sz;
    if (det == 0.0) throw Error(ErrorCode::InvalidInput, "degenerate fit abscissae");
    const double slope = (n * szy - sz * sy) / det;
    return {(sy - slope * sz) / n, slope};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "slope fit needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw Error(ErrorCode::InvalidInput, "geometric grid needs n >= 2 and 0 < lo < hi");
    }
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace curvlab::numerics
