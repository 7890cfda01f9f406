#pragma once

// Closed forms and brute-force quadrature used as independent references.
// Nothing here calls into the library.

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Spatial Schwarzschild in isotropic radius: w = 1 + m/2r, f = r w^2.
inline double schw_w(double m, double r) { return 1.0 + m / (2.0 * r); }
inline double schw_f(double m, double r) { return r * schw_w(m, r) * schw_w(m, r); }
inline double schw_u(double m, double r) {
    const double q = m / (2.0 * r);
    return (1.0 - q) / (1.0 + q);
}
// df/dr = (1 + m/2r)(1 - m/2r)
inline double schw_df(double m, double r) { return (1.0 + m / (2.0 * r)) * (1.0 - m / (2.0 * r)); }

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(const F& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Simpson in the variable x = log s, for integrands spread over decades.
template <class F>
double simpson_log(const F& f, double a, double b, int n) {
    return simpson([&](double x) { return f(std::exp(x)) * std::exp(x); }, std::log(a), std::log(b), n);
}

// int_{C/2}^t 4 pi s^2 (1 + C/2s)^6 ds, expanded: 4 pi int (s + h)^6 / s^4, h = C/2.
inline double schw_volume_closed(double c, double t) {
    const double h = 0.5 * c;
    auto antiderivative = [h](double s) {
        // (s+h)^6 / s^4 = s^2 + 6h s + 15h^2 + 20h^3/s + 15h^4/s^2 + 6h^5/s^3 + h^6/s^4
        return s * s * s / 3.0 + 3.0 * h * s * s + 15.0 * h * h * s + 20.0 * h * h * h * std::log(s) -
               15.0 * std::pow(h, 4) / s - 3.0 * std::pow(h, 5) / (s * s) - std::pow(h, 6) / (3.0 * s * s * s);
    };
    return 4.0 * kPi * (antiderivative(t) - antiderivative(h));
}

}  // namespace oracle
