#include <doctest.h>

#include <cmath>
#include <random>

#include "curvlab/numerics.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace curvlab;
using namespace curvlab::numerics;

TEST_CASE("integrate: closed-form integrals") {
    CHECK(integrate([](double s) { return 1.0 / (s * s); }, 1.0, kInf).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 1.0; }, 0.0, 2.0).value == doctest::Approx(2.0).epsilon(1e-14));
    const double tail = integrate([](double r) { return 1.0 / ((r + 0.5) * (r + 0.5)); }, 1.0, kInf).value;
    CHECK(std::abs(tail - golden::kSchwPotentialTail) < 1e-12);
}

TEST_CASE("integrate: tail from zero and reversed bounds") {
    const double v = integrate([](double s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, 0.0, kInf).value;
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    const double forward = integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value;
    const double backward = integrate([](double x) { return std::exp(x); }, 1.0, 0.0).value;
    CHECK(backward == -forward);
}

TEST_CASE("integrate: error estimate honours the tolerance") {
    const Tolerance tol{1e-10, 1e-12, 60};
    const QuadratureResult r = integrate([](double x) { return std::sqrt(x) * std::log(1.0 + x); }, 0.0, 3.0, tol);
    CHECK(r.error_estimate <= std::max(tol.rel * std::abs(r.value), tol.abs) + 100 * 2.2e-16 * std::abs(r.value));
    CHECK(r.evaluations >= 21);
}

TEST_CASE("integrate: budget exhaustion raises NonConvergent") {
    const Tolerance tight{1e-14, 0.0, 2};
    try {
        integrate([](double x) { return std::sin(50.0 * x) / (x + 1e-3); }, 0.0, 10.0, tight);
        FAIL("expected NonConvergent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonConvergent);
    }
}

TEST_CASE("integrate: invalid tolerance and bounds") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, {0.0, 0.0, 10}), Error);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, {1e-8, 0.0, 0}), Error);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, -kInf, 1.0), Error);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("integrate: additivity over random splits") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double p = coef(rng), q = coef(rng), k = 1.0 + 3.0 * unit(rng);
        auto f = [=](double x) { return p * std::cos(k * x) + q * std::exp(-x * x) + x * x; };
        const double a = -1.0 - unit(rng), b = 1.0 + 2.0 * unit(rng);
        const double c = a + (b - a) * unit(rng);
        const double whole = integrate(f, a, b).value;
        const double parts = integrate(f, a, c).value + integrate(f, c, b).value;
        CHECK(std::abs(whole - parts) <= 2e-10 * std::max(1.0, std::abs(whole)));
    }
}

TEST_CASE("integrate: odd functions vanish on symmetric intervals") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double k = dist(rng), L = dist(rng);
        const double v = integrate([k](double x) { return std::sin(k * x) * std::exp(-x * x) + x * x * x; }, -L, L).value;
        CHECK(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("integrate_split: breakpoints of a kinked integrand") {
    auto kink = [](double x) { return std::abs(x - 0.3); };
    const double breaks[] = {0.3, 5.0, -1.0};
    const QuadratureResult r = integrate_split(kink, 0.0, 1.0, breaks);
    CHECK(r.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-14));
}

TEST_CASE("differentiate: simple functions") {
    auto sq = [](double t) { return t * t; };
    CHECK(derivative(sq, 1.0, default_step(1.0)) == doctest::Approx(2.0).epsilon(1e-10));
    auto inv = [](double t) { return 1.0 / t; };
    CHECK(derivative(inv, 2.0, default_step(2.0)) == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("differentiate: exact on polynomials up to degree 4") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        double c[5];
        for (double& x : c) x = dist(rng);
        const double t = dist(rng);
        auto p = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4]))); };
        const double exact = c[1] + t * (2 * c[2] + t * (3 * c[3] + t * 4 * c[4]));
        const double h = default_step(t);
        double scale = 0.0;
        for (double x : c) scale += std::abs(x);
        scale *= std::pow(std::max(1.0, std::abs(t)), 4);
        // Cancellation in the difference quotient costs ~eps * |p| / h.
        CHECK(std::abs(derivative(p, t, h) - exact) <= 10 * 2.2e-16 * scale / h);
    }
}

TEST_CASE("differentiate: one-sided stencil at a domain edge") {
    auto sq = [](double t) {
        REQUIRE(t >= 1.0);
        return t * t * t;
    };
    const Derivative d = differentiate(sq, 1.0, 1e-3, Domain{1.0, kInf});
    CHECK(d.reduced_order);
    CHECK(d.value == doctest::Approx(3.0).epsilon(1e-5));
    CHECK_THROWS_AS(differentiate(sq, 1.0, 1e-3, Domain{1.0, 1.0005}), Error);
    CHECK_THROWS_AS(differentiate(sq, 1.0, 0.0), Error);
}

TEST_CASE("find_root: bracketed roots") {
    const Tolerance tight{1e-15, 1e-15, 60};
    CHECK(find_root([](double s) { return 1.0 - 1.0 / s - 0.5; }, 1.0, 10.0, tight) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(find_root([](double x) { return x * x * x - 8.0; }, 0.0, 4.0, tight) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(find_root([](double x) { return x * x * x - 8.0; }, 0.0, 4.0) == doctest::Approx(2.0).epsilon(1e-9));
    const double r = find_root([](double x) { return oracle::schw_u(1.0, x) - 1.0 / 3.0; }, 0.5, 10.0, tight);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("find_root: residual within abs tolerance for monotone functions") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.5, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double k = dist(rng), shift = dist(rng);
        auto f = [=](double x) { return std::atan(k * (x - shift)) + 0.1 * x - 0.1 * shift; };
        const Tolerance tol{1e-15, 1e-13, 60};
        const double x = find_root(f, -10.0, 20.0, tol);
        CHECK(std::abs(f(x)) <= 1e-12);
    }
}

TEST_CASE("find_root: missing bracket") {
    try {
        find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0);
        FAIL("expected NoBracket");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoBracket);
    }
}

TEST_CASE("fit_inverse and loglog_slope recover exact models") {
    std::vector<double> x, y, z;
    for (double t = 10.0; t <= 1000.0; t *= 1.5) {
        x.push_back(t);
        y.push_back(2.0 - 3.0 / t);
        z.push_back(5.0 * std::pow(t, -1.25));
    }
    const InverseFit fit = fit_inverse(x, y);
    CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.slope == doctest::Approx(-3.0).epsilon(1e-10));
    CHECK(loglog_slope(x, z) == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("geometric_grid endpoints and ratio") {
    const auto g = geometric_grid(0.5, 1000.0, 256);
    REQUIRE(g.size() == 256);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 1000.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 4), Error);
    CHECK_THROWS_AS(geometric_grid(1.0, 2.0, 1), Error);
}
