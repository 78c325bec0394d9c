#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isolab/quadrature.hpp"

using namespace isolab;

TEST_CASE("gauss-legendre basics") {
    for (int n : {4, 16, 64, 96}) {
        const QuadRule& r = gauss_legendre(n);
        double mass = 0.0, x2 = 0.0;
        for (size_t k = 0; k < r.size(); ++k) {
            mass += r.weights[k];
            x2 += r.weights[k] * r.nodes[k] * r.nodes[k];
        }
        CHECK(mass == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    }

    // Exactness on a degree-2n-1 polynomial: n=5 integrates x^8 on [-1,1].
    const QuadRule& r5 = gauss_legendre(5);
    double v = 0.0;
    for (size_t k = 0; k < r5.size(); ++k) v += r5.weights[k] * std::pow(r5.nodes[k], 8);
    CHECK(v == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("gauss-legendre on an interval") {
    QuadRule r = gauss_legendre(32, 0.0, 3.0);
    double v = 0.0;
    for (size_t k = 0; k < r.size(); ++k) v += r.weights[k] * std::exp(-r.nodes[k]);
    CHECK(v == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("gauss-hermite basics") {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int n : {8, 32, 64}) {
        const QuadRule& r = gauss_hermite(n);
        double mass = 0.0, x2 = 0.0;
        for (size_t k = 0; k < r.size(); ++k) {
            mass += r.weights[k];
            x2 += r.weights[k] * r.nodes[k] * r.nodes[k];
        }
        CHECK(mass == doctest::Approx(sqrt_pi).epsilon(1e-12));
        CHECK(x2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-12));
    }

    // Gaussian second moment via substitution u = x*sqrt(2/h):
    // integral of u^2 exp(-h u^2/2) du = sqrt(2 pi / h) / h.
    const double h = 3.0;
    const QuadRule& r = gauss_hermite(24);
    const double scale = std::sqrt(2.0 / h);
    double v = 0.0;
    for (size_t k = 0; k < r.size(); ++k) {
        double u = scale * r.nodes[k];
        v += r.weights[k] * scale * u * u;
    }
    CHECK(v == doctest::Approx(std::sqrt(2.0 * std::numbers::pi / h) / h).epsilon(1e-12));
}

TEST_CASE("periodic rule integrates trig polynomials exactly") {
    QuadRule r = periodic_rule(32);
    double mass = 0.0, c = 0.0, c2 = 0.0;
    for (size_t k = 0; k < r.size(); ++k) {
        mass += r.weights[k];
        c += r.weights[k] * std::cos(r.nodes[k]);
        c2 += r.weights[k] * std::cos(r.nodes[k]) * std::cos(r.nodes[k]);
    }
    CHECK(mass == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(std::abs(c) < 1e-13);
    CHECK(c2 == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("adaptive simpson") {
    double v = adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 10.0, 1e-12);
    CHECK(v == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-10));

    // A sharply peaked integrand.
    double g = adaptive_simpson(
        [](double x) { return std::exp(-50.0 * (x - 0.3) * (x - 0.3)); }, -2.0, 2.0,
        1e-12);
    CHECK(g == doctest::Approx(std::sqrt(std::numbers::pi / 50.0)).epsilon(1e-9));

    CHECK(adaptive_simpson([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}
