#pragma once

#include <functional>
#include <vector>

namespace isolab {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    size_t size() const { return nodes.size(); }
};

// Gauss-Legendre on [-1,1].  Results are cached per order.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre scaled to [a,b].
QuadRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite with weight exp(-x^2) (physicists' convention).
const QuadRule& gauss_hermite(int n);

// Uniform rule on [0, 2*pi), exact for trigonometric polynomials of
// degree < n; the right choice for periodic angular integrals.
QuadRule periodic_rule(int n);

// Adaptive Simpson integration to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

}  // namespace isolab
