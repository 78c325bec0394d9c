#include "isolab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace isolab {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal
// Jacobi matrix, weights are mu0 * (first eigenvector component)^2.
QuadRule golub_welsch(int n, const std::vector<double>& offdiag, double mu0) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        J(k, k + 1) = offdiag[static_cast<size_t>(k)];
        J(k + 1, k) = offdiag[static_cast<size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadRule r;
    r.nodes.resize(static_cast<size_t>(n));
    r.weights.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        r.nodes[static_cast<size_t>(k)] = es.eigenvalues()(k);
        double v0 = es.eigenvectors()(0, k);
        r.weights[static_cast<size_t>(k)] = mu0 * v0 * v0;
    }
    return r;
}

std::mutex cache_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<double> b(static_cast<size_t>(n > 0 ? n - 1 : 0));
        for (int k = 1; k < n; ++k)
            b[static_cast<size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
        it = cache.emplace(n, golub_welsch(n, b, 2.0)).first;
    }
    return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r = base;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t k = 0; k < r.size(); ++k) {
        r.nodes[k] = mid + half * base.nodes[k];
        r.weights[k] = half * base.weights[k];
    }
    return r;
}

const QuadRule& gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<double> b(static_cast<size_t>(n > 0 ? n - 1 : 0));
        for (int k = 1; k < n; ++k) b[static_cast<size_t>(k - 1)] = std::sqrt(0.5 * k);
        it = cache.emplace(n, golub_welsch(n, b, std::sqrt(std::numbers::pi))).first;
    }
    return it->second;
}

QuadRule periodic_rule(int n) {
    QuadRule r;
    r.nodes.resize(static_cast<size_t>(n));
    r.weights.resize(static_cast<size_t>(n));
    const double step = 2.0 * std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
        r.nodes[static_cast<size_t>(k)] = k * step;
        r.weights[static_cast<size_t>(k)] = step;
    }
    return r;
}

namespace {

double simpson(double a, double fa, double fb, double b, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole, double tol,
                     int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, fm, m, flm);
    const double right = simpson(m, fm, fb, b, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, fb, b, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

}  // namespace isolab
