#pragma once

// First-order forward-mode AD scalars with a dynamic gradient.
//
// Used to differentiate superfields with respect to their even
// coordinates (one gradient slot per coordinate).  An empty gradient
// vector means "identically zero gradient"; binary operations promote
// as needed, so default-constructed values behave like constants.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isolab {

struct Dual {
    double v = 0.0;
    std::vector<double> g;  // empty == zero gradient

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: implicit by design
    static Dual variable(double value, size_t dim, size_t index) {
        Dual d(value);
        d.g.assign(dim, 0.0);
        d.g[index] = 1.0;
        return d;
    }

    double grad(size_t i) const { return i < g.size() ? g[i] : 0.0; }
    bool is_zero() const {
        if (v != 0.0) return false;
        for (double x : g)
            if (x != 0.0) return false;
        return true;
    }
};

namespace detail {
// r.g = a*x.g + b*y.g
inline void axpy2(const Dual& x, double a, const Dual& y, double b, Dual& r) {
    size_t n = std::max(x.g.size(), y.g.size());
    r.g.assign(n, 0.0);
    for (size_t i = 0; i < x.g.size(); ++i) r.g[i] += a * x.g[i];
    for (size_t i = 0; i < y.g.size(); ++i) r.g[i] += b * y.g[i];
}
inline void scale1(const Dual& x, double a, Dual& r) {
    r.g.assign(x.g.size(), 0.0);
    for (size_t i = 0; i < x.g.size(); ++i) r.g[i] = a * x.g[i];
}
}  // namespace detail

inline Dual operator+(const Dual& x, const Dual& y) {
    Dual r(x.v + y.v);
    detail::axpy2(x, 1.0, y, 1.0, r);
    return r;
}
inline Dual operator-(const Dual& x, const Dual& y) {
    Dual r(x.v - y.v);
    detail::axpy2(x, 1.0, y, -1.0, r);
    return r;
}
inline Dual operator-(const Dual& x) {
    Dual r(-x.v);
    detail::scale1(x, -1.0, r);
    return r;
}
inline Dual operator*(const Dual& x, const Dual& y) {
    Dual r(x.v * y.v);
    detail::axpy2(x, y.v, y, x.v, r);
    return r;
}
inline Dual operator/(const Dual& x, const Dual& y) {
    if (y.v == 0.0) throw std::domain_error("dual division by zero value");
    Dual r(x.v / y.v);
    detail::axpy2(x, 1.0 / y.v, y, -x.v / (y.v * y.v), r);
    return r;
}
inline Dual& operator+=(Dual& x, const Dual& y) { return x = x + y; }
inline Dual& operator-=(Dual& x, const Dual& y) { return x = x - y; }
inline Dual& operator*=(Dual& x, const Dual& y) { return x = x * y; }

inline Dual exp(const Dual& x) {
    Dual r(std::exp(x.v));
    detail::scale1(x, r.v, r);
    return r;
}
inline Dual log(const Dual& x) {
    if (x.v <= 0.0) throw std::domain_error("dual log of non-positive value");
    Dual r(std::log(x.v));
    detail::scale1(x, 1.0 / x.v, r);
    return r;
}
inline Dual sqrt(const Dual& x) {
    if (x.v <= 0.0) throw std::domain_error("dual sqrt of non-positive value");
    Dual r(std::sqrt(x.v));
    detail::scale1(x, 0.5 / r.v, r);
    return r;
}
inline Dual pow(const Dual& x, double p) {
    if (x.v <= 0.0) throw std::domain_error("dual pow of non-positive value");
    Dual r(std::pow(x.v, p));
    detail::scale1(x, p * std::pow(x.v, p - 1.0), r);
    return r;
}
inline Dual sin(const Dual& x) {
    Dual r(std::sin(x.v));
    detail::scale1(x, std::cos(x.v), r);
    return r;
}
inline Dual cos(const Dual& x) {
    Dual r(std::cos(x.v));
    detail::scale1(x, -std::sin(x.v), r);
    return r;
}

}  // namespace isolab
