#pragma once

// Truncated Taylor-series scalars ("jets").
//
// A Jet of order K carries the Taylor coefficients a_0..a_K of a
// function of one variable.  Arithmetic propagates them exactly, so
// reading coefficient k and multiplying by k! yields the exact k-th
// derivative -- no finite differences anywhere.  This is what powers
// the application of smooth functions to even Grassmann arguments and
// the derivative tables of bump observables.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isolab {

class Jet {
  public:
    explicit Jet(int order) : a_(static_cast<size_t>(order) + 1, 0.0) {}

    static Jet constant(double v, int order) {
        Jet j(order);
        j.a_[0] = v;
        return j;
    }
    static Jet variable(double v, int order) {
        Jet j(order);
        j.a_[0] = v;
        if (order >= 1) j.a_[1] = 1.0;
        return j;
    }

    int order() const { return static_cast<int>(a_.size()) - 1; }
    double coeff(int k) const { return a_[static_cast<size_t>(k)]; }
    double value() const { return a_[0]; }
    // k-th derivative = k! * coeff(k)
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f * coeff(k);
    }

    friend Jet operator+(const Jet& x, const Jet& y) {
        Jet r = x;
        for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += y.a_[k];
        return r;
    }
    friend Jet operator-(const Jet& x, const Jet& y) {
        Jet r = x;
        for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= y.a_[k];
        return r;
    }
    friend Jet operator-(const Jet& x) {
        Jet r = x;
        for (auto& v : r.a_) v = -v;
        return r;
    }
    friend Jet operator+(const Jet& x, double c) {
        Jet r = x;
        r.a_[0] += c;
        return r;
    }
    friend Jet operator+(double c, const Jet& x) { return x + c; }
    friend Jet operator-(const Jet& x, double c) { return x + (-c); }
    friend Jet operator-(double c, const Jet& x) { return -x + c; }
    friend Jet operator*(const Jet& x, double c) {
        Jet r = x;
        for (auto& v : r.a_) v *= c;
        return r;
    }
    friend Jet operator*(double c, const Jet& x) { return x * c; }

    friend Jet operator*(const Jet& x, const Jet& y) {
        Jet r(x.order());
        for (int k = 0; k <= r.order(); ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j)
                s += x.coeff(j) * y.coeff(k - j);
            r.a_[static_cast<size_t>(k)] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& x, const Jet& y) {
        if (y.coeff(0) == 0.0) throw std::domain_error("jet division by zero value");
        Jet r(x.order());
        for (int k = 0; k <= r.order(); ++k) {
            double s = x.coeff(k);
            for (int j = 0; j < k; ++j) s -= r.coeff(j) * y.coeff(k - j);
            r.a_[static_cast<size_t>(k)] = s / y.coeff(0);
        }
        return r;
    }
    friend Jet operator/(double c, const Jet& y) {
        return Jet::constant(c, y.order()) / y;
    }
    friend Jet operator/(const Jet& x, double c) { return x * (1.0 / c); }

    friend Jet exp(const Jet& x) {
        Jet r(x.order());
        r.a_[0] = std::exp(x.coeff(0));
        for (int k = 1; k <= r.order(); ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * x.coeff(j) * r.coeff(k - j);
            r.a_[static_cast<size_t>(k)] = s / k;
        }
        return r;
    }

    friend Jet log(const Jet& x) {
        if (x.coeff(0) <= 0.0) throw std::domain_error("jet log of non-positive value");
        Jet r(x.order());
        r.a_[0] = std::log(x.coeff(0));
        for (int k = 1; k <= r.order(); ++k) {
            double s = k * x.coeff(k);
            for (int j = 1; j < k; ++j) s -= j * r.coeff(j) * x.coeff(k - j);
            r.a_[static_cast<size_t>(k)] = s / (k * x.coeff(0));
        }
        return r;
    }

    // x^p for real p (requires positive value part).
    friend Jet pow(const Jet& x, double p) {
        if (x.coeff(0) <= 0.0) throw std::domain_error("jet pow of non-positive value");
        Jet r(x.order());
        r.a_[0] = std::pow(x.coeff(0), p);
        for (int k = 1; k <= r.order(); ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j)
                s += ((p + 1.0) * j - k) * x.coeff(j) * r.coeff(k - j);
            r.a_[static_cast<size_t>(k)] = s / (k * x.coeff(0));
        }
        return r;
    }

    friend Jet sqrt(const Jet& x) { return pow(x, 0.5); }

    friend Jet sin(const Jet& x) {
        Jet s(x.order()), c(x.order());
        sincos_impl(x, s, c);
        return s;
    }
    friend Jet cos(const Jet& x) {
        Jet s(x.order()), c(x.order());
        sincos_impl(x, s, c);
        return c;
    }

  private:
    static void sincos_impl(const Jet& x, Jet& s, Jet& c) {
        s.a_[0] = std::sin(x.coeff(0));
        c.a_[0] = std::cos(x.coeff(0));
        for (int k = 1; k <= x.order(); ++k) {
            double ss = 0.0, cc = 0.0;
            for (int j = 1; j <= k; ++j) {
                ss += j * x.coeff(j) * c.coeff(k - j);
                cc -= j * x.coeff(j) * s.coeff(k - j);
            }
            s.a_[static_cast<size_t>(k)] = ss / k;
            c.a_[static_cast<size_t>(k)] = cc / k;
        }
    }

    std::vector<double> a_;
};

}  // namespace isolab
