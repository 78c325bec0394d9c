#pragma once

// Dense Grassmann algebra kernel.
//
// Elements of the algebra over M anticommuting generators are stored as
// 2^M coefficients indexed by bitmask; bit k set means generator k is
// present, and the stored coefficient refers to the basis monomial with
// generators in ascending index order.  Generators come in pairs
// (xi_i, eta_i) = (bit 2i, bit 2i+1), so the full-mask basis monomial
// is exactly xi_1 eta_1 xi_2 eta_2 ... -- the monomial whose
// coefficient the superintegral extracts.
//
// Smooth functions are applied to even arguments by exact Taylor
// expansion in the nilpotent part; derivative tables are analytic or
// jet-propagated, never finite differences.

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "isolab/dual.hpp"
#include "isolab/errors.hpp"
#include "isolab/jet.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

inline bool ga_coeff_zero(double x) { return x == 0.0; }
inline bool ga_coeff_zero(const Dual& d) { return d.is_zero(); }

namespace detail {

// Sign of e_a ^ e_b for disjoint masks a, b (canonical ordering).
inline int wedge_sign(uint32_t a, uint32_t b) {
    int inversions = 0;
    uint32_t x = a;
    while (x) {
        int i = std::countr_zero(x);
        inversions += std::popcount(b & ((1u << i) - 1u));
        x &= x - 1;
    }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace detail

constexpr int kMaxGenerators = 24;

template <class T>
class GA {
  public:
    explicit GA(int n_gen) : m_(n_gen) {
        if (n_gen < 0 || n_gen > kMaxGenerators)
            throw DimensionMismatch("generator count out of range");
        c_.assign(size_t{1} << n_gen, T{});
    }

    static GA scalar(int n_gen, const T& v) {
        GA g(n_gen);
        g.c_[0] = v;
        return g;
    }

    static GA generator(int n_gen, int k) {
        GA g(n_gen);
        if (k < 0 || k >= n_gen) throw DimensionMismatch("generator index out of range");
        g.c_[size_t{1} << k] = T(1.0);
        return g;
    }

    int n_gen() const { return m_; }
    uint32_t full_mask() const { return static_cast<uint32_t>((size_t{1} << m_) - 1); }
    size_t size() const { return c_.size(); }

    const T& coeff(uint32_t mask) const { return c_[mask]; }
    T& coeff(uint32_t mask) { return c_[mask]; }
    const T& body() const { return c_[0]; }

    bool is_zero() const {
        for (const T& v : c_)
            if (!ga_coeff_zero(v)) return false;
        return true;
    }
    bool is_even() const {
        for (size_t m = 0; m < c_.size(); ++m)
            if ((std::popcount(static_cast<uint32_t>(m)) & 1) && !ga_coeff_zero(c_[m]))
                return false;
        return true;
    }
    bool is_odd() const {
        for (size_t m = 0; m < c_.size(); ++m)
            if (!(std::popcount(static_cast<uint32_t>(m)) & 1) && !ga_coeff_zero(c_[m]))
                return false;
        return true;
    }

    GA& operator+=(const GA& o) {
        check_same(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        return *this;
    }
    GA& operator-=(const GA& o) {
        check_same(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        return *this;
    }
    friend GA operator+(GA a, const GA& b) { return a += b; }
    friend GA operator-(GA a, const GA& b) { return a -= b; }
    friend GA operator-(const GA& a) {
        GA r = a;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    GA& scale(const T& s) {
        for (auto& v : c_) v = v * s;
        return *this;
    }
    friend GA operator*(GA a, const T& s) { return a.scale(s); }
    friend GA operator*(const T& s, GA a) { return a.scale(s); }

    void check_same(const GA& o) const {
        if (o.m_ != m_) throw DimensionMismatch("mixed generator counts");
    }

  private:
    int m_;
    std::vector<T> c_;
};

template <class T>
GA<T> wedge(const GA<T>& a, const GA<T>& b) {
    a.check_same(b);
    const int m = a.n_gen();
    GA<T> out(m);
    const uint32_t full = a.full_mask();
    for (uint32_t am = 0; am <= full; ++am) {
        if (ga_coeff_zero(a.coeff(am))) continue;
        const uint32_t rest = full & ~am;
        // enumerate subsets of the complement, including the empty set
        uint32_t bm = rest;
        for (;;) {
            if (!ga_coeff_zero(b.coeff(bm))) {
                int s = detail::wedge_sign(am, bm);
                T term = a.coeff(am) * b.coeff(bm);
                if (s < 0) term = -term;
                out.coeff(am | bm) = out.coeff(am | bm) + term;
            }
            if (bm == 0) break;
            bm = (bm - 1) & rest;
        }
    }
    return out;
}

// Left derivative: d/d(gen k) acting from the left.
template <class T>
GA<T> left_derivative(const GA<T>& a, int k) {
    if (k < 0 || k >= a.n_gen()) throw DimensionMismatch("generator index out of range");
    GA<T> out(a.n_gen());
    const uint32_t bit = 1u << k;
    const uint32_t full = a.full_mask();
    for (uint32_t m = 0; m <= full; ++m) {
        if (!(m & bit) || ga_coeff_zero(a.coeff(m))) continue;
        int below = std::popcount(m & (bit - 1u));
        T v = a.coeff(m);
        if (below & 1) v = -v;
        out.coeff(m & ~bit) = out.coeff(m & ~bit) + v;
    }
    return out;
}

// Coefficient of the full monomial xi_1 eta_1 ... xi_n eta_n.
template <class T>
const T& berezin_top(const GA<T>& a) {
    return a.coeff(a.full_mask());
}

// ------------------------------------------------------------ smooth maps

// A smooth function of one variable given by its derivative ladder:
// derivative(x, 0) = f(x), derivative(x, n) = f^(n)(x).
struct SmoothFn {
    std::function<double(double, int)> derivative;
    double operator()(double x) const { return derivative(x, 0); }
};

SmoothFn smooth_exp();
SmoothFn smooth_log();
SmoothFn smooth_sqrt();
SmoothFn smooth_inv();
SmoothFn smooth_pow(double p);
SmoothFn smooth_sin();
SmoothFn smooth_cos();
// Wraps an arbitrary jet-evaluable function; derivatives come from
// exact Taylor propagation.
SmoothFn smooth_from_jet(std::function<Jet(const Jet&)> f);

namespace detail {
inline double smooth_derivative_at(const SmoothFn& f, double x, int order) {
    return f.derivative(x, order);
}
inline Dual smooth_derivative_at(const SmoothFn& f, const Dual& x, int order) {
    Dual r(f.derivative(x.v, order));
    detail::scale1(x, f.derivative(x.v, order + 1), r);
    return r;
}
}  // namespace detail

// f(F) for an even argument F, by Taylor expansion around the body of F.
template <class T>
GA<T> apply_smooth(const SmoothFn& f, const GA<T>& F) {
    if (!F.is_even()) throw OddInput("apply_smooth needs an even argument");
    const int m = F.n_gen();
    const T x0 = F.body();
    GA<T> nil = F;
    nil.coeff(0) = T{};

    GA<T> result = GA<T>::scalar(m, detail::smooth_derivative_at(f, x0, 0));
    if (nil.is_zero()) return result;

    GA<T> power = GA<T>::scalar(m, T(1.0));
    double factorial = 1.0;
    for (int p = 1; 2 * p <= m; ++p) {
        power = wedge(power, nil);
        if (power.is_zero()) break;
        factorial *= p;
        GA<T> term = power;
        term.scale(detail::smooth_derivative_at(f, x0, p) * T(1.0 / factorial));
        result += term;
    }
    return result;
}

// Multivariate version: g applied to a tuple of even arguments.
// derivative(x0, alpha) must return the mixed partial d^alpha g at x0.
struct SmoothFnMulti {
    std::function<double(const std::vector<double>&, const std::vector<int>&)> derivative;
};

GA<double> apply_smooth(const SmoothFnMulti& g, const std::vector<GA<double>>& F);

// Convenience wrappers used throughout the superspin module.
template <class T>
GA<T> ga_exp(const GA<T>& F) {
    return apply_smooth(smooth_exp(), F);
}
template <class T>
GA<T> ga_sqrt(const GA<T>& F) {
    return apply_smooth(smooth_sqrt(), F);
}

// Inverse of an even element with non-vanishing body.
template <class T>
GA<T> ga_inverse(const GA<T>& F) {
    if (!F.is_even()) throw OddInput("ga_inverse needs an even argument");
    return apply_smooth(smooth_inv(), F);
}

// ---------------------------------------------------- module level ops

// Integral over R^d x (Berezin over all generator pairs):
//   sum over grid of weight * top-coefficient(F(x)) * (2 pi)^(-n_pairs).
// The grid is a tensor product of one-dimensional rules.
double berezin_integral(const std::function<GA<double>(const std::vector<double>&)>& F,
                        const std::vector<QuadRule>& grid, int n_pairs);

// Top coefficient of prod_{ij} (1 + A_ij xi_i eta_j); equals det(A).
// Supported up to N = 12.
double grassmann_gaussian_det(const Eigen::MatrixXd& A);

// ------------------------------------------------------ superdeterminant

using GAMat = std::vector<std::vector<GA<double>>>;

// Berezinian of the block supermatrix [[A, B], [C, D]]:
//   det(A - B D^{-1} C) * det(D)^{-1}
// A (p x p) and D (q x q) must have even entries, B (p x q) and
// C (q x p) odd entries.  Throws SingularDBlock when the body of D is
// singular.
GA<double> superdeterminant(const GAMat& A, const GAMat& B, const GAMat& C,
                            const GAMat& D);

// Determinant of a matrix with commuting (even) entries.
GA<double> ga_det(const GAMat& M);

}  // namespace isolab
