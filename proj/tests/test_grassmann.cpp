#include <doctest.h>

#include <cmath>
#include <random>

#include "isolab/grassmann.hpp"
#include "isolab/superfield.hpp"

using namespace isolab;

namespace {

// deterministic pseudo-random doubles for test fixtures
double rnd(std::mt19937& gen, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen);
}

}  // namespace

TEST_CASE("wedge basics") {
    // two pairs: xi_1 = gen 0, eta_1 = gen 1, xi_2 = gen 2, eta_2 = gen 3
    auto xi1 = GA<double>::generator(4, 0);
    auto eta1 = GA<double>::generator(4, 1);
    auto xi2 = GA<double>::generator(4, 2);

    // xi_1 ^ xi_2 = + (basis monomial xi_1 xi_2)
    auto p = wedge(xi1, xi2);
    CHECK(p.coeff(0b0101) == 1.0);
    // antisymmetry
    auto q = wedge(xi2, xi1);
    CHECK(q.coeff(0b0101) == -1.0);
    // nilpotency
    CHECK(wedge(xi1, xi1).is_zero());

    // associativity spot check with mixed elements
    auto a = GA<double>::scalar(4, 2.0) + xi1;
    auto b = eta1 + xi2 * 3.0;
    auto c = GA<double>::scalar(4, -1.0) + wedge(xi1, eta1);
    auto left = wedge(wedge(a, b), c);
    auto right = wedge(a, wedge(b, c));
    for (uint32_t m = 0; m < 16; ++m) CHECK(left.coeff(m) == doctest::Approx(right.coeff(m)));

    // parity bookkeeping
    CHECK(xi1.is_odd());
    CHECK(!xi1.is_even());
    CHECK(wedge(xi1, eta1).is_even());
    CHECK(GA<double>(4).is_even());  // zero element is both
    CHECK(GA<double>(4).is_odd());

    CHECK_THROWS_AS(wedge(GA<double>(2), GA<double>(4)), DimensionMismatch);
}

TEST_CASE("left derivative") {
    // d/d(xi_2) (xi_1 xi_2) = -xi_1
    auto xi1 = GA<double>::generator(4, 0);
    auto xi2 = GA<double>::generator(4, 2);
    auto m = wedge(xi1, xi2);
    auto d = left_derivative(m, 2);
    CHECK(d.coeff(0b0001) == -1.0);
    // d/d(xi_1) (xi_1 xi_2) = +xi_2
    auto d2 = left_derivative(m, 0);
    CHECK(d2.coeff(0b0100) == 1.0);
    // derivative of an absent generator vanishes
    CHECK(left_derivative(m, 1).is_zero());
    CHECK_THROWS_AS(left_derivative(m, 7), DimensionMismatch);
}

TEST_CASE("jet arithmetic gives exact derivatives") {
    // f(t) = exp(-1/t) at t = 0.7, derivatives up to order 4
    Jet t = Jet::variable(0.7, 4);
    Jet f = exp(-1.0 / t);
    double v = std::exp(-1.0 / 0.7);
    CHECK(f.derivative(0) == doctest::Approx(v).epsilon(1e-13));
    CHECK(f.derivative(1) == doctest::Approx(v / (0.7 * 0.7)).epsilon(1e-12));
    // second derivative: f'' = f * (1/t^4 - 2/t^3)
    double want2 = v * (1.0 / std::pow(0.7, 4) - 2.0 / std::pow(0.7, 3));
    CHECK(f.derivative(2) == doctest::Approx(want2).epsilon(1e-12));

    // sin, sqrt, log, pow against closed forms
    Jet x = Jet::variable(1.3, 5);
    CHECK(sin(x).derivative(3) == doctest::Approx(-std::cos(1.3)).epsilon(1e-12));
    CHECK(sqrt(x).derivative(2) == doctest::Approx(-0.25 * std::pow(1.3, -1.5)).epsilon(1e-12));
    CHECK(log(x).derivative(3) == doctest::Approx(2.0 / std::pow(1.3, 3)).epsilon(1e-12));
    CHECK(pow(x, 2.5).derivative(1) == doctest::Approx(2.5 * std::pow(1.3, 1.5)).epsilon(1e-12));
}

TEST_CASE("apply_smooth on even arguments") {
    // exp(-x^2 - xi_1 xi_2) = exp(-x^2) (1 - xi_1 xi_2)
    const double x = 0.8;
    auto xi1 = GA<double>::generator(4, 0);
    auto xi2 = GA<double>::generator(4, 2);
    auto arg = GA<double>::scalar(4, -x * x) - wedge(xi1, xi2);
    auto e = ga_exp(arg);
    CHECK(e.coeff(0) == doctest::Approx(std::exp(-x * x)).epsilon(1e-14));
    CHECK(e.coeff(0b0101) == doctest::Approx(-std::exp(-x * x)).epsilon(1e-14));

    // sqrt(1 + 2 xi_1 eta_1) = 1 + xi_1 eta_1
    auto pair = wedge(GA<double>::generator(2, 0), GA<double>::generator(2, 1));
    auto s = ga_sqrt(GA<double>::scalar(2, 1.0) + pair * 2.0);
    CHECK(s.coeff(0) == doctest::Approx(1.0));
    CHECK(s.coeff(0b11) == doctest::Approx(1.0));

    // inverse really inverts
    auto v = GA<double>::scalar(2, 2.0) + pair * 0.7;
    auto inv = ga_inverse(v);
    auto prod = wedge(v, inv);
    CHECK(prod.coeff(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(prod.coeff(0b11)) < 1e-14);

    // odd arguments are rejected
    CHECK_THROWS_AS(ga_exp(GA<double>::generator(2, 0)), OddInput);

    // higher nilpotent orders: exp over two pairs needs the quadratic term
    auto p1 = wedge(GA<double>::generator(4, 0), GA<double>::generator(4, 1));
    auto p2 = wedge(GA<double>::generator(4, 2), GA<double>::generator(4, 3));
    auto big = ga_exp(p1 * 2.0 + p2 * 3.0);
    CHECK(big.coeff(0) == doctest::Approx(1.0));
    // top coefficient: product term 2*3 (cross term of N^2/2! counted twice)
    CHECK(berezin_top(big) == doctest::Approx(6.0).epsilon(1e-14));

    // multivariate version against the univariate one
    SmoothFnMulti gm{[](const std::vector<double>& x0, const std::vector<int>& alpha) {
        // g(u, v) = exp(u) * v^2
        double du = std::exp(x0[0]);
        double v = x0[1];
        int k = alpha[1];
        double dv = k == 0 ? v * v : (k == 1 ? 2.0 * v : (k == 2 ? 2.0 : 0.0));
        return du * dv;
    }};
    auto F1 = GA<double>::scalar(4, 0.3) + p1 * 1.5;
    auto F2 = GA<double>::scalar(4, 2.0) + p2 * 0.5;
    auto got = apply_smooth(gm, {F1, F2});
    auto want = wedge(ga_exp(F1), wedge(F2, F2));
    for (uint32_t m = 0; m < 16; ++m)
        CHECK(got.coeff(m) == doctest::Approx(want.coeff(m)).epsilon(1e-13));
}

TEST_CASE("gaussian grassmann integral equals the determinant") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 3, 4;
    CHECK(grassmann_gaussian_det(a) == doctest::Approx(-2.0).epsilon(1e-14));

    std::mt19937 gen(7);
    for (int n = 1; n <= 5; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::MatrixXd m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = rnd(gen, -2.0, 2.0);
            double want = m.determinant();
            double got = grassmann_gaussian_det(m);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }

    Eigen::MatrixXd bad(2, 3);
    CHECK_THROWS_AS(grassmann_gaussian_det(bad), DimensionMismatch);
    Eigen::MatrixXd huge = Eigen::MatrixXd::Identity(13, 13);
    CHECK_THROWS_AS(grassmann_gaussian_det(huge), CostGateExceeded);
}

namespace {

// random supermatrix blocks over two generator pairs
void random_super(std::mt19937& gen, int m, GAMat& A, GAMat& B, GAMat& C, GAMat& D) {
    auto pair1 = wedge(GA<double>::generator(m, 0), GA<double>::generator(m, 1));
    auto pair2 = wedge(GA<double>::generator(m, 2), GA<double>::generator(m, 3));
    auto even_entry = [&](double base) {
        return GA<double>::scalar(m, base) + pair1 * rnd(gen, -0.4, 0.4) +
               pair2 * rnd(gen, -0.4, 0.4) + wedge(pair1, pair2) * rnd(gen, -0.2, 0.2);
    };
    auto odd_entry = [&]() {
        GA<double> e(m);
        for (int k = 0; k < 4; ++k) e += GA<double>::generator(m, k) * rnd(gen, -0.5, 0.5);
        return e;
    };
    A = {{even_entry(rnd(gen, 1.0, 2.0))}};
    D = {{even_entry(rnd(gen, 1.0, 2.0))}};
    B = {{odd_entry()}};
    C = {{odd_entry()}};
}

GAMat mat2_mul(const GAMat& X, const GAMat& Y) {
    size_t n = X.size();
    GAMat out(n, std::vector<GA<double>>(n, GA<double>(X[0][0].n_gen())));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            GA<double> s(X[0][0].n_gen());
            for (size_t t = 0; t < n; ++t) s += wedge(X[i][t], Y[t][j]);
            out[i][j] = s;
        }
    return out;
}

}  // namespace

TEST_CASE("superdeterminant") {
    const int m = 4;
    auto pair1 = wedge(GA<double>::generator(m, 0), GA<double>::generator(m, 1));

    SUBCASE("diagonal blocks reduce to a ratio of determinants") {
        GAMat A = {{GA<double>::scalar(m, 3.0)}};
        GAMat D = {{GA<double>::scalar(m, 2.0)}};
        GAMat B = {{GA<double>(m)}};
        GAMat C = {{GA<double>(m)}};
        auto s = superdeterminant(A, B, C, D);
        CHECK(s.body() == doctest::Approx(1.5));
    }

    SUBCASE("nilpotent D corrections") {
        // D = 1 + c xi1 eta1: sdet(diag(a, D)) = a * (1 - c xi1 eta1)
        GAMat A = {{GA<double>::scalar(m, 2.0)}};
        GAMat D = {{GA<double>::scalar(m, 1.0) + pair1 * 0.5}};
        GAMat B = {{GA<double>(m)}};
        GAMat C = {{GA<double>(m)}};
        auto s = superdeterminant(A, B, C, D);
        CHECK(s.body() == doctest::Approx(2.0));
        CHECK(s.coeff(0b0011) == doctest::Approx(-1.0).epsilon(1e-13));
    }

    SUBCASE("multiplicativity on random supermatrices") {
        std::mt19937 gen(11);
        for (int rep = 0; rep < 25; ++rep) {
            GAMat A1, B1, C1, D1, A2, B2, C2, D2;
            random_super(gen, m, A1, B1, C1, D1);
            random_super(gen, m, A2, B2, C2, D2);
            // assemble 2x2 grids, multiply, split back
            GAMat M1 = {{A1[0][0], B1[0][0]}, {C1[0][0], D1[0][0]}};
            GAMat M2 = {{A2[0][0], B2[0][0]}, {C2[0][0], D2[0][0]}};
            GAMat P = mat2_mul(M1, M2);
            auto s12 = superdeterminant({{P[0][0]}}, {{P[0][1]}}, {{P[1][0]}}, {{P[1][1]}});
            auto s1 = superdeterminant(A1, B1, C1, D1);
            auto s2 = superdeterminant(A2, B2, C2, D2);
            auto prod = wedge(s1, s2);
            for (uint32_t mask = 0; mask < 16; ++mask)
                CHECK(s12.coeff(mask) == doctest::Approx(prod.coeff(mask)).epsilon(1e-11));
        }
    }

    SUBCASE("errors") {
        GAMat A = {{GA<double>::scalar(m, 1.0)}};
        GAMat zero = {{GA<double>(m)}};
        GAMat Dsing = {{pair1 * 1.0}};  // zero body
        CHECK_THROWS_AS(superdeterminant(A, zero, zero, Dsing), SingularDBlock);
        GAMat odd_in_A = {{GA<double>::generator(m, 0)}};
        CHECK_THROWS_AS(superdeterminant(odd_in_A, zero, zero, A), OddInput);
        GAMat even_in_B = {{GA<double>::scalar(m, 1.0)}};
        CHECK_THROWS_AS(superdeterminant(A, even_in_B, zero, A), OddInput);
    }
}

namespace {

// |u_i|^2 and u_i . u_j building blocks over n vertices, scalar-generic
template <class S>
GA<S> dot_uu(int n, int i, int j, const std::vector<S>& p) {
    const int m = 2 * n;
    auto xi = [&](int k) { return GA<S>::generator(m, 2 * k); };
    auto eta = [&](int k) { return GA<S>::generator(m, 2 * k + 1); };
    S xi_ = p[static_cast<size_t>(2 * i)], yi = p[static_cast<size_t>(2 * i + 1)];
    S xj = p[static_cast<size_t>(2 * j)], yj = p[static_cast<size_t>(2 * j + 1)];
    GA<S> out = GA<S>::scalar(m, xi_ * xj + yi * yj);
    out -= wedge(xi(i), eta(j));
    out += wedge(eta(i), xi(j));
    return out;
}

}  // namespace

TEST_CASE("susy generator annihilates the invariant inner product") {
    const int n = 2;
    auto field = make_superfield(n, [n](const auto& p) {
        return dot_uu(n, 0, 1, p);
    });
    auto qf = susy_Q(field);
    std::mt19937 gen(3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> p(4);
        for (auto& v : p) v = rnd(gen, -2.0, 2.0);
        auto g = qf.eval(p);
        for (uint32_t mask = 0; mask < 16; ++mask) CHECK(std::abs(g.coeff(mask)) < 1e-13);
    }

    // |u_i|^2 is also invariant
    auto sq = make_superfield(1, [](const auto& p) { return dot_uu(1, 0, 0, p); });
    auto qsq = susy_Q(sq);
    std::vector<double> pt{0.7, -1.2};
    CHECK(qsq.eval(pt).is_zero());
}

TEST_CASE("susy generator satisfies the graded product rule") {
    const int n = 1, m = 2;
    // even field F and odd field G, both with smooth coefficients
    auto Fb = [m](const auto& p) {
        using S = std::decay_t<decltype(p[0])>;
        using std::exp;
        S x = p[0], y = p[1];
        auto pair = wedge(GA<S>::generator(m, 0), GA<S>::generator(m, 1));
        return GA<S>::scalar(m, x * x + y) + pair * exp(x * y);
    };
    auto Gb = [m](const auto& p) {
        using S = std::decay_t<decltype(p[0])>;
        using std::sin;
        S x = p[0], y = p[1];
        return GA<S>::generator(m, 0) * (x * y) + GA<S>::generator(m, 1) * sin(x + y);
    };
    auto F = make_superfield(n, Fb);
    auto G = make_superfield(n, Gb);
    auto FG = make_superfield(n, [Fb, Gb](const auto& p) { return wedge(Fb(p), Gb(p)); });
    auto GG = make_superfield(n, [Gb](const auto& p) { return wedge(Gb(p), Gb(p)); });

    auto qF = susy_Q(F), qG = susy_Q(G), qFG = susy_Q(FG), qGG = susy_Q(GG);

    std::mt19937 gen(17);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> p{rnd(gen, -1.5, 1.5), rnd(gen, -1.5, 1.5)};
        // F even: Q(FG) = QF G + F QG
        auto lhs = qFG.eval(p);
        auto rhs = wedge(qF.eval(p), G.eval(p)) + wedge(F.eval(p), qG.eval(p));
        for (uint32_t mask = 0; mask < 4; ++mask)
            CHECK(lhs.coeff(mask) == doctest::Approx(rhs.coeff(mask)).epsilon(1e-11));
        // G odd: Q(GG) = QG G - G QG
        auto lhs2 = qGG.eval(p);
        auto rhs2 = wedge(qG.eval(p), G.eval(p)) - wedge(G.eval(p), qG.eval(p));
        for (uint32_t mask = 0; mask < 4; ++mask)
            CHECK(lhs2.coeff(mask) == doctest::Approx(rhs2.coeff(mask)).epsilon(1e-11));
    }

    // one derivative level only
    CHECK_THROWS_AS(susy_Q(qF), DerivativeUnavailable);
}

TEST_CASE("Q-exact forms integrate to zero") {
    // F = (x + y) exp(-|u|^2), integral of QF over R^{2|2} vanishes
    auto Fb = [](const auto& p) {
        using S = std::decay_t<decltype(p[0])>;
        S x = p[0], y = p[1];
        GA<S> usq = dot_uu(1, 0, 0, p);
        return wedge(GA<S>::scalar(2, x + y), ga_exp(-usq));
    };
    auto qF = susy_Q(make_superfield(1, Fb));
    std::vector<QuadRule> grid{gauss_legendre(80, -8.0, 8.0), gauss_legendre(80, -8.0, 8.0)};
    double v = berezin_integral([&](const std::vector<double>& p) { return qF.eval(p); },
                                grid, 1);
    CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("single-site localisation at the kernel level") {
    // (2 pi)^{-1} integral of f(|u|^2 / 2) over R^{2|2} equals f(0)
    auto make_form = [](SmoothFn f) {
        return [f](const std::vector<double>& p) {
            double x = p[0], y = p[1];
            auto pair = wedge(GA<double>::generator(2, 0), GA<double>::generator(2, 1));
            auto ell = GA<double>::scalar(2, 0.5 * (x * x + y * y)) - pair;
            return apply_smooth(f, ell);
        };
    };
    std::vector<QuadRule> grid{gauss_legendre(96, -7.0, 7.0),
                               gauss_legendre(96, -7.0, 7.0)};

    SmoothFn f1 = smooth_from_jet([](const Jet& t) { return exp(-t); });
    CHECK(berezin_integral(make_form(f1), grid, 1) == doctest::Approx(1.0).epsilon(1e-8));

    SmoothFn f2 = smooth_from_jet([](const Jet& t) { return exp(-(t - 1.0) * (t - 1.0)); });
    CHECK(berezin_integral(make_form(f2), grid, 1) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("odd change of variables identity") {
    // integral of d2 d1 F(x, xi1, xi2) dx is invariant under
    // x -> x + g(x) xi1 xi2 with Jacobian factor (1 + g'(x) xi1 xi2)
    SmoothFn f0 = smooth_from_jet([](const Jet& t) { return exp(-t * t); });
    SmoothFn f12 = smooth_from_jet([](const Jet& t) { return (t + 0.3) * exp(-0.5 * t * t); });

    auto run = [&](SmoothFn g, SmoothFn gp) {
        const QuadRule grid = gauss_legendre(120, -9.0, 9.0);
        double lhs = 0.0, rhs = 0.0;
        for (size_t k = 0; k < grid.size(); ++k) {
            double x = grid.nodes[k], w = grid.weights[k];
            auto e12 = wedge(GA<double>::generator(2, 0), GA<double>::generator(2, 1));
            // F(x, xi) = f0(x) + f12(x) xi1 xi2
            lhs += w * f12(x);
            // substituted argument and Jacobian factor
            auto arg = GA<double>::scalar(2, x) + e12 * g(x);
            auto Fsub = apply_smooth(f0, arg) + wedge(apply_smooth(f12, arg), e12);
            auto full = wedge(Fsub, GA<double>::scalar(2, 1.0) + e12 * gp(x));
            rhs += w * berezin_top(full);
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    };

    run(smooth_sin(), smooth_cos());
    run(smooth_from_jet([](const Jet& t) { return t * t * t; }),
        smooth_from_jet([](const Jet& t) { return 3.0 * t * t; }));
}
