#include "isolab/grassmann.hpp"

#include <cmath>

namespace isolab {

SmoothFn smooth_exp() {
    return SmoothFn{[](double x, int) { return std::exp(x); }};
}

SmoothFn smooth_log() {
    return SmoothFn{[](double x, int n) {
        if (n == 0) return std::log(x);
        double c = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n-1)
        for (int k = 1; k < n; ++k) c *= k;    // (n-1)!
        return c * std::pow(x, -n);
    }};
}

SmoothFn smooth_pow(double p) {
    return SmoothFn{[p](double x, int n) {
        double c = 1.0;
        for (int k = 0; k < n; ++k) c *= (p - k);
        return c * std::pow(x, p - n);
    }};
}

SmoothFn smooth_sqrt() { return smooth_pow(0.5); }
SmoothFn smooth_inv() { return smooth_pow(-1.0); }

SmoothFn smooth_sin() {
    return SmoothFn{[](double x, int n) {
        switch (n & 3) {
            case 0: return std::sin(x);
            case 1: return std::cos(x);
            case 2: return -std::sin(x);
            default: return -std::cos(x);
        }
    }};
}

SmoothFn smooth_cos() {
    return SmoothFn{[](double x, int n) {
        switch (n & 3) {
            case 0: return std::cos(x);
            case 1: return -std::sin(x);
            case 2: return -std::cos(x);
            default: return std::sin(x);
        }
    }};
}

SmoothFn smooth_from_jet(std::function<Jet(const Jet&)> f) {
    return SmoothFn{[f = std::move(f)](double x, int n) {
        return f(Jet::variable(x, n)).derivative(n);
    }};
}

namespace {

void apply_smooth_multi_rec(const SmoothFnMulti& g, const std::vector<double>& x0,
                            const std::vector<GA<double>>& nil,
                            const std::vector<std::vector<GA<double>>>& powers,
                            std::vector<int>& alpha, size_t comp, double inv_factorials,
                            const GA<double>& partial, GA<double>& out) {
    if (comp == nil.size()) {
        GA<double> term = partial;
        term.scale(g.derivative(x0, alpha) * inv_factorials);
        out += term;
        return;
    }
    // alpha_comp = 0
    alpha[comp] = 0;
    apply_smooth_multi_rec(g, x0, nil, powers, alpha, comp + 1, inv_factorials, partial,
                           out);
    // higher orders while the wedge power survives
    double fact = 1.0;
    for (int p = 1; p < static_cast<int>(powers[comp].size()); ++p) {
        fact *= p;
        GA<double> next = wedge(partial, powers[comp][static_cast<size_t>(p)]);
        if (next.is_zero()) break;
        alpha[comp] = p;
        apply_smooth_multi_rec(g, x0, nil, powers, alpha, comp + 1,
                               inv_factorials / fact, next, out);
    }
    alpha[comp] = 0;
}

}  // namespace

GA<double> apply_smooth(const SmoothFnMulti& g, const std::vector<GA<double>>& F) {
    if (F.empty()) throw DimensionMismatch("apply_smooth needs at least one argument");
    const int m = F[0].n_gen();
    std::vector<double> x0(F.size());
    std::vector<GA<double>> nil;
    std::vector<std::vector<GA<double>>> powers;
    nil.reserve(F.size());
    powers.reserve(F.size());
    for (size_t k = 0; k < F.size(); ++k) {
        F[k].check_same(F[0]);
        if (!F[k].is_even()) throw OddInput("apply_smooth needs even arguments");
        x0[k] = F[k].body();
        GA<double> n = F[k];
        n.coeff(0) = 0.0;
        nil.push_back(n);
        // precompute wedge powers n^0, n^1, ... until they vanish
        std::vector<GA<double>> pw{GA<double>::scalar(m, 1.0)};
        for (int p = 1; 2 * p <= m; ++p) {
            GA<double> next = wedge(pw.back(), n);
            if (next.is_zero()) break;
            pw.push_back(next);
        }
        powers.push_back(std::move(pw));
    }
    GA<double> out(m);
    std::vector<int> alpha(F.size(), 0);
    apply_smooth_multi_rec(g, x0, nil, powers, alpha, 0, 1.0, GA<double>::scalar(m, 1.0),
                           out);
    return out;
}

double berezin_integral(const std::function<GA<double>(const std::vector<double>&)>& F,
                        const std::vector<QuadRule>& grid, int n_pairs) {
    const size_t d = grid.size();
    std::vector<size_t> idx(d, 0);
    std::vector<double> x(d, 0.0);
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (size_t k = 0; k < d; ++k) {
            x[k] = grid[k].nodes[idx[k]];
            w *= grid[k].weights[idx[k]];
        }
        total += w * berezin_top(F(x));
        size_t k = 0;
        for (; k < d; ++k) {
            if (++idx[k] < grid[k].size()) break;
            idx[k] = 0;
        }
        if (k == d) break;
    }
    double norm = std::pow(2.0 * std::numbers::pi, -n_pairs);
    return norm * total;
}

double grassmann_gaussian_det(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("matrix must be square");
    const int n = static_cast<int>(A.rows());
    if (n < 1) throw DimensionMismatch("matrix must be non-empty");
    if (2 * n > kMaxGenerators)
        throw CostGateExceeded("gaussian grassmann integral supported up to N = 12");

    const size_t size = size_t{1} << (2 * n);
    std::vector<double> arr(size, 0.0);
    arr[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double c = A(i, j);
            if (c == 0.0) continue;
            const uint32_t xi = 1u << (2 * i);
            const uint32_t eta = 1u << (2 * j + 1);
            const uint32_t bits = xi | eta;
            // coefficient of e_bits representing xi_i eta_j in canonical order
            const double sigma = (2 * i < 2 * j + 1) ? 1.0 : -1.0;
            // multiply in place by (1 + c xi_i eta_j); iterate sources in
            // descending order so each target (a strictly larger mask) has
            // already been consumed as a source
            for (uint32_t mask = static_cast<uint32_t>(size - 1);; --mask) {
                if ((mask & bits) == 0 && arr[mask] != 0.0) {
                    double s = sigma * detail::wedge_sign(bits, mask);
                    arr[mask | bits] += c * s * arr[mask];
                }
                if (mask == 0) break;
            }
        }
    }
    return arr[size - 1];
}

GA<double> ga_det(const GAMat& M) {
    const size_t n = M.size();
    if (n == 0) throw DimensionMismatch("empty matrix");
    for (const auto& row : M)
        if (row.size() != n) throw DimensionMismatch("matrix must be square");
    const int m = M[0][0].n_gen();
    if (n > 8) throw CostGateExceeded("ga_det supported up to 8 x 8");

    // Leibniz expansion; entries commute (even subalgebra).
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    GA<double> out(m);
    std::vector<char> used(n, 0);
    std::function<void(size_t, int, GA<double>)> rec = [&](size_t row, int sign,
                                                           GA<double> prod) {
        if (row == n) {
            if (sign < 0) prod = -prod;
            out += prod;
            return;
        }
        for (size_t col = 0; col < n; ++col) {
            if (used[col]) continue;
            if (M[row][col].is_zero()) continue;
            used[col] = 1;
            int swaps = 0;
            for (size_t c = 0; c < col; ++c)
                if (!used[c]) ++swaps;
            // parity contribution: number of unused columns skipped
            rec(row + 1, (swaps & 1) ? -sign : sign, wedge(prod, M[row][col]));
            used[col] = 0;
        }
    };
    rec(0, 1, GA<double>::scalar(m, 1.0));
    return out;
}

namespace {

GAMat ga_mat_mul(const GAMat& X, const GAMat& Y, int m) {
    const size_t r = X.size(), k = Y.size(), c = Y.empty() ? 0 : Y[0].size();
    GAMat out(r, std::vector<GA<double>>(c, GA<double>(m)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) {
            GA<double> s(m);
            for (size_t t = 0; t < k; ++t) s += wedge(X[i][t], Y[t][j]);
            out[i][j] = s;
        }
    return out;
}

void check_block(const GAMat& M, size_t rows, size_t cols, bool want_even,
                 const char* name) {
    if (M.size() != rows) throw DimensionMismatch(std::string(name) + ": bad row count");
    for (const auto& row : M) {
        if (row.size() != cols)
            throw DimensionMismatch(std::string(name) + ": bad column count");
        for (const auto& e : row) {
            if (want_even && !e.is_even())
                throw OddInput(std::string(name) + ": expected even entries");
            if (!want_even && !e.is_odd())
                throw OddInput(std::string(name) + ": expected odd entries");
        }
    }
}

}  // namespace

GA<double> superdeterminant(const GAMat& A, const GAMat& B, const GAMat& C,
                            const GAMat& D) {
    const size_t p = A.size();
    const size_t q = D.size();
    if (p == 0 || q == 0) throw DimensionMismatch("empty diagonal block");
    const int m = A[0][0].n_gen();
    check_block(A, p, p, true, "A");
    check_block(D, q, q, true, "D");
    check_block(B, p, q, false, "B");
    check_block(C, q, p, false, "C");

    // Body of D must be invertible.
    Eigen::MatrixXd D0(q, q);
    for (size_t i = 0; i < q; ++i)
        for (size_t j = 0; j < q; ++j) D0(static_cast<int>(i), static_cast<int>(j)) = D[i][j].body();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D0);
    if (!lu.isInvertible()) throw SingularDBlock("body of D block is singular");
    Eigen::MatrixXd D0inv = lu.inverse();

    // D^{-1} = (I + D0^{-1} Dn)^{-1} D0^{-1}, with Dn nilpotent.
    GAMat K(q, std::vector<GA<double>>(q, GA<double>(m)));  // D0^{-1} Dn
    for (size_t i = 0; i < q; ++i)
        for (size_t j = 0; j < q; ++j) {
            GA<double> s(m);
            for (size_t t = 0; t < q; ++t) {
                GA<double> nil = D[t][j];
                nil.coeff(0) = 0.0;
                nil.scale(D0inv(static_cast<int>(i), static_cast<int>(t)));
                s += nil;
            }
            K[i][j] = s;
        }

    // Neumann series sum_p (-K)^p; K entries have degree >= 2.
    GAMat series(q, std::vector<GA<double>>(q, GA<double>(m)));
    GAMat power = series;
    for (size_t i = 0; i < q; ++i) {
        series[i][i] = GA<double>::scalar(m, 1.0);
        power[i][i] = GA<double>::scalar(m, 1.0);
    }
    for (int step = 1; 2 * step <= m; ++step) {
        power = ga_mat_mul(power, K, m);
        bool all_zero = true;
        for (size_t i = 0; i < q && all_zero; ++i)
            for (size_t j = 0; j < q && all_zero; ++j)
                if (!power[i][j].is_zero()) all_zero = false;
        if (all_zero) break;
        for (size_t i = 0; i < q; ++i)
            for (size_t j = 0; j < q; ++j) {
                GA<double> t = power[i][j];
                if (step & 1) t = -t;
                series[i][j] += t;
            }
    }
    GAMat Dinv(q, std::vector<GA<double>>(q, GA<double>(m)));
    for (size_t i = 0; i < q; ++i)
        for (size_t j = 0; j < q; ++j) {
            GA<double> s(m);
            for (size_t t = 0; t < q; ++t) {
                GA<double> term = series[i][t];
                term.scale(D0inv(static_cast<int>(t), static_cast<int>(j)));
                s += term;
            }
            Dinv[i][j] = s;
        }

    // S = A - B D^{-1} C
    GAMat BDC = ga_mat_mul(ga_mat_mul(B, Dinv, m), C, m);
    GAMat S(p, std::vector<GA<double>>(p, GA<double>(m)));
    for (size_t i = 0; i < p; ++i)
        for (size_t j = 0; j < p; ++j) S[i][j] = A[i][j] - BDC[i][j];

    GA<double> detS = ga_det(S);
    GA<double> detD = ga_det(D);
    if (detD.body() == 0.0) throw SingularDBlock("det(D) has vanishing body");
    return wedge(detS, ga_inverse(detD));
}

}  // namespace isolab
