#pragma once

// Superfields: functions of N bosonic coordinate pairs (x_i, y_i) with
// values in the Grassmann algebra over the N generator pairs
// (xi_i, eta_i).  A field is a pure evaluation closure; `eval_dual`
// evaluates with forward-mode scalars and enables one level of
// differentiation with respect to the even coordinates, which is what
// the supersymmetry generator needs.

#include <functional>
#include <vector>

#include "isolab/dual.hpp"
#include "isolab/errors.hpp"
#include "isolab/grassmann.hpp"

namespace isolab {

struct SuperField {
    int n_vertices = 0;  // generator pairs; even coords are (x_0, y_0, x_1, y_1, ...)
    std::function<GA<double>(const std::vector<double>&)> eval;
    std::function<GA<Dual>(const std::vector<Dual>&)> eval_dual;
};

// Builds a field from a scalar-generic closure: body(coords) must
// accept both std::vector<double> and std::vector<Dual> and return the
// matching GA type.
template <class Body>
SuperField make_superfield(int n_vertices, Body body) {
    SuperField f;
    f.n_vertices = n_vertices;
    f.eval = [body](const std::vector<double>& p) { return body(p); };
    f.eval_dual = [body](const std::vector<Dual>& p) { return body(p); };
    return f;
}

// The supersymmetry generator
//   Q = sum_i ( xi_i d/dx_i + eta_i d/dy_i - x_i d/d(eta_i) + y_i d/d(xi_i) ).
// The result evaluates pointwise; it carries no eval_dual, so applying
// susy_Q twice throws DerivativeUnavailable.
inline SuperField susy_Q(const SuperField& f) {
    if (!f.eval_dual)
        throw DerivativeUnavailable("field does not support differentiation");
    SuperField out;
    out.n_vertices = f.n_vertices;
    const int n = f.n_vertices;
    auto base = f.eval_dual;
    out.eval = [base, n](const std::vector<double>& p) -> GA<double> {
        const size_t dim = 2 * static_cast<size_t>(n);
        if (p.size() != dim) throw DimensionMismatch("wrong coordinate count");
        std::vector<Dual> pd(dim);
        for (size_t k = 0; k < dim; ++k) pd[k] = Dual::variable(p[k], dim, k);
        GA<Dual> G = base(pd);

        const int m = 2 * n;
        const uint32_t full = G.full_mask();
        GA<double> value(m);
        for (uint32_t mask = 0; mask <= full; ++mask) value.coeff(mask) = G.coeff(mask).v;

        GA<double> result(m);
        for (int i = 0; i < n; ++i) {
            const int xi = 2 * i, eta = 2 * i + 1;
            GA<double> dx(m), dy(m);
            for (uint32_t mask = 0; mask <= full; ++mask) {
                dx.coeff(mask) = G.coeff(mask).grad(static_cast<size_t>(2 * i));
                dy.coeff(mask) = G.coeff(mask).grad(static_cast<size_t>(2 * i + 1));
            }
            result += wedge(GA<double>::generator(m, xi), dx);
            result += wedge(GA<double>::generator(m, eta), dy);
            GA<double> deta = left_derivative(value, eta);
            deta.scale(-p[static_cast<size_t>(2 * i)]);
            result += deta;
            GA<double> dxi = left_derivative(value, xi);
            dxi.scale(p[static_cast<size_t>(2 * i + 1)]);
            result += dxi;
        }
        return result;
    };
    // no eval_dual: second derivatives are out of contract
    return out;
}

}  // namespace isolab
