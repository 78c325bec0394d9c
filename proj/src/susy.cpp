#include "isolab/susy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nats of certified decay demanded at a truncated box edge.  Five more
// than the classical spin models ask for: the Berezin top coefficient
// multiplies the even density by a polynomial of the coordinates
// (degree at most two per generator pair), and the extra margin
// swallows it together with the 4V entropy coefficient in the radial
// bounds below.
constexpr double kTailNats = 45.0;

// Hard ceiling on tensor-grid evaluations per pass.  The |Lambda|
// gates keep honest use far below this; the ceiling only turns a
// runaway configuration into a clean error.
constexpr double kNodeBudget = 4e7;

bool is_free(const std::optional<SusyPin>& pin, int i) {
    return !pin || pin->vertex != i;
}

int coords_per_vertex(SusyGeometry g) { return g == SusyGeometry::Mink32 ? 3 : 2; }

bool has_derived_z(SusyGeometry g) {
    return g == SusyGeometry::H22 || g == SusyGeometry::S22Plus;
}

void check_pin(const SusyModelSpec& spec, const std::optional<SusyPin>& pin) {
    if (!pin) return;
    if (pin->vertex < 0 || pin->vertex >= spec.graph.n())
        throw ConfigError("pin vertex out of range");
    pin_point(spec.geometry, *pin);  // validates geometry and s
}

// Per-vertex support radii, resolved to a full-size array.
std::vector<double> resolve_radius(const SusyModelSpec& spec, const SuperObservable& F) {
    std::vector<double> r(static_cast<size_t>(spec.graph.n()), kInf);
    if (!F.support.radius.empty()) {
        if (F.support.radius.size() != r.size())
            throw DimensionMismatch("support radius list must have one entry per vertex");
        r = F.support.radius;
    }
    return r;
}

// ---------------------------------------------------------------------------
// evaluation points

GA<double> derived_z(SusyGeometry g, int n_gen, int base, double x, double y) {
    const double q = x * x + y * y;
    GA<double> z(n_gen);
    if (g == SusyGeometry::H22) {
        double Z = std::sqrt(1.0 + q);
        z.coeff(0) = Z;
        if (base >= 0) z.coeff((1u << base) | (1u << (base + 1))) = -1.0 / Z;
    } else {
        if (!(q < 1.0))
            throw DomainViolation("hemispherical point lies outside the open unit ball");
        double Z = std::sqrt(1.0 - q);
        z.coeff(0) = Z;
        if (base >= 0) z.coeff((1u << base) | (1u << (base + 1))) = 1.0 / Z;
    }
    return z;
}

// `even` holds the free vertices' coordinates only, ascending vertex
// order, coords_per_vertex entries each.
SuperPoint build_point(const SusyModelSpec& spec, const std::optional<SusyPin>& pin,
                       const std::vector<double>& even) {
    const int n = spec.graph.n();
    const SusyGeometry g = spec.geometry;

    SuperPoint P;
    P.geometry = g;
    P.gen_base.assign(static_cast<size_t>(n), -1);
    int gens = 0;
    for (int v = 0; v < n; ++v) {
        if (is_free(pin, v)) {
            P.gen_base[static_cast<size_t>(v)] = gens;
            gens += 2;
        }
    }
    P.n_gen = gens;

    P.x.reserve(static_cast<size_t>(n));
    P.y.reserve(static_cast<size_t>(n));
    size_t k = 0;
    for (int v = 0; v < n; ++v) {
        const int base = P.gen_base[static_cast<size_t>(v)];
        if (base < 0) {
            auto [z0, x0] = pin_point(g, *pin);
            P.x.push_back(P.scalar(x0));
            P.y.push_back(P.scalar(0.0));
            if (g != SusyGeometry::R22) P.z.push_back(P.scalar(z0));
            continue;
        }
        if (g == SusyGeometry::Mink32) {
            double zv = even[k++], xv = even[k++], yv = even[k++];
            if (!(zv > 0.0))
                throw DomainViolation("super-Minkowski point needs z > 0");
            double r2 = zv * zv - xv * xv - yv * yv;
            if (!(r2 > 0.0))
                throw DomainViolation(
                    "super-Minkowski point lies outside the open timelike cone");
            P.z.push_back(P.scalar(zv));
            P.x.push_back(P.scalar(xv));
            P.y.push_back(P.scalar(yv));
            // r = sqrt(-u.u) with -u.u = r2 + 2 xi eta, exactly
            // r0 + xi eta / r0 after the nilpotent Taylor step.
            GA<double> r(P.n_gen);
            double r0 = std::sqrt(r2);
            r.coeff(0) = r0;
            r.coeff((1u << base) | (1u << (base + 1))) = 1.0 / r0;
            P.r.push_back(std::move(r));
        } else {
            double xv = even[k++], yv = even[k++];
            P.x.push_back(P.scalar(xv));
            P.y.push_back(P.scalar(yv));
            if (has_derived_z(g)) P.z.push_back(derived_z(g, P.n_gen, base, xv, yv));
        }
    }
    return P;
}

// ---------------------------------------------------------------------------
// quadrature grids

// One even integration axis.  `slot` orders the axes of a vertex:
// (x, y) for the linear grids, (psi, phi) for the hemispherical polar
// grid, (r, w, phi) for the Minkowski cone.  `val`/`val2` carry the
// precomputed primary/secondary values consumed by node_coords, and
// `w` the weight with all point-independent Jacobian factors folded in.
struct SusyAxis {
    int vertex = 0;
    int slot = 0;
    std::vector<double> val, val2, w;
};

struct SusyGrid {
    std::vector<SusyAxis> axes;
    bool gauss_hermite = false;  // R22 with the field folded into the weight
};

// R22: exact Gaussian boxes.  Vertices with a declared radius keep
// their own box; the remaining block of -Delta_beta + h must be
// positive definite, and couplings to pinned (origin) or supported
// vertices can only shift the conditional centre by |b| / lambda_min,
// which widens the box.
std::vector<double> flat_halfwidths(const SusyModelSpec& spec,
                                    const std::vector<int>& free_v,
                                    const std::vector<double>& radius) {
    const int n = spec.graph.n();
    std::vector<double> half(static_cast<size_t>(n), 0.0);
    std::vector<int> open;  // free vertices with no declared support
    for (int i : free_v) {
        if (std::isfinite(radius[static_cast<size_t>(i)]))
            half[static_cast<size_t>(i)] = radius[static_cast<size_t>(i)];
        else
            open.push_back(i);
    }
    if (open.empty()) return half;

    const int m = static_cast<int>(open.size());
    Eigen::MatrixXd L = spec.graph.laplacian();
    Eigen::MatrixXd A(m, m);
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q)
            A(p, q) = L(open[static_cast<size_t>(p)], open[static_cast<size_t>(q)]);
        A(p, p) += spec.graph.h(open[static_cast<size_t>(p)]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 1.0);
    if (!(lmin > 1e-12 * lmax)) {
        throw NonNormalizable(
            "flat superexpectation is not integrable: the free block of "
            "-Delta_beta + h is singular and no support radius covers it");
    }
    double shift = 0.0;  // worst-case centre displacement from bounded couplings
    {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        for (int p = 0; p < m; ++p) {
            for (int j = 0; j < n; ++j) {
                bool bounded_free = std::isfinite(radius[static_cast<size_t>(j)]) &&
                                    std::find(open.begin(), open.end(), j) == open.end();
                if (bounded_free)
                    b(p) += spec.graph.beta(open[static_cast<size_t>(p)], j) *
                            radius[static_cast<size_t>(j)];
                // a pinned vertex sits at the origin and contributes nothing
            }
        }
        shift = b.norm() / lmin;
    }
    const double width = std::sqrt(2.0 * kTailNats / lmin) + shift;
    for (int i : open) half[static_cast<size_t>(i)] = width;
    return half;
}

// H22: per free vertex, the radial bound
//   4 V - h (cosh V - 1) - sum_src beta (cosh(V - a0) - 1)  <=  -kTailNats
// certifies the box [-V, V] in the per-component sinh coordinates.
// Decay sources are the vertex's own field, an edge to the pin (whose
// radial coordinate is |s|), an edge to an already certified neighbour,
// and a declared support radius (an immediate box).  The entropy
// coefficient 4 covers the two even components plus the polynomial
// growth of the Berezin top coefficient.
std::vector<double> hyper_boxes(const SusyModelSpec& spec, const std::optional<SusyPin>& pin,
                                const std::vector<int>& free_v,
                                const std::vector<double>& radius) {
    const int n = spec.graph.n();
    std::vector<double> V(static_cast<size_t>(n), std::numeric_limits<double>::quiet_NaN());
    for (int i : free_v) {
        if (std::isfinite(radius[static_cast<size_t>(i)]))
            V[static_cast<size_t>(i)] = std::asinh(radius[static_cast<size_t>(i)]);
    }
    const double pin_a0 = pin ? std::abs(pin->s) : 0.0;

    auto solve = [](double h, const std::vector<std::pair<double, double>>& sources) {
        if (h == 0.0 && sources.empty()) return std::numeric_limits<double>::quiet_NaN();
        for (double v = 0.5; v <= 40.0; v += 0.25) {
            double log_bound = 4.0 * v - h * (std::cosh(v) - 1.0);
            for (const auto& [beta, a0] : sources) {
                if (v > a0) log_bound -= beta * (std::cosh(v - a0) - 1.0);
            }
            if (log_bound <= -kTailNats) return v;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    for (int pass = 0; pass < n; ++pass) {
        bool progress = false;
        for (int i : free_v) {
            if (!std::isnan(V[static_cast<size_t>(i)])) continue;
            std::vector<std::pair<double, double>> sources;
            for (const auto& [j, b] : spec.graph.neighbors(i)) {
                if (pin && j == pin->vertex) {
                    sources.emplace_back(b, pin_a0);
                } else if (!std::isnan(V[static_cast<size_t>(j)])) {
                    sources.emplace_back(b, V[static_cast<size_t>(j)]);
                }
            }
            double v = solve(spec.graph.h(i), sources);
            if (!std::isnan(v)) {
                V[static_cast<size_t>(i)] = v;
                progress = true;
            }
        }
        if (!progress) break;
    }
    for (int i : free_v) {
        if (std::isnan(V[static_cast<size_t>(i)])) {
            std::ostringstream os;
            os << "hyperbolic superexpectation cannot be certified: no field, pin, "
                  "support radius, or certified neighbour provides decay at vertex "
               << i;
            throw NonNormalizable(os.str());
        }
    }
    return V;
}

SusyGrid build_grid(const SusyModelSpec& spec, const std::optional<SusyPin>& pin,
                    const std::vector<int>& free_v, const std::vector<double>& radius,
                    const SuperSupport& support, int nodes, int angle_nodes) {
    SusyGrid grid;
    switch (spec.geometry) {
        case SusyGeometry::R22: {
            bool all_h = !pin;
            for (int i = 0; all_h && i < spec.graph.n(); ++i)
                if (spec.graph.h(i) <= 0.0) all_h = false;
            if (all_h) {
                // u = t sqrt(2/h) maps exp(-h u^2 / 2) onto the
                // Gauss-Hermite weight exactly.
                grid.gauss_hermite = true;
                const QuadRule& gh = gauss_hermite(nodes);
                for (int i : free_v) {
                    double s = std::sqrt(2.0 / spec.graph.h(i));
                    for (int slot = 0; slot < 2; ++slot) {
                        SusyAxis ax;
                        ax.vertex = i;
                        ax.slot = slot;
                        ax.val.resize(gh.size());
                        ax.w.resize(gh.size());
                        for (size_t q = 0; q < gh.size(); ++q) {
                            ax.val[q] = gh.nodes[q] * s;
                            ax.w[q] = gh.weights[q] * s;
                        }
                        grid.axes.push_back(std::move(ax));
                    }
                }
            } else {
                std::vector<double> half = flat_halfwidths(spec, free_v, radius);
                for (int i : free_v) {
                    double H = half[static_cast<size_t>(i)];
                    QuadRule r = gauss_legendre(nodes, -H, H);
                    for (int slot = 0; slot < 2; ++slot) {
                        SusyAxis ax;
                        ax.vertex = i;
                        ax.slot = slot;
                        ax.val = r.nodes;
                        ax.w = r.weights;
                        grid.axes.push_back(std::move(ax));
                    }
                }
            }
            break;
        }
        case SusyGeometry::H22: {
            // x = sinh(v) per component; the cosh Jacobian is folded in
            // and the 1/z measure form is applied per point.
            std::vector<double> boxes = hyper_boxes(spec, pin, free_v, radius);
            for (int i : free_v) {
                double V = boxes[static_cast<size_t>(i)];
                QuadRule r = gauss_legendre(nodes, -V, V);
                for (int slot = 0; slot < 2; ++slot) {
                    SusyAxis ax;
                    ax.vertex = i;
                    ax.slot = slot;
                    ax.val.resize(r.size());
                    ax.w.resize(r.size());
                    for (size_t q = 0; q < r.size(); ++q) {
                        ax.val[q] = std::sinh(r.nodes[q]);
                        ax.w[q] = r.weights[q] * std::cosh(r.nodes[q]);
                    }
                    grid.axes.push_back(std::move(ax));
                }
            }
            break;
        }
        case SusyGeometry::S22Plus: {
            // (x, y) = sin(psi)(cos phi, sin phi); dx dy =
            // sin(psi) cos(psi) d(psi) d(phi).  The measure's 1/z form
            // is NOT folded in here -- its nilpotent part must survive
            // -- so integrability demands psi_max < pi/2.
            for (int i : free_v) {
                double R = radius[static_cast<size_t>(i)];
                if (!(R < 1.0)) {
                    std::ostringstream os;
                    os << "hemispherical superexpectation needs a support radius < 1 at "
                          "vertex "
                       << i << ": the 1/z^3 coefficients are not integrable up to the "
                               "equator";
                    throw NonNormalizable(os.str());
                }
                double psi_max = std::asin(R);
                QuadRule rp = gauss_legendre(nodes, 0.0, psi_max);
                SusyAxis psi;
                psi.vertex = i;
                psi.slot = 0;
                psi.val.resize(rp.size());
                psi.w.resize(rp.size());
                for (size_t q = 0; q < rp.size(); ++q) {
                    psi.val[q] = std::sin(rp.nodes[q]);
                    psi.w[q] = rp.weights[q] * std::sin(rp.nodes[q]) * std::cos(rp.nodes[q]);
                }
                grid.axes.push_back(std::move(psi));
                QuadRule rf = periodic_rule(angle_nodes);
                SusyAxis phi;
                phi.vertex = i;
                phi.slot = 1;
                phi.val.resize(rf.size());
                phi.val2.resize(rf.size());
                phi.w = rf.weights;
                for (size_t q = 0; q < rf.size(); ++q) {
                    phi.val[q] = std::cos(rf.nodes[q]);
                    phi.val2[q] = std::sin(rf.nodes[q]);
                }
                grid.axes.push_back(std::move(phi));
            }
            break;
        }
        case SusyGeometry::Mink32: {
            // z = r cosh w, (x, y) = r sinh w (cos phi, sin phi);
            // dz dx dy = r^2 sinh(w) dr dw d(phi).  The observable's
            // cone box is the certificate: the indicator of the open
            // cone holds on the whole grid.
            if (!(support.r_lo > 0.0) || !std::isfinite(support.r_hi) ||
                !std::isfinite(support.z_hi) || support.r_hi < support.r_lo) {
                throw NonNormalizable(
                    "super-Minkowski brackets need an observable with a cone_box "
                    "support (0 < r_lo <= r_hi, z_hi finite)");
            }
            double w_max = std::acosh(std::max(1.0, support.z_hi / support.r_lo));
            for (int i : free_v) {
                QuadRule rr = gauss_legendre(nodes, support.r_lo, support.r_hi);
                SusyAxis ar;
                ar.vertex = i;
                ar.slot = 0;
                ar.val = rr.nodes;
                ar.w.resize(rr.size());
                for (size_t q = 0; q < rr.size(); ++q)
                    ar.w[q] = rr.weights[q] * rr.nodes[q] * rr.nodes[q];
                grid.axes.push_back(std::move(ar));

                QuadRule rw = gauss_legendre(nodes, 0.0, w_max);
                SusyAxis aw;
                aw.vertex = i;
                aw.slot = 1;
                aw.val.resize(rw.size());
                aw.val2.resize(rw.size());
                aw.w.resize(rw.size());
                for (size_t q = 0; q < rw.size(); ++q) {
                    aw.val[q] = std::cosh(rw.nodes[q]);
                    aw.val2[q] = std::sinh(rw.nodes[q]);
                    aw.w[q] = rw.weights[q] * std::sinh(rw.nodes[q]);
                }
                grid.axes.push_back(std::move(aw));

                QuadRule rf = periodic_rule(angle_nodes);
                SusyAxis af;
                af.vertex = i;
                af.slot = 2;
                af.val.resize(rf.size());
                af.val2.resize(rf.size());
                af.w = rf.weights;
                for (size_t q = 0; q < rf.size(); ++q) {
                    af.val[q] = std::cos(rf.nodes[q]);
                    af.val2[q] = std::sin(rf.nodes[q]);
                }
                grid.axes.push_back(std::move(af));
            }
            break;
        }
    }
    return grid;
}

double integrate_grid(const SusyModelSpec& spec, const SuperObservable& F,
                      const SuperObservable& Hobs, const std::optional<SusyPin>& pin,
                      const std::vector<int>& free_v, const SusyGrid& grid) {
    const size_t d = grid.axes.size();
    double total = 1.0;
    for (const auto& ax : grid.axes) total *= static_cast<double>(ax.val.size());
    if (total > kNodeBudget)
        throw CostGateExceeded("superexpectation grid exceeds the evaluation budget");

    const int cpv = coords_per_vertex(spec.geometry);
    const int nf = static_cast<int>(free_v.size());
    std::vector<int> vertex_pos(static_cast<size_t>(spec.graph.n()), -1);
    for (int f = 0; f < nf; ++f) vertex_pos[static_cast<size_t>(free_v[static_cast<size_t>(f)])] = f;

    std::vector<size_t> idx(d, 0);
    std::vector<double> slot_val(static_cast<size_t>(nf) * 3, 0.0);
    std::vector<double> slot_val2(static_cast<size_t>(nf) * 3, 0.0);
    std::vector<double> even(static_cast<size_t>(nf) * static_cast<size_t>(cpv), 0.0);

    long double acc = 0.0L;
    for (;;) {
        double wprod = 1.0;
        for (size_t k = 0; k < d; ++k) {
            const SusyAxis& ax = grid.axes[k];
            wprod *= ax.w[idx[k]];
            int f = vertex_pos[static_cast<size_t>(ax.vertex)];
            slot_val[static_cast<size_t>(f) * 3 + static_cast<size_t>(ax.slot)] =
                ax.val[idx[k]];
            slot_val2[static_cast<size_t>(f) * 3 + static_cast<size_t>(ax.slot)] =
                ax.val2.empty() ? 0.0 : ax.val2[idx[k]];
        }
        for (int f = 0; f < nf; ++f) {
            const double* v = &slot_val[static_cast<size_t>(f) * 3];
            const double* v2 = &slot_val2[static_cast<size_t>(f) * 3];
            double* e = &even[static_cast<size_t>(f) * static_cast<size_t>(cpv)];
            switch (spec.geometry) {
                case SusyGeometry::R22:
                case SusyGeometry::H22:
                    e[0] = v[0];
                    e[1] = v[1];
                    break;
                case SusyGeometry::S22Plus:
                    e[0] = v[0] * v[1];   // sin(psi) cos(phi)
                    e[1] = v[0] * v2[1];  // sin(psi) sin(phi)
                    break;
                case SusyGeometry::Mink32:
                    e[0] = v[0] * v[1];           // z = r cosh w
                    e[1] = v[0] * v2[1] * v[2];   // x = r sinh w cos phi
                    e[2] = v[0] * v2[1] * v2[2];  // y = r sinh w sin phi
                    break;
            }
        }

        SuperPoint P = build_point(spec, pin, even);
        GA<double> M = Hobs.eval(P);
        M.scale(-1.0);
        if (grid.gauss_hermite) {
            // add back the even field part absorbed into the GH weight
            for (int f = 0; f < nf; ++f) {
                int i = free_v[static_cast<size_t>(f)];
                const double* e = &even[static_cast<size_t>(f) * 2];
                M.coeff(0) += 0.5 * spec.graph.h(i) * (e[0] * e[0] + e[1] * e[1]);
            }
        }
        GA<double> W = wedge(F.eval(P), ga_exp(M));
        if (has_derived_z(spec.geometry)) {
            for (int i : free_v)
                W = wedge(W, ga_inverse(P.z[static_cast<size_t>(i)]));
        }
        acc += static_cast<long double>(wprod) * berezin_top(W);

        size_t k = 0;
        while (k < d && ++idx[k] == grid.axes[k].val.size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == d) break;
    }
    double norm = std::pow(2.0 * std::numbers::pi, -static_cast<double>(nf));
    return static_cast<double>(acc) * norm;
}

}  // namespace

// ---------------------------------------------------------------------------
// points and forms

GA<double> SuperPoint::xi(int v) const {
    int base = gen_base[static_cast<size_t>(v)];
    if (base < 0) return GA<double>(n_gen);
    return GA<double>::generator(n_gen, base);
}

GA<double> SuperPoint::eta(int v) const {
    int base = gen_base[static_cast<size_t>(v)];
    if (base < 0) return GA<double>(n_gen);
    return GA<double>::generator(n_gen, base + 1);
}

GA<double> SuperPoint::spatial_pair(int i, int j) const {
    GA<double> out = wedge(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)]);
    out += wedge(y[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
    out -= wedge(xi(i), eta(j));
    out += wedge(eta(i), xi(j));
    return out;
}

GA<double> SuperPoint::pair(int i, int j) const {
    GA<double> out = spatial_pair(i, j);
    switch (geometry) {
        case SusyGeometry::R22:
            break;
        case SusyGeometry::H22:
        case SusyGeometry::Mink32:
            out -= wedge(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
            break;
        case SusyGeometry::S22Plus:
            out += wedge(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
            break;
    }
    return out;
}

SusyModelSpec make_susy_spec(SusyGeometry geometry, Graph graph) {
    SusyModelSpec spec(std::move(graph));
    spec.geometry = geometry;
    if (geometry == SusyGeometry::Mink32 && !spec.graph.h_is_zero())
        throw ConfigError("the super-Minkowski Hamiltonian has no field term; h must be 0");
    return spec;
}

std::pair<double, double> pin_point(SusyGeometry geometry, const SusyPin& pin) {
    switch (geometry) {
        case SusyGeometry::R22:
            if (pin.s != 0.0)
                throw ConfigError(
                    "the flat pin sits at the origin; boost the observable instead of "
                    "the pin");
            return {0.0, 0.0};
        case SusyGeometry::H22:
            return {std::cosh(pin.s), std::sinh(pin.s)};
        case SusyGeometry::S22Plus:
            if (!(std::abs(pin.s) < std::numbers::pi / 2))
                throw DomainViolation("hemispherical pins need |s| < pi/2");
            return {std::cos(pin.s), std::sin(pin.s)};
        case SusyGeometry::Mink32:
            throw ConfigError("the super-Minkowski bracket has no pinned form");
    }
    throw ConfigError("unknown geometry");
}

SuperPoint susy_point(const SusyModelSpec& spec, const std::vector<double>& even,
                      const std::optional<SusyPin>& pin) {
    check_pin(spec, pin);
    int nf = 0;
    for (int i = 0; i < spec.graph.n(); ++i)
        if (is_free(pin, i)) ++nf;
    size_t want = static_cast<size_t>(nf) * static_cast<size_t>(coords_per_vertex(spec.geometry));
    if (even.size() != want)
        throw DimensionMismatch("wrong even coordinate count for this geometry");
    return build_point(spec, pin, even);
}

SuperSupport SuperSupport::ball(int n_vertices, double R) {
    SuperSupport s;
    s.radius.assign(static_cast<size_t>(n_vertices), R);
    return s;
}

SuperSupport SuperSupport::cone_box(double r_lo, double r_hi, double z_hi) {
    SuperSupport s;
    s.r_lo = r_lo;
    s.r_hi = r_hi;
    s.z_hi = z_hi;
    return s;
}

GA<double> z_form(SusyGeometry geometry, int n_vertices, int vertex, double x, double y) {
    if (!has_derived_z(geometry))
        throw GeometryUnsupported("only H22 and S22 derive a z form");
    if (vertex < 0 || vertex >= n_vertices)
        throw DimensionMismatch("z_form vertex out of range");
    return derived_z(geometry, 2 * n_vertices, 2 * vertex, x, y);
}

// ---------------------------------------------------------------------------
// Hamiltonian and symmetries

SuperObservable super_hamiltonian(const SusyModelSpec& spec) {
    const SusyGeometry g = spec.geometry;
    const Graph graph = spec.graph;
    SuperObservable H;
    H.eval = [g, graph](const SuperPoint& P) {
        const int n = graph.n();
        GA<double> out(P.n_gen);
        for (int i = 0; i < n; ++i) {
            for (const auto& [j, b] : graph.neighbors(i)) {
                if (j <= i) continue;
                switch (g) {
                    case SusyGeometry::R22: {
                        // (b/2) (u_i - u_j).(u_i - u_j)
                        GA<double> t = P.pair(i, i);
                        t += P.pair(j, j);
                        GA<double> c = P.pair(i, j);
                        c.scale(-2.0);
                        t += c;
                        t.scale(0.5 * b);
                        out += t;
                        break;
                    }
                    case SusyGeometry::H22: {
                        // u.u = -1 exactly, so the edge term is -b (1 + u_i.u_j)
                        GA<double> t = P.pair(i, j);
                        t.coeff(0) += 1.0;
                        t.scale(-b);
                        out += t;
                        break;
                    }
                    case SusyGeometry::S22Plus: {
                        // u.u = +1 exactly: b (1 - u_i.u_j)
                        GA<double> t = P.pair(i, j);
                        t.scale(-b);
                        t.coeff(0) += b;
                        out += t;
                        break;
                    }
                    case SusyGeometry::Mink32: {
                        // u_i.u_i + r_i^2 = 0, so the u- and r-coupling
                        // terms collapse to -b (u_i.u_j + r_i r_j).
                        GA<double> t = P.pair(i, j);
                        t += wedge(P.r[static_cast<size_t>(i)], P.r[static_cast<size_t>(j)]);
                        t.scale(-b);
                        out += t;
                        break;
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            double hi = graph.h(i);
            if (hi == 0.0) continue;
            switch (g) {
                case SusyGeometry::R22: {
                    GA<double> t = P.pair(i, i);
                    t.scale(0.5 * hi);
                    out += t;
                    break;
                }
                case SusyGeometry::H22: {
                    GA<double> t = P.z[static_cast<size_t>(i)];
                    t.scale(hi);
                    t.coeff(0) -= hi;  // h (z - 1)
                    out += t;
                    break;
                }
                case SusyGeometry::S22Plus: {
                    GA<double> t = P.z[static_cast<size_t>(i)];
                    t.scale(-hi);
                    t.coeff(0) += hi;  // h (1 - z)
                    out += t;
                    break;
                }
                case SusyGeometry::Mink32:
                    break;  // no field term; make_susy_spec enforces h = 0
            }
        }
        return out;
    };
    return H;
}

SuperObservable boost_field(const SusyModelSpec& spec, const SuperObservable& F, double s) {
    if (!F.eval) throw ConfigError("observable has no eval function");
    const SusyGeometry g = spec.geometry;
    if (g == SusyGeometry::Mink32)
        throw GeometryUnsupported("the super-Minkowski model exposes no global symmetry flow");

    SuperObservable out;
    auto base = F.eval;
    out.eval = [g, base, s](const SuperPoint& P) {
        SuperPoint Q = P;
        const int n = P.n_vertices();
        for (int v = 0; v < n; ++v) {
            auto vi = static_cast<size_t>(v);
            switch (g) {
                case SusyGeometry::R22:
                    Q.x[vi].coeff(0) += s;
                    break;
                case SusyGeometry::H22: {
                    GA<double> zc = P.z[vi];
                    zc.scale(std::cosh(s));
                    GA<double> xs = P.x[vi];
                    xs.scale(std::sinh(s));
                    zc += xs;
                    GA<double> xc = P.x[vi];
                    xc.scale(std::cosh(s));
                    GA<double> zs = P.z[vi];
                    zs.scale(std::sinh(s));
                    xc += zs;
                    Q.z[vi] = std::move(zc);
                    Q.x[vi] = std::move(xc);
                    break;
                }
                case SusyGeometry::S22Plus: {
                    GA<double> zc = P.z[vi];
                    zc.scale(std::cos(s));
                    GA<double> xs = P.x[vi];
                    xs.scale(-std::sin(s));
                    zc += xs;
                    GA<double> xc = P.x[vi];
                    xc.scale(std::cos(s));
                    GA<double> zs = P.z[vi];
                    zs.scale(std::sin(s));
                    xc += zs;
                    Q.z[vi] = std::move(zc);
                    Q.x[vi] = std::move(xc);
                    break;
                }
                case SusyGeometry::Mink32:
                    break;  // unreachable
            }
        }
        return base(Q);
    };

    out.support = F.support;
    for (double& R : out.support.radius) {
        if (!std::isfinite(R)) continue;
        switch (g) {
            case SusyGeometry::R22:
                R += std::abs(s);
                break;
            case SusyGeometry::H22:
                // |theta_s x| >= |x| e^{-|s|} - sqrt(1+R^2) sinh|s| on
                // the slab |y| <= R, so the preimage of the R-ball is
                // contained in this larger ball.
                R = std::exp(std::abs(s)) *
                    (R + std::sqrt(1.0 + R * R) * std::sinh(std::abs(s)));
                break;
            case SusyGeometry::S22Plus: {
                double angle = std::asin(std::min(R, 1.0)) + std::abs(s);
                R = angle < std::numbers::pi / 2 ? std::sin(angle) : kInf;
                break;
            }
            case SusyGeometry::Mink32:
                break;  // unreachable
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// superexpectation

double superexpectation(const SusyModelSpec& spec, const SuperObservable& F,
                        const std::optional<SusyPin>& pin, const SusyQuadOptions& opt,
                        std::vector<std::string>* warnings) {
    if (!F.eval) throw ConfigError("observable has no eval function");
    const int n = spec.graph.n();
    if (n > 4) throw CostGateExceeded("superexpectations are gated to |Lambda| <= 4");
    if (spec.geometry == SusyGeometry::Mink32) {
        if (n > 2)
            throw CostGateExceeded("super-Minkowski brackets are gated to |Lambda| <= 2");
        if (!spec.graph.h_is_zero())
            throw ConfigError("the super-Minkowski Hamiltonian has no field term; h must be 0");
        if (pin) throw ConfigError("the super-Minkowski bracket has no pinned form");
    }
    if (opt.nodes < 2 || opt.angle_nodes < 2)
        throw ConfigError("quadrature needs at least 2 nodes per axis");
    check_pin(spec, pin);

    std::vector<int> free_v;
    for (int i = 0; i < n; ++i)
        if (is_free(pin, i)) free_v.push_back(i);

    SuperObservable Hobs = super_hamiltonian(spec);

    if (free_v.empty()) {
        // Everything pinned: the bracket is the degree-0 point value.
        SuperPoint P = build_point(spec, pin, {});
        GA<double> M = Hobs.eval(P);
        M.scale(-1.0);
        GA<double> W = wedge(F.eval(P), ga_exp(M));
        return berezin_top(W);
    }

    std::vector<double> radius = resolve_radius(spec, F);

    auto evaluate = [&](int nodes, int angle_nodes) {
        SusyGrid grid =
            build_grid(spec, pin, free_v, radius, F.support, nodes, angle_nodes);
        return integrate_grid(spec, F, Hobs, pin, free_v, grid);
    };

    double coarse = evaluate(opt.nodes, opt.angle_nodes);
    if (opt.check_nodes <= 0 ||
        (opt.check_nodes == opt.nodes && opt.check_angle_nodes == opt.angle_nodes))
        return coarse;
    double fine = evaluate(opt.check_nodes, opt.check_angle_nodes);

    double scale = std::max(std::abs(coarse), std::abs(fine));
    if (scale > 0.0 && std::abs(coarse - fine) > opt.warn_rel * scale && warnings) {
        std::ostringstream os;
        os << "superexpectation quality: " << opt.nodes << "- and " << opt.check_nodes
           << "-node grids disagree by " << std::abs(coarse - fine) / scale
           << " relative (threshold " << opt.warn_rel << ")";
        warnings->push_back(os.str());
    }
    return fine;
}

// ---------------------------------------------------------------------------
// horospherical density

double horospherical_density(const Graph& graph, int a, const Eigen::VectorXd& t) {
    const int n = graph.n();
    if (a < 0 || a >= n) throw ConfigError("horospherical root vertex out of range");
    if (t.size() != n - 1)
        throw DimensionMismatch("t needs one entry per vertex != a");

    // full field with t_a = 0
    Eigen::VectorXd tf(n);
    {
        int k = 0;
        for (int i = 0; i < n; ++i) tf(i) = (i == a) ? 0.0 : t(k++);
    }

    double H1 = 0.0;
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, b] : graph.neighbors(i)) {
            if (j <= i) continue;
            H1 += b * (std::cosh(tf(i) - tf(j)) - 1.0);  // both ordered pairs
        }
    }
    // The density underflows long before the matrix entries overflow.
    if (H1 >= 700.0) return 0.0;

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 1, n - 1);
    std::vector<int> rows;
    rows.reserve(static_cast<size_t>(n) - 1);
    for (int i = 0; i < n; ++i)
        if (i != a) rows.push_back(i);
    for (int p = 0; p < n - 1; ++p) {
        int i = rows[static_cast<size_t>(p)];
        double diag = graph.beta(i, a) * std::exp(tf(i));
        for (int q = 0; q < n - 1; ++q) {
            int j = rows[static_cast<size_t>(q)];
            if (j == i) continue;
            double c = graph.beta(i, j) * std::exp(tf(i) + tf(j));
            D(p, q) = -c;
            diag += c;
        }
        D(p, p) = diag;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(D);
    if (llt.info() != Eigen::Success)
        throw SingularMatrix("horospherical weight matrix is not positive definite");
    double half_logdet = 0.0;
    for (int p = 0; p < n - 1; ++p) half_logdet += std::log(llt.matrixL()(p, p));

    double log_density = -0.5 * (n - 1) * std::log(2.0 * std::numbers::pi) - H1 +
                         half_logdet - tf.sum() /* t_a = 0 */;
    return std::exp(log_density);
}

}  // namespace isolab
