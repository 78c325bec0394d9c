#include "isolab/spin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isolab/errors.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nats of certified tail decay demanded at the edge of a truncated
// integration box: e^{-40} leaves comfortable room under the 1e-12
// tail budget after volume factors.
constexpr double kTailNats = 40.0;

bool is_free(const std::optional<Pin>& pin, int i) {
    return !pin || pin->vertex != i;
}

// (u_i - u_j)^2 in the geometry's inner product.  Nonnegative in all
// three geometries.
double pair_s(const ModelSpec& spec, const SpinConfig& cfg, int i, int j) {
    switch (spec.geometry) {
        case Geometry::Flat: {
            double s = 0.0;
            for (int a = 0; a < spec.n; ++a) {
                double d = cfg.u(i, a) - cfg.u(j, a);
                s += d * d;
            }
            return s;
        }
        case Geometry::Hyperbolic: {
            double dot = 0.0;
            for (int a = 0; a < spec.n; ++a) dot += cfg.u(i, a) * cfg.u(j, a);
            return 2.0 * (cfg.z(i) * cfg.z(j) - dot - 1.0);
        }
        case Geometry::Hemisphere: {
            double dot = 0.0;
            for (int a = 0; a < spec.n; ++a) dot += cfg.u(i, a) * cfg.u(j, a);
            return 2.0 * (1.0 - cfg.z(i) * cfg.z(j) - dot);
        }
    }
    return 0.0;
}

double field_term(const ModelSpec& spec, const SpinConfig& cfg, int i) {
    double h = spec.graph.h(i);
    if (h == 0.0) return 0.0;
    switch (spec.geometry) {
        case Geometry::Flat:
            return 0.5 * h * cfg.norm2(i);
        case Geometry::Hyperbolic:
            return h * (cfg.z(i) - 1.0);
        case Geometry::Hemisphere:
            return h * (1.0 - cfg.z(i));
    }
    return 0.0;
}

// Energy terms involving only vertex i: its field term plus half of
// every incident coupling.  Moving a single vertex changes H by exactly
// the change in this quantity.
double local_energy(const ModelSpec& spec, const SpinConfig& cfg, int i) {
    double e = field_term(spec, cfg, i);
    for (const auto& [j, b] : spec.graph.neighbors(i)) {
        e += 0.5 * b * pair_s(spec, cfg, i, j);
    }
    return e;
}

void check_config_shape(const ModelSpec& spec, const SpinConfig& cfg) {
    if (cfg.n != spec.n ||
        cfg.coords.size() != static_cast<size_t>(spec.graph.n()) * spec.n) {
        throw DimensionMismatch("configuration does not match the model's vertex count and n");
    }
}

void check_pin(const ModelSpec& spec, const std::optional<Pin>& pin) {
    if (!pin) return;
    if (pin->vertex < 0 || pin->vertex >= spec.graph.n()) {
        throw ConfigError("pin vertex out of range");
    }
    if (pin->point.size() != static_cast<size_t>(spec.n)) {
        throw DimensionMismatch("pin point has the wrong number of components");
    }
    for (double v : pin->point) {
        if (!std::isfinite(v)) throw ConfigError("pin point must be finite");
    }
    if (spec.geometry == Geometry::Hemisphere) {
        double r2 = 0.0;
        for (double v : pin->point) r2 += v * v;
        if (r2 >= 1.0) throw DomainViolation("hemisphere pin point lies outside the open ball");
    }
}

SpinConfig blank_config(const ModelSpec& spec, const std::optional<Pin>& pin) {
    SpinConfig cfg;
    cfg.geometry = spec.geometry;
    cfg.n = spec.n;
    cfg.coords.assign(static_cast<size_t>(spec.graph.n()) * spec.n, 0.0);
    if (pin) {
        for (int a = 0; a < spec.n; ++a) cfg.u(pin->vertex, a) = pin->point[static_cast<size_t>(a)];
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// quadrature grids

// One integration axis.  `val` is the precomputed primary value at each
// node (a coordinate, sin(psi), or cos(phi)), `val2` the secondary value
// (sin(phi)) for the angular axis of the polar hemisphere grid, and `w`
// the weight with every point-independent Jacobian factor folded in.
struct Axis {
    int vertex = 0;
    int comp = 0;
    std::vector<double> val;
    std::vector<double> val2;
    std::vector<double> w;
};

struct GridSpec {
    std::vector<Axis> axes;
    bool gauss_hermite = false;  // flat grid with the field factored into the weight
    bool polar = false;          // hemisphere n = 2 (psi, phi) axes per vertex
};

// Flat geometry, Gauss-Legendre branch: H restricted to the free
// vertices is exactly quadratic, so the certified box comes from the
// smallest eigenvalue of the free block of (-Delta_beta + h) and the
// exact Gaussian centre.
void flat_boxes(const ModelSpec& spec, const std::optional<Pin>& pin,
                const std::vector<int>& free_v, double support,
                std::vector<double>& lo, std::vector<double>& hi) {
    const int m = static_cast<int>(free_v.size());
    lo.assign(static_cast<size_t>(m) * spec.n, 0.0);
    hi.assign(static_cast<size_t>(m) * spec.n, 0.0);

    if (std::isfinite(support)) {
        for (size_t k = 0; k < lo.size(); ++k) {
            lo[k] = -support;
            hi[k] = support;
        }
        return;
    }

    Eigen::MatrixXd L = spec.graph.laplacian();
    Eigen::MatrixXd A(m, m);
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) A(p, q) = L(free_v[static_cast<size_t>(p)], free_v[static_cast<size_t>(q)]);
        A(p, p) += spec.graph.h(free_v[static_cast<size_t>(p)]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 1.0);
    if (!(lmin > 1e-12 * lmax)) {
        throw NonNormalizable(
            "flat measure is not integrable: the free block of -Delta_beta + h is "
            "singular (no field, no pin coupling on some component)");
    }

    const double width = std::sqrt(2.0 * kTailNats / lmin);
    for (int a = 0; a < spec.n; ++a) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        if (pin) {
            for (int p = 0; p < m; ++p) {
                b(p) = spec.graph.beta(free_v[static_cast<size_t>(p)], pin->vertex) *
                       pin->point[static_cast<size_t>(a)];
            }
        }
        Eigen::VectorXd c = es.eigenvectors() *
                            (es.eigenvalues().cwiseInverse().asDiagonal() *
                             (es.eigenvectors().transpose() * b));
        for (int p = 0; p < m; ++p) {
            size_t k = static_cast<size_t>(p) * spec.n + a;
            lo[k] = c(p) - width;
            hi[k] = c(p) + width;
        }
    }
}

// Hyperbolic geometry: per free vertex, find V such that the
// one-dimensional radial bound
//   exp(n V) * exp(-h (cosh V - 1)) * prod_src exp(-beta (cosh(V - a0) - 1))
// drops below e^{-kTailNats}.  Decay sources are the vertex's own field,
// a direct coupling to the pinned vertex (a0 = the pin's radial
// coordinate), and couplings to neighbours whose own box is already
// certified (a0 = that box's radius) — so certificates propagate
// outward from the field/pin through the graph, each edge used at most
// once.  A vertex no source reaches cannot be certified.
std::vector<double> hyperbolic_boxes(const ModelSpec& spec, const std::optional<Pin>& pin,
                                     const std::vector<int>& free_v, double support) {
    const int nv = spec.graph.n();
    std::vector<double> V(static_cast<size_t>(nv),
                          std::numeric_limits<double>::quiet_NaN());
    if (std::isfinite(support)) {
        for (int i : free_v) V[static_cast<size_t>(i)] = std::asinh(support);
        return V;
    }

    double pin_a0 = 0.0;
    if (pin) {
        double r2 = 0.0;
        for (double v : pin->point) r2 += v * v;
        pin_a0 = std::asinh(std::sqrt(r2));
    }

    auto solve = [&](double h, const std::vector<std::pair<double, double>>& sources)
        -> double {
        if (h == 0.0 && sources.empty()) return std::numeric_limits<double>::quiet_NaN();
        for (double v = 1.0; v <= 30.0; v += 0.25) {
            double log_bound = spec.n * v - h * (std::cosh(v) - 1.0);
            for (const auto& [beta, a0] : sources) {
                if (v > a0) log_bound -= beta * (std::cosh(v - a0) - 1.0);
            }
            if (log_bound <= -kTailNats) return v;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    for (int pass = 0; pass < nv; ++pass) {
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
            os << "hyperbolic measure cannot be certified: no field, pin, or certified "
                  "neighbour provides decay at vertex "
               << i;
            throw NonNormalizable(os.str());
        }
    }
    return V;
}

GridSpec build_grid(const ModelSpec& spec, const std::optional<Pin>& pin,
                    const std::vector<int>& free_v, double support, int nodes) {
    GridSpec grid;
    switch (spec.geometry) {
        case Geometry::Flat: {
            bool all_h = !pin;
            for (int i = 0; all_h && i < spec.graph.n(); ++i) {
                if (spec.graph.h(i) <= 0.0) all_h = false;
            }
            if (all_h) {
                // Factor exp(-h|u|^2/2) into the Gauss-Hermite weight:
                // u = t sqrt(2/h) maps it to exp(-t^2) exactly.
                grid.gauss_hermite = true;
                const QuadRule& gh = gauss_hermite(nodes);
                for (int i : free_v) {
                    double s = std::sqrt(2.0 / spec.graph.h(i));
                    for (int a = 0; a < spec.n; ++a) {
                        Axis ax;
                        ax.vertex = i;
                        ax.comp = a;
                        ax.val.resize(gh.size());
                        ax.w.resize(gh.size());
                        for (size_t k = 0; k < gh.size(); ++k) {
                            ax.val[k] = gh.nodes[k] * s;
                            ax.w[k] = gh.weights[k] * s;
                        }
                        grid.axes.push_back(std::move(ax));
                    }
                }
            } else {
                std::vector<double> lo, hi;
                flat_boxes(spec, pin, free_v, support, lo, hi);
                for (size_t p = 0; p < free_v.size(); ++p) {
                    for (int a = 0; a < spec.n; ++a) {
                        size_t k = p * spec.n + a;
                        QuadRule r = gauss_legendre(nodes, lo[k], hi[k]);
                        Axis ax;
                        ax.vertex = free_v[p];
                        ax.comp = a;
                        ax.val = r.nodes;
                        ax.w = r.weights;
                        grid.axes.push_back(std::move(ax));
                    }
                }
            }
            break;
        }
        case Geometry::Hyperbolic: {
            // u^a = sinh v; the cosh v Jacobian is folded into the
            // weight and the per-point 1/z factor is applied later.
            std::vector<double> boxes = hyperbolic_boxes(spec, pin, free_v, support);
            for (int i : free_v) {
                double V = boxes[static_cast<size_t>(i)];
                QuadRule r = gauss_legendre(nodes, -V, V);
                for (int a = 0; a < spec.n; ++a) {
                    Axis ax;
                    ax.vertex = i;
                    ax.comp = a;
                    ax.val.resize(r.size());
                    ax.w.resize(r.size());
                    for (size_t k = 0; k < r.size(); ++k) {
                        ax.val[k] = std::sinh(r.nodes[k]);
                        ax.w[k] = r.weights[k] * std::cosh(r.nodes[k]);
                    }
                    grid.axes.push_back(std::move(ax));
                }
            }
            break;
        }
        case Geometry::Hemisphere: {
            if (spec.n == 1) {
                // u = sin(psi) turns du/z into d(psi) exactly.
                QuadRule r = gauss_legendre(nodes, -std::numbers::pi / 2, std::numbers::pi / 2);
                for (int i : free_v) {
                    Axis ax;
                    ax.vertex = i;
                    ax.comp = 0;
                    ax.val.resize(r.size());
                    ax.w = r.weights;
                    for (size_t k = 0; k < r.size(); ++k) ax.val[k] = std::sin(r.nodes[k]);
                    grid.axes.push_back(std::move(ax));
                }
            } else {
                // Polar coordinates: u = sin(psi)(cos phi, sin phi),
                // du/z = sin(psi) d(psi) d(phi).
                grid.polar = true;
                QuadRule rp = gauss_legendre(nodes, 0.0, std::numbers::pi / 2);
                QuadRule rf = periodic_rule(nodes);
                for (int i : free_v) {
                    Axis psi;
                    psi.vertex = i;
                    psi.comp = 0;
                    psi.val.resize(rp.size());
                    psi.w.resize(rp.size());
                    for (size_t k = 0; k < rp.size(); ++k) {
                        psi.val[k] = std::sin(rp.nodes[k]);
                        psi.w[k] = rp.weights[k] * std::sin(rp.nodes[k]);
                    }
                    grid.axes.push_back(std::move(psi));
                    Axis phi;
                    phi.vertex = i;
                    phi.comp = 1;
                    phi.val.resize(rf.size());
                    phi.val2.resize(rf.size());
                    phi.w = rf.weights;
                    for (size_t k = 0; k < rf.size(); ++k) {
                        phi.val[k] = std::cos(rf.nodes[k]);
                        phi.val2[k] = std::sin(rf.nodes[k]);
                    }
                    grid.axes.push_back(std::move(phi));
                }
            }
            break;
        }
    }
    return grid;
}

struct GridSums {
    double num = 0.0;
    double den = 0.0;
};

GridSums integrate_grid(const ModelSpec& spec, const SpinObservable& F,
                        const std::optional<Pin>& pin, const std::vector<int>& free_v,
                        const GridSpec& grid) {
    SpinConfig cfg = blank_config(spec, pin);
    const size_t d = grid.axes.size();
    std::vector<size_t> idx(d, 0);

    long double num = 0.0L;
    long double den = 0.0L;
    for (;;) {
        double wprod = 1.0;
        for (size_t k = 0; k < d; ++k) {
            const Axis& ax = grid.axes[k];
            wprod *= ax.w[idx[k]];
            if (grid.polar) {
                if (ax.comp == 0) {
                    cfg.u(ax.vertex, 0) = ax.val[idx[k]];  // sin(psi), scaled below
                } else {
                    double spsi = cfg.u(ax.vertex, 0);
                    cfg.u(ax.vertex, 0) = spsi * ax.val[idx[k]];
                    cfg.u(ax.vertex, 1) = spsi * ax.val2[idx[k]];
                }
            } else {
                cfg.u(ax.vertex, ax.comp) = ax.val[idx[k]];
            }
        }

        double exponent = -hamiltonian(spec, cfg);
        if (grid.gauss_hermite) {
            for (int i : free_v) exponent += 0.5 * spec.graph.h(i) * cfg.norm2(i);
        }
        double weight = wprod * std::exp(exponent);
        if (spec.geometry == Geometry::Hyperbolic) {
            for (int i : free_v) weight /= cfg.z(i);
        }

        den += weight;
        if (weight != 0.0) num += static_cast<long double>(F.eval(cfg)) * weight;

        size_t k = 0;
        while (k < d && ++idx[k] == grid.axes[k].val.size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == d) break;
    }
    return {static_cast<double>(num), static_cast<double>(den)};
}

}  // namespace

// ---------------------------------------------------------------------------
// configs and energies

double SpinConfig::norm2(int i) const {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        double v = u(i, a);
        s += v * v;
    }
    return s;
}

double SpinConfig::z(int i) const {
    switch (geometry) {
        case Geometry::Flat:
            throw GeometryUnsupported("flat configurations have no z coordinate");
        case Geometry::Hyperbolic:
            return std::sqrt(1.0 + norm2(i));
        case Geometry::Hemisphere: {
            double r2 = norm2(i);
            if (r2 >= 1.0) {
                throw DomainViolation("hemisphere coordinate lies outside the open unit ball");
            }
            return std::sqrt(1.0 - r2);
        }
    }
    return 0.0;
}

double SpinConfig::ell(int i) const {
    return geometry == Geometry::Flat ? 0.5 * norm2(i) : z(i);
}

ModelSpec make_model_spec(Geometry geometry, int n, Graph graph) {
    if (n < 1) throw ConfigError("spin models need n >= 1 components");
    ModelSpec spec(std::move(graph));
    spec.geometry = geometry;
    spec.n = n;
    return spec;
}

SpinConfig make_config(const ModelSpec& spec, std::vector<double> coords) {
    SpinConfig cfg;
    cfg.geometry = spec.geometry;
    cfg.n = spec.n;
    cfg.coords = std::move(coords);
    check_config_shape(spec, cfg);
    if (spec.geometry == Geometry::Hemisphere) {
        for (int i = 0; i < spec.graph.n(); ++i) cfg.z(i);  // ball check
    }
    return cfg;
}

double hamiltonian(const ModelSpec& spec, const SpinConfig& cfg) {
    check_config_shape(spec, cfg);
    double coupling = 0.0;
    double field = 0.0;
    for (int i = 0; i < spec.graph.n(); ++i) {
        for (const auto& [j, b] : spec.graph.neighbors(i)) {
            coupling += b * pair_s(spec, cfg, i, j);
        }
        field += field_term(spec, cfg, i);
    }
    return 0.25 * coupling + field;
}

SpinConfig symmetry_apply(const ModelSpec& spec, const SpinConfig& cfg, double s) {
    check_config_shape(spec, cfg);
    SpinConfig out = cfg;
    switch (spec.geometry) {
        case Geometry::Flat:
            for (int i = 0; i < spec.graph.n(); ++i) out.u(i, 0) += s;
            break;
        case Geometry::Hyperbolic: {
            const double ch = std::cosh(s), sh = std::sinh(s);
            for (int i = 0; i < spec.graph.n(); ++i) {
                out.u(i, 0) = cfg.x(i) * ch + cfg.z(i) * sh;
            }
            break;
        }
        case Geometry::Hemisphere: {
            const double c = std::cos(s), sn = std::sin(s);
            for (int i = 0; i < spec.graph.n(); ++i) {
                double x = cfg.x(i), z = cfg.z(i);
                double z_new = z * c - x * sn;
                if (z_new <= 0.0) {
                    throw DomainViolation("hemisphere rotation leaves the open hemisphere");
                }
                out.u(i, 0) = x * c + z * sn;
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// quadrature expectation

double expectation_quadrature(const ModelSpec& spec, const SpinObservable& F,
                              const std::optional<Pin>& pin, bool normalise,
                              const QuadOptions& opt, std::vector<std::string>* warnings) {
    if (!F.eval) throw ConfigError("observable has no eval function");
    if (spec.graph.n() > 3) {
        throw CostGateExceeded("quadrature expectations are gated to |Lambda| <= 3");
    }
    if (spec.n > 2) throw CostGateExceeded("quadrature expectations are gated to n <= 2");
    if (opt.nodes < 2) throw ConfigError("quadrature needs at least 2 nodes per dimension");
    check_pin(spec, pin);

    std::vector<int> free_v;
    for (int i = 0; i < spec.graph.n(); ++i) {
        if (is_free(pin, i)) free_v.push_back(i);
    }
    if (free_v.empty()) {
        // Everything pinned: the integral is a point evaluation.
        SpinConfig cfg = blank_config(spec, pin);
        double w = std::exp(-hamiltonian(spec, cfg));
        return normalise ? F.eval(cfg) : F.eval(cfg) * w;
    }

    // Integrability: the hemisphere is compact; flat and hyperbolic need
    // the field, a pin coupling, or (unnormalised only) the observable's
    // support certificate.  Normalised expectations must not lean on the
    // observable's support, since Z itself integrates F = 1.
    const double support = normalise ? kInf : F.support_radius;
    if (spec.geometry != Geometry::Hemisphere && spec.graph.h_is_zero() && !pin &&
        !std::isfinite(support)) {
        throw NonNormalizable(
            "measure certificate missing: no field, no pin, and no observable support radius");
    }

    auto evaluate = [&](int nodes) {
        GridSpec grid = build_grid(spec, pin, free_v, support, nodes);
        GridSums s = integrate_grid(spec, F, pin, free_v, grid);
        if (normalise) {
            if (!(s.den > 0.0) || !std::isfinite(s.den)) {
                throw NonNormalizable("partition function evaluated to a non-positive value");
            }
            return s.num / s.den;
        }
        return s.num;
    };

    double coarse = evaluate(opt.nodes);
    if (opt.check_nodes <= 0 || opt.check_nodes == opt.nodes) return coarse;
    double fine = evaluate(opt.check_nodes);

    double scale = std::max(std::abs(coarse), std::abs(fine));
    if (scale > 0.0 && std::abs(coarse - fine) > opt.warn_rel * scale && warnings) {
        std::ostringstream os;
        os << "quadrature quality: " << opt.nodes << "- and " << opt.check_nodes
           << "-node grids disagree by " << std::abs(coarse - fine) / scale
           << " relative (threshold " << opt.warn_rel << ")";
        warnings->push_back(os.str());
    }
    return fine;
}

// ---------------------------------------------------------------------------
// Metropolis expectation

Estimate expectation_mcmc(const ModelSpec& spec, const SpinObservable& F,
                          const std::optional<Pin>& pin, const ChainParams& chain,
                          std::uint64_t seed) {
    if (!F.eval) throw ConfigError("observable has no eval function");
    check_pin(spec, pin);
    if (chain.burn_in < 0 || chain.n_steps < 1) {
        throw ConfigError("chain needs burn_in >= 0 and n_steps >= 1");
    }
    if (!(chain.proposal_scale > 0.0) || !std::isfinite(chain.proposal_scale)) {
        throw ConfigError("proposal_scale must be positive");
    }
    if (spec.geometry != Geometry::Hemisphere && spec.graph.h_is_zero() && !pin) {
        throw NonNormalizable("Gibbs measure is not normalisable: no field and no pin");
    }

    std::vector<int> free_v;
    for (int i = 0; i < spec.graph.n(); ++i) {
        if (is_free(pin, i)) free_v.push_back(i);
    }

    SpinConfig cfg = blank_config(spec, pin);
    Philox rng(seed, 0);
    std::vector<double> prop(static_cast<size_t>(spec.n), 0.0);
    std::vector<double> saved(static_cast<size_t>(spec.n), 0.0);

    auto log_target_local = [&](int i) {
        double v = -local_energy(spec, cfg, i);
        if (spec.geometry != Geometry::Flat) v -= std::log(cfg.z(i));
        return v;
    };

    auto sweep = [&]() {
        for (int i : free_v) {
            double r2 = 0.0;
            for (int a = 0; a < spec.n; ++a) {
                prop[static_cast<size_t>(a)] =
                    cfg.u(i, a) + chain.proposal_scale * rng.normal();
                r2 += prop[static_cast<size_t>(a)] * prop[static_cast<size_t>(a)];
            }
            if (spec.geometry == Geometry::Hemisphere && r2 >= 1.0) continue;

            double before = log_target_local(i);
            for (int a = 0; a < spec.n; ++a) {
                saved[static_cast<size_t>(a)] = cfg.u(i, a);
                cfg.u(i, a) = prop[static_cast<size_t>(a)];
            }
            double after = log_target_local(i);
            if (std::log(rng.uniform_pos()) < after - before) continue;  // accept
            for (int a = 0; a < spec.n; ++a) cfg.u(i, a) = saved[static_cast<size_t>(a)];
        }
    };

    for (std::int64_t t = 0; t < chain.burn_in; ++t) sweep();
    std::vector<double> series;
    series.reserve(static_cast<size_t>(chain.n_steps));
    for (std::int64_t t = 0; t < chain.n_steps; ++t) {
        sweep();
        series.push_back(F.eval(cfg));
    }
    return batch_means(series, 32, seed);
}

// ---------------------------------------------------------------------------
// Gaussian Green function

Eigen::MatrixXd gaussian_green(const ModelSpec& spec) {
    if (spec.geometry != Geometry::Flat) {
        throw GeometryUnsupported("gaussian_green is defined for the flat model only");
    }
    const int m = spec.graph.n();
    Eigen::MatrixXd M = spec.graph.laplacian();
    for (int i = 0; i < m; ++i) M(i, i) += spec.graph.h(i);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 1.0);
    if (!(lmin > 1e-12 * lmax)) {
        throw SingularMatrix("-Delta_beta + h is singular; a positive field entry is required");
    }
    return M.llt().solve(Eigen::MatrixXd::Identity(m, m));
}

}  // namespace isolab
