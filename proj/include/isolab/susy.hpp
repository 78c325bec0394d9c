#pragma once

// Supersymmetric sigma models on a weighted graph: the free field on
// R^{2|2}, the hyperbolic model on H^{2|2}, the hemispherical model on
// S^{2|2}_+, and the super-Minkowski model on R^{3|2}.
//
// Each vertex carries two even coordinates (x_i, y_i) and one generator
// pair (xi_i, eta_i); H^{2|2} and S^{2|2}_+ derive their z coordinate
// as an even form with a nilpotent correction, while R^{3|2} has an
// independent even z > 0 and a derived radial form r_i = sqrt(-u_i.u_i)
// on the timelike cone.  The superexpectation [F] of an observable is
// the unnormalised integral of F e^{-H} against the geometry's flat
// Berezin-Lebesgue measure: one factor (2pi)^{-1} dx dy dxi deta per
// integrated vertex, times 1/z_i for the curved geometries.  No
// partition function ever divides the result -- for localising
// observables the bracket is self-normalising.
//
// Evaluation is Berezin-first: at every quadrature node the integrand
// is assembled in the finite Grassmann algebra over the integrated
// vertices' generators, the exponential acts through its exact Taylor
// polynomial in the nilpotent part, and the top coefficient is what the
// even quadrature accumulates.

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "isolab/errors.hpp"
#include "isolab/graph.hpp"
#include "isolab/grassmann.hpp"

namespace isolab {

enum class SusyGeometry {
    R22,     // u = (x, y, xi, eta),          u.u = x^2 + y^2 - 2 xi eta
    H22,     // u = (z, x, y, xi, eta),       u.u = -z^2 + x^2 + y^2 - 2 xi eta = -1
    S22Plus, // same components,              u.u = +z^2 + x^2 + y^2 - 2 xi eta = +1, z > 0
    Mink32,  // independent z > 0,            u.u = -z^2 + x^2 + y^2 - 2 xi eta < 0
};

struct SusyModelSpec {
    SusyGeometry geometry = SusyGeometry::R22;
    Graph graph;

    explicit SusyModelSpec(Graph g) : graph(std::move(g)) {}
};

// The per-vertex field h lives on the graph.  The super-Minkowski
// Hamiltonian has no field term, so Mink32 requires h = 0.
SusyModelSpec make_susy_spec(SusyGeometry geometry, Graph graph);

// One evaluation point.  Every coordinate is an element of the
// Grassmann algebra over the integrated vertices' generator pairs, so
// observables compose with symmetries that mix even and nilpotent
// parts.  A pinned vertex keeps scalar coordinates and has no
// generators of its own: xi/eta return the zero element there.
struct SuperPoint {
    SusyGeometry geometry = SusyGeometry::R22;
    int n_gen = 0;
    std::vector<int> gen_base;  // first generator index per vertex; -1 when pinned
    std::vector<GA<double>> x, y;
    std::vector<GA<double>> z;  // empty for R22
    std::vector<GA<double>> r;  // Mink32 only: r_i = sqrt(-u_i.u_i)

    int n_vertices() const { return static_cast<int>(x.size()); }
    GA<double> scalar(double c) const { return GA<double>::scalar(n_gen, c); }
    GA<double> xi(int v) const;
    GA<double> eta(int v) const;

    // u_i . u_j in the geometry's inner product (the z z' term carries
    // the geometry's sign; Mink32 uses the Minkowski form).
    GA<double> pair(int i, int j) const;
    // x_i x_j + y_i y_j - xi_i eta_j + eta_i xi_j: the pairing of the
    // unconstrained components, shared by all four geometries.
    GA<double> spatial_pair(int i, int j) const;
};

// Fixes vertex `vertex` at the boosted base point of the geometry's
// symmetry orbit and removes it from integration: its coordinates
// become scalars, its generator pair drops out, and so does its 1/z
// measure factor.  Base points: R22 the origin (s must be 0), H22
// (z, x) = (cosh s, sinh s), S22 (cos s, sin s) with |s| < pi/2.
// Mink32 has no pinned theory.
struct SusyPin {
    int vertex = 0;
    double s = 0.0;
};

// Builds a point from flattened free-vertex coordinates, in ascending
// vertex order: (x_i, y_i) per free vertex, or (z_i, x_i, y_i) for
// Mink32.  Pinned vertices are skipped in `even` and filled from the
// pin.  Mink32 checks that every vertex is strictly inside the forward
// timelike cone (z > 0, degree-0 of -u.u > 0).
SuperPoint susy_point(const SusyModelSpec& spec, const std::vector<double>& even,
                      const std::optional<SusyPin>& pin = std::nullopt);

// Support certificate of an observable.  `radius` (empty = none) bounds
// |(x_i, y_i)| per vertex: eval must vanish whenever some integrated
// vertex's even coordinates leave that ball.  Mink32 uses the cone box
// instead: eval vanishes unless r_i in [r_lo, r_hi] and z_i <= z_hi at
// every integrated vertex.
struct SuperSupport {
    std::vector<double> radius;
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();
    double z_hi = std::numeric_limits<double>::infinity();

    static SuperSupport none() { return {}; }
    static SuperSupport ball(int n_vertices, double R);
    static SuperSupport cone_box(double r_lo, double r_hi, double z_hi);
};

struct SuperObservable {
    std::function<GA<double>(const SuperPoint&)> eval;
    SuperSupport support;
};

// The pin's even coordinates (z0, x0) -- R22 reports z0 = 0.
std::pair<double, double> pin_point(SusyGeometry geometry, const SusyPin& pin);

// The z coordinate of a single vertex as an even form over 2*n_vertices
// generators: sqrt(1 + x^2 + y^2) - xi eta / sqrt(...) for H22,
// sqrt(1 - x^2 - y^2) + xi eta / sqrt(...) for S22 (requires
// x^2 + y^2 < 1).  R22 and Mink32 have no derived z.
GA<double> z_form(SusyGeometry geometry, int n_vertices, int vertex, double x, double y);

// H_{beta,h} as an observable:
//   (1/4) sum_{ij} beta_ij (u_i - u_j).(u_i - u_j)
// plus the field term (h,u.u)/2 for R22, (h, z-1) for H22, (h, 1-z) for
// S22; Mink32 adds (1/4) sum_{ij} beta_ij (r_i - r_j)^2 instead of a
// field term.
SuperObservable super_hamiltonian(const SusyModelSpec& spec);

// F composed with the symmetry flow at parameter s, acting diagonally
// on all vertices: R22 translates x by s, H22 applies the Lorentz boost
// (z, x) -> (z cosh s + x sinh s, x cosh s + z sinh s), S22 rotates
// (z, x) -> (z cos s - x sin s, x cos s + z sin s).  The support
// certificate is enlarged accordingly (and dropped when a rotation
// can reach the equator).  Mink32: GeometryUnsupported.
SuperObservable boost_field(const SusyModelSpec& spec, const SuperObservable& F, double s);

struct SusyQuadOptions {
    int nodes = 20;        // tensor nodes per radial/linear axis
    int check_nodes = 24;  // refinement for the accuracy check; <= 0 disables
    int angle_nodes = 16;  // periodic-rule size for polar angles (S22, Mink32)
    int check_angle_nodes = 20;
    double warn_rel = 1e-6;
};

// The unnormalised superexpectation [F]_{beta,h}, optionally pinned.
// Cost gates: |Lambda| <= 4, and |Lambda| <= 2 for Mink32.  The even
// integral must be certified: R22 through the field / the pin's exact
// Gaussian box / declared support, H22 through field, pin, or support
// propagated across edges, S22 through per-vertex support radii < 1
// (the 1/z^3 coefficients are not integrable up to the equator), and
// Mink32 through the observable's cone box.  Throws NonNormalizable
// when no certificate exists, ConfigError / DomainViolation for invalid
// pins.  Runs the node and check-node grids, warns through *warnings
// when they disagree by more than warn_rel, returns the finer value.
double superexpectation(const SusyModelSpec& spec, const SuperObservable& F,
                        const std::optional<SusyPin>& pin = std::nullopt,
                        const SusyQuadOptions& opt = {},
                        std::vector<std::string>* warnings = nullptr);

// The density of the horospherical field t on Lambda \ {a} (t_a = 0):
//   (2pi)^{-(n-1)/2} exp(-H_1(t)) sqrt(det D(t)) prod_{i != a} e^{-t_i}
// with H_1(t) = (1/2) sum_{ij} beta_ij (cosh(t_i - t_j) - 1) and
//   D_jk = -beta_jk e^{t_j + t_k},  D_jj = sum_{k != a} beta_jk
//          e^{t_j + t_k} + beta_{ja} e^{t_j}.
// `t` has one entry per vertex != a, in ascending vertex order.
// Integrates to 1 over R^{n-1}.
double horospherical_density(const Graph& graph, int a, const Eigen::VectorXd& t);

}  // namespace isolab
