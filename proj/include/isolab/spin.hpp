#pragma once

// Classical spin systems on a weighted graph: the n-component free field
// on R^n, the hyperbolic sigma model on H^n, and the hemispherical model
// on the open upper hemisphere S^n_+.
//
// All three share the same energy shape
//
//     H(u) = (1/4) sum_{i,j} beta_ij (u_i - u_j)^2  +  field term,
//
// where the square is taken in the geometry's own inner product
// (Euclidean, Minkowski, Euclidean on the embedding space) and the field
// term is h|u|^2/2, (h, z-1), or (h, 1-z) respectively.  Configurations
// are stored through their free coordinates; the constrained coordinate
// z is always derived.
//
// Expectations come in two interchangeable backends: a deterministic
// tensor-product quadrature for small graphs (the integration variables
// are substituted per geometry so that the 1/z boundary singularity
// disappears analytically) and a Metropolis chain for everything else.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "isolab/estimate.hpp"
#include "isolab/graph.hpp"

namespace isolab {

enum class Geometry {
    Flat,        // u in R^n, Lebesgue measure
    Hyperbolic,  // u in H^n, z = sqrt(1 + |u|^2), Haar measure du/z
    Hemisphere,  // u in the open unit ball, z = sqrt(1 - |u|^2), du/z
};

struct ModelSpec {
    Geometry geometry = Geometry::Flat;
    int n = 1;  // components of the free coordinate vector at each vertex
    Graph graph;

    explicit ModelSpec(Graph g) : graph(std::move(g)) {}
};

// Validates n >= 1.  The per-vertex field h lives on the graph.
ModelSpec make_model_spec(Geometry geometry, int n, Graph graph);

// A spin configuration holds the free coordinates of every vertex,
// flattened as coords[i*n + a] = u_i^{a+1}.  The object is geometry
// aware so that observables can ask for derived quantities directly.
struct SpinConfig {
    Geometry geometry = Geometry::Flat;
    int n = 1;
    std::vector<double> coords;

    double u(int i, int a) const { return coords[static_cast<size_t>(i) * n + a]; }
    double& u(int i, int a) { return coords[static_cast<size_t>(i) * n + a]; }
    // First component; the distinguished direction of every symmetry.
    double x(int i) const { return u(i, 0); }
    double norm2(int i) const;  // |u_i|^2

    // Derived constrained coordinate.  Hyperbolic: sqrt(1 + |u|^2);
    // hemisphere: sqrt(1 - |u|^2), throwing DomainViolation when the
    // point has left the open ball.  Flat configurations have no z and
    // asking for one throws GeometryUnsupported.
    double z(int i) const;

    // The local-time coordinate of the walk attached to this geometry:
    // |u_i|^2/2 when flat, z_i otherwise.
    double ell(int i) const;
};

// Validates the coordinate count and, for hemisphere, the ball constraint.
SpinConfig make_config(const ModelSpec& spec, std::vector<double> coords);

// H_{beta,h} evaluated at cfg.  Nonnegative coupling part plus the
// geometry's field term.
double hamiltonian(const ModelSpec& spec, const SpinConfig& cfg);

// The one-parameter symmetry distinguished by the first coordinate:
// flat translation u^1 += s, hyperbolic boost, hemispherical rotation in
// the xz-plane.  Acts diagonally on all vertices.  The hemisphere
// rotation throws DomainViolation if any vertex would leave z > 0.
SpinConfig symmetry_apply(const ModelSpec& spec, const SpinConfig& cfg, double s);

struct SpinObservable {
    std::function<double(const SpinConfig&)> eval;

    // Support certificate: eval vanishes whenever any free coordinate
    // of any free vertex exceeds this value in magnitude.  Infinity
    // means no certificate; then integrability must come from the field
    // or from a pin.
    double support_radius = std::numeric_limits<double>::infinity();
};

// Fixes vertex `vertex` at the free-coordinate point `point` (size n);
// the vertex is excluded from integration / never updated by MCMC.
struct Pin {
    int vertex = 0;
    std::vector<double> point;
};

struct QuadOptions {
    int nodes = 64;        // tensor-product nodes per dimension
    int check_nodes = 96;  // refinement used for the accuracy check; <= 0 disables
    double warn_rel = 1e-6;
};

// Deterministic expectation of F.  Unnormalised (the bracket [F]) when
// normalise is false; divided by the partition function computed on the
// same grid when true.  Gates: |Lambda| <= 3 and n <= 2.  Integrability
// must be certified by the field, a pin, or (unnormalised only) the
// observable's support radius; otherwise NonNormalizable is thrown.
// When the 64- and 96-node answers disagree by more than warn_rel
// relative, a quality warning is appended to *warnings.
double expectation_quadrature(const ModelSpec& spec, const SpinObservable& F,
                              const std::optional<Pin>& pin, bool normalise,
                              const QuadOptions& opt = {},
                              std::vector<std::string>* warnings = nullptr);

struct ChainParams {
    std::int64_t burn_in = 2000;
    std::int64_t n_steps = 20000;
    double proposal_scale = 0.6;
};

// Metropolis estimate of the normalised expectation <F>.  One sweep
// proposes a Gaussian step at every free vertex in order; hemisphere
// proposals that leave the ball are rejected, which is the correct
// chain for the restricted measure.  The returned standard error is
// autocorrelation-corrected via batch means over 32 batches.
Estimate expectation_mcmc(const ModelSpec& spec, const SpinObservable& F,
                          const std::optional<Pin>& pin, const ChainParams& chain,
                          std::uint64_t seed);

// (-Delta_beta + h)^{-1}: the covariance of one component of the flat
// model.  Throws GeometryUnsupported unless spec is flat and
// SingularMatrix when the matrix is not positive definite (h = 0).
Eigen::MatrixXd gaussian_green(const ModelSpec& spec);

}  // namespace isolab
