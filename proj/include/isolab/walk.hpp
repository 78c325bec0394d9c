#pragma once

// Exact event-driven simulation of the joint process (X_t, L_t) of a
// continuous-time jump process together with its vector of local times.
//
// One engine covers three models, selected by epsilon:
//   epsilon = +1  reinforced walk: jump rate beta_ij * L^j_t, local time
//                 grows at unit speed at the held vertex (L0 > 0),
//   epsilon =  0  simple walk: jump rate beta_ij, local time still grows,
//   epsilon = -1  decreasing walk: jump rate beta_ij * L^j_t, local time
//                 *decreases* at the held vertex, and the process dies
//                 the instant its current local time hits zero.
//
// The key structural fact exploited throughout: while the walker holds at
// a vertex, every neighbour's local time is frozen, so all exit rates are
// constant and the holding time is exactly exponential.  There is no time
// discretisation anywhere.
//
// Monte-Carlo estimators use one RNG stream per sample, so results are
// bit-identical for any worker count.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "isolab/errors.hpp"
#include "isolab/estimate.hpp"
#include "isolab/graph.hpp"
#include "isolab/rng.hpp"

namespace isolab {

// ------------------------------------------------------------ decay data

// Per-vertex decay certificate for a functional g of the local-time
// vector: |g(L)| is dominated by prod_i exp(-exp_rate[i] * L_i), and g
// vanishes whenever some L_i leaves [support_lo[i], support_hi[i]].
// Time integrals of g along a trajectory are truncated once the
// certificate bound has decayed by fourteen orders of magnitude, and cut
// exactly when a monotone coordinate has permanently left its support.
struct DecayCert {
    std::vector<double> exp_rate;
    std::vector<double> support_lo;
    std::vector<double> support_hi;

    static DecayCert none(int n_vertices);
    bool any_exp_decay() const;
    bool any_upper_support() const;
    bool any_lower_support() const;
};

// A functional of the local-time vector with its decay certificate.
struct Functional {
    std::function<double(const std::vector<double>&)> eval;
    DecayCert cert;
};

// A functional of (current vertex, local times), used by the resolvent
// estimator where the integrand depends on the walker's position.
struct VertexFunctional {
    std::function<double(int, const std::vector<double>&)> eval;
    DecayCert cert;
};

// ------------------------------------------------------------- walk spec

struct WalkSpec {
    explicit WalkSpec(Graph g) : graph(std::move(g)) {}

    int epsilon = 0;  // -1, 0, +1
    Graph graph;
    std::vector<double> kill;  // per-vertex killing rates, >= 0
    int initial_vertex = 0;
    std::vector<double> initial_local_time;
    long long event_cap = 10'000'000;
};

// Validates and assembles a WalkSpec.  kill may be empty (no killing).
// Initial local times must be strictly positive when epsilon != 0.
WalkSpec make_walk_spec(int epsilon, Graph graph, int initial_vertex,
                        std::vector<double> initial_local_time,
                        std::vector<double> kill = {},
                        long long event_cap = 10'000'000);

struct WalkState {
    static constexpr int kCemetery = -1;  // killed
    static constexpr int kDead = -2;      // local time hit zero (epsilon=-1)

    int current = 0;
    std::vector<double> local_time;
    double elapsed = 0.0;

    bool alive() const { return current >= 0; }
};

WalkState initial_state(const WalkSpec& spec);

enum class EventKind { JUMP, KILLED, DIED };

// Advances the state by exactly one event (jump, killing, or death).
// Throws InvalidState when the state is not alive and NonTerminating when
// no event can ever occur (total rate zero for epsilon >= 0).
EventKind step(const WalkSpec& spec, WalkState& state, Philox& rng);

// ------------------------------------------------------------ stop rules

// Whitelisted time-change functions with analytic inverses; used both by
// the trajectory reparametrisation and by the internal stopping rule that
// freezes the *changed* clock at a fixed value.
enum class VKind { Identity, HalfSquare, Log };

double v_value(VKind k, double x);
double v_deriv(VKind k, double x);
double v_inverse(VKind k, double y);

struct StopRule {
    enum class Kind {
        FixedTime,         // elapsed == T
        LocalTimeUp,       // L^a >= gamma (assigned exactly at the crossing)
        LocalTimeDown,     // L^a <= gamma (epsilon = -1)
        Absorption,        // killed or died
        FirstHit,          // current == b
        TimeChangedFixed,  // sum_i V(L^i) - V(L0^i) == T
    };

    Kind kind = Kind::Absorption;
    double threshold = 0.0;  // T or gamma
    int vertex = -1;         // a or b
    VKind v = VKind::Identity;

    static StopRule fixed_time(double T);
    static StopRule local_time_up(int a, double gamma);
    static StopRule local_time_down(int a, double gamma);
    static StopRule absorption();
    static StopRule first_hit(int b);
    static StopRule time_changed_fixed(double T, VKind v);
};

// ------------------------------------------------------------ trajectory

struct TrajectorySegment {
    int vertex;      // vertex held during this segment
    double holding;  // duration of the hold
    double l_start;  // local time at `vertex` when the hold began
    double l_end;    // local time at `vertex` when the hold ended
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    WalkState final_state;
    std::vector<double> initial_local_time;
    // True when the stop rule triggered; false when the walk was killed
    // or died before the rule fired (Absorption counts absorption itself
    // as the trigger).
    bool stopped = false;
};

// Runs the walk until the stop rule fires or the walk is absorbed.  The
// final partial holding is truncated so that the stopping condition holds
// exactly (e.g. L^a == gamma for local-time rules).  Throws NonTerminating
// if the event cap is exceeded or no trigger can ever occur.
Trajectory run_until(const WalkSpec& spec, const StopRule& rule, Philox& rng);

// Reparametrises a trajectory by the strictly increasing function V: new
// local times are V(old), and each holding becomes |V(l_end) - V(l_start)|
// so that local-time conservation again holds exactly.  Throws
// NonMonotoneV when V' is not positive on the visited range.
struct VFunc {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

VFunc v_func(VKind k);

Trajectory time_change(const Trajectory& traj, const VFunc& v);

// ------------------------------------------------------------ estimators

// How killing rates enter an estimator: as explicit cemetery events, or
// as a path reweighting exp(-sum_j kill_j (L^j_t - L0^j)) along a walk
// that is never killed.  Both are unbiased for the same quantity.
enum class KillMode { Explicit, Reweight };

// Estimate of the occupation integral
//   int_0^infty E_{a,L0}[ g(L_t) 1_{X_t = b} (weight) ] dt
// computed per holding interval with adaptive quadrature (only one
// local-time coordinate moves during a hold).  Throws DivergentFunctional
// when neither killing nor the decay certificate bounds the integral.
Estimate estimate_green(const WalkSpec& spec, const Functional& g, int a, int b,
                        long long n, uint64_t seed,
                        KillMode mode = KillMode::Explicit, int workers = 0);

// Estimate of E[g(L_stop) 1{survived to the stop}] for a local-time or
// fixed-time stopping rule.
Estimate estimate_at_stopping(const WalkSpec& spec, const Functional& g,
                              const StopRule& rule, long long n, uint64_t seed,
                              int workers = 0);

// ---------------------------------------------------------- initial laws

// Product initial law for the resolvent estimator: a categorical law on
// the starting vertex and one i.i.d. law for every initial local time.
struct RLaw {
    enum class Kind { Point, Uniform };
    Kind kind = Kind::Point;
    double value = 1.0;  // Point
    double lo = 0.0;     // Uniform
    double hi = 0.0;

    double sample(Philox& rng) const;
    double density(double r) const;
};

struct InitialLaw {
    std::vector<double> vertex_weights;  // unnormalised, >= 0
    RLaw r_law;

    static InitialLaw from_json_text(const std::string& text);
    int sample_vertex(Philox& rng) const;
    double total_weight() const;
};

// Estimate of int_0^infty E_pi[ f(X_t, L_t) ] dt where (X_0, L_0) ~ pi.
// The spec's initial vertex and local times are overridden per sample.
Estimate estimate_resolvent(const WalkSpec& spec, const InitialLaw& pi,
                            const VertexFunctional& f, long long n,
                            uint64_t seed, KillMode mode = KillMode::Explicit,
                            int workers = 0);

}  // namespace isolab
