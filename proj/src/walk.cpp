#include "isolab/walk.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trajectory truncation threshold for certified-decay functionals: stop
// once the certificate bound has fallen to 1e-14 of its initial value.
const double kLogCut = std::log(1e14);

double sign_of(int epsilon) { return epsilon < 0 ? -1.0 : 1.0; }

struct Pending {
    double holding = kInf;
    EventKind kind = EventKind::JUMP;
    int target = -1;
};

// Samples the next event while holding at state.current.  All rates are
// constant during the hold (neighbour local times are frozen), so the
// holding time is exponential with the total exit rate; for epsilon = -1
// it is capped at the remaining local time, which is death.  A holding of
// +inf means no event can ever occur.
Pending sample_event(const WalkSpec& spec, const WalkState& state, Philox& rng) {
    const int i = state.current;
    const auto& nb = spec.graph.neighbors(i);
    double jump_rate = 0.0;
    for (const auto& [j, beta] : nb) {
        double w = spec.epsilon == 0 ? 1.0 : state.local_time[static_cast<size_t>(j)];
        jump_rate += beta * w;
    }
    const double kill_rate = spec.kill.empty() ? 0.0 : spec.kill[static_cast<size_t>(i)];
    const double total = jump_rate + kill_rate;

    Pending p;
    if (spec.epsilon < 0) {
        p.holding = state.local_time[static_cast<size_t>(i)];
        p.kind = EventKind::DIED;
    }
    if (total <= 0.0) return p;

    double h = rng.exponential(total);
    if (spec.epsilon < 0 && h >= p.holding) return p;

    p.holding = h;
    double u = rng.uniform() * total;
    if (u >= jump_rate) {
        p.kind = EventKind::KILLED;
        p.target = -1;
        return p;
    }
    double acc = 0.0;
    for (const auto& [j, beta] : nb) {
        double w = spec.epsilon == 0 ? 1.0 : state.local_time[static_cast<size_t>(j)];
        acc += beta * w;
        if (u < acc) {
            p.kind = EventKind::JUMP;
            p.target = j;
            return p;
        }
    }
    // roundoff on the last band
    p.kind = EventKind::JUMP;
    p.target = nb.back().first;
    return p;
}

void apply_hold(const WalkSpec& spec, WalkState& state, double h) {
    state.local_time[static_cast<size_t>(state.current)] += sign_of(spec.epsilon) * h;
    state.elapsed += h;
}

void apply_event(WalkState& state, const Pending& p) {
    switch (p.kind) {
        case EventKind::JUMP:
            state.current = p.target;
            break;
        case EventKind::KILLED:
            state.current = WalkState::kCemetery;
            break;
        case EventKind::DIED:
            // death happens exactly when the local time reaches zero
            state.local_time[static_cast<size_t>(state.current)] = 0.0;
            state.current = WalkState::kDead;
            break;
    }
}

}  // namespace

// ------------------------------------------------------------ decay data

DecayCert DecayCert::none(int n_vertices) {
    DecayCert c;
    c.exp_rate.assign(static_cast<size_t>(n_vertices), 0.0);
    c.support_lo.assign(static_cast<size_t>(n_vertices), -kInf);
    c.support_hi.assign(static_cast<size_t>(n_vertices), kInf);
    return c;
}

bool DecayCert::any_exp_decay() const {
    for (double c : exp_rate)
        if (c > 0.0) return true;
    return false;
}

bool DecayCert::any_upper_support() const {
    for (double s : support_hi)
        if (s < kInf) return true;
    return false;
}

bool DecayCert::any_lower_support() const {
    for (double s : support_lo)
        if (s > -kInf) return true;
    return false;
}

namespace {

// Fills defaults and validates a certificate against the graph size.
DecayCert normalize_cert(const DecayCert& cert, int n) {
    DecayCert out = DecayCert::none(n);
    if (!cert.exp_rate.empty()) {
        if (static_cast<int>(cert.exp_rate.size()) != n)
            throw DimensionMismatch("decay certificate exp_rate size mismatch");
        out.exp_rate = cert.exp_rate;
    }
    if (!cert.support_lo.empty()) {
        if (static_cast<int>(cert.support_lo.size()) != n)
            throw DimensionMismatch("decay certificate support_lo size mismatch");
        out.support_lo = cert.support_lo;
    }
    if (!cert.support_hi.empty()) {
        if (static_cast<int>(cert.support_hi.size()) != n)
            throw DimensionMismatch("decay certificate support_hi size mismatch");
        out.support_hi = cert.support_hi;
    }
    for (double c : out.exp_rate)
        if (c < 0.0 || !std::isfinite(c))
            throw ConfigError("decay certificate rates must be finite and nonnegative");
    return out;
}

}  // namespace

// ------------------------------------------------------------- walk spec

WalkSpec make_walk_spec(int epsilon, Graph graph, int initial_vertex,
                        std::vector<double> initial_local_time,
                        std::vector<double> kill, long long event_cap) {
    if (epsilon != -1 && epsilon != 0 && epsilon != 1)
        throw ConfigError("epsilon must be one of -1, 0, +1");
    const int n = graph.n();
    if (initial_vertex < 0 || initial_vertex >= n)
        throw ConfigError("initial vertex out of range");
    if (static_cast<int>(initial_local_time.size()) != n)
        throw DimensionMismatch("initial local time vector size mismatch");
    for (double l : initial_local_time) {
        if (!std::isfinite(l)) throw ConfigError("initial local times must be finite");
        if (epsilon != 0 && l <= 0.0)
            throw ConfigError("initial local times must be positive when epsilon != 0");
        if (epsilon == 0 && l < 0.0)
            throw ConfigError("initial local times must be nonnegative");
    }
    if (kill.empty()) kill.assign(static_cast<size_t>(n), 0.0);
    if (static_cast<int>(kill.size()) != n)
        throw DimensionMismatch("killing rate vector size mismatch");
    for (double k : kill)
        if (k < 0.0 || !std::isfinite(k))
            throw ConfigError("killing rates must be finite and nonnegative");
    if (event_cap < 1) throw ConfigError("event cap must be positive");

    WalkSpec s(std::move(graph));
    s.epsilon = epsilon;
    s.kill = std::move(kill);
    s.initial_vertex = initial_vertex;
    s.initial_local_time = std::move(initial_local_time);
    s.event_cap = event_cap;
    return s;
}

WalkState initial_state(const WalkSpec& spec) {
    WalkState st;
    st.current = spec.initial_vertex;
    st.local_time = spec.initial_local_time;
    st.elapsed = 0.0;
    return st;
}

EventKind step(const WalkSpec& spec, WalkState& state, Philox& rng) {
    if (!state.alive()) throw InvalidState("stepping an absorbed walk state");
    Pending p = sample_event(spec, state, rng);
    if (!(p.holding < kInf))
        throw NonTerminating("total exit rate is zero; no further event can occur");
    apply_hold(spec, state, p.holding);
    apply_event(state, p);
    return p.kind;
}

// ------------------------------------------------------------ stop rules

double v_value(VKind k, double x) {
    switch (k) {
        case VKind::Identity: return x;
        case VKind::HalfSquare: return 0.5 * x * x;
        case VKind::Log: return std::log(x);
    }
    return x;
}

double v_deriv(VKind k, double x) {
    switch (k) {
        case VKind::Identity: return 1.0;
        case VKind::HalfSquare: return x;
        case VKind::Log: return 1.0 / x;
    }
    return 1.0;
}

double v_inverse(VKind k, double y) {
    switch (k) {
        case VKind::Identity: return y;
        case VKind::HalfSquare:
            if (y < 0.0) throw DomainViolation("half-square inverse needs y >= 0");
            return std::sqrt(2.0 * y);
        case VKind::Log: return std::exp(y);
    }
    return y;
}

VFunc v_func(VKind k) {
    return VFunc{[k](double x) { return v_value(k, x); },
                 [k](double x) { return v_deriv(k, x); }};
}

StopRule StopRule::fixed_time(double T) {
    StopRule r;
    r.kind = Kind::FixedTime;
    r.threshold = T;
    return r;
}

StopRule StopRule::local_time_up(int a, double gamma) {
    StopRule r;
    r.kind = Kind::LocalTimeUp;
    r.vertex = a;
    r.threshold = gamma;
    return r;
}

StopRule StopRule::local_time_down(int a, double gamma) {
    StopRule r;
    r.kind = Kind::LocalTimeDown;
    r.vertex = a;
    r.threshold = gamma;
    return r;
}

StopRule StopRule::absorption() {
    StopRule r;
    r.kind = Kind::Absorption;
    return r;
}

StopRule StopRule::first_hit(int b) {
    StopRule r;
    r.kind = Kind::FirstHit;
    r.vertex = b;
    return r;
}

StopRule StopRule::time_changed_fixed(double T, VKind v) {
    StopRule r;
    r.kind = Kind::TimeChangedFixed;
    r.threshold = T;
    r.v = v;
    return r;
}

// ------------------------------------------------------------ run engine

namespace {

void validate_rule(const WalkSpec& spec, const StopRule& rule) {
    switch (rule.kind) {
        case StopRule::Kind::LocalTimeUp:
        case StopRule::Kind::LocalTimeDown:
        case StopRule::Kind::FirstHit:
            if (rule.vertex < 0 || rule.vertex >= spec.graph.n())
                throw ConfigError("stop rule vertex out of range");
            break;
        default:
            break;
    }
}

struct RunResult {
    WalkState state;
    bool stopped = false;
};

RunResult run_core(const WalkSpec& spec, const StopRule& rule, Philox& rng,
                   Trajectory* record) {
    WalkState st = initial_state(spec);
    const double sgn = sign_of(spec.epsilon);
    double a_clock = 0.0;  // accumulated time-changed clock

    // immediate triggers (tau = 0)
    switch (rule.kind) {
        case StopRule::Kind::FixedTime:
            if (rule.threshold <= 0.0) return {st, true};
            break;
        case StopRule::Kind::LocalTimeUp:
            if (st.local_time[static_cast<size_t>(rule.vertex)] >= rule.threshold)
                return {st, true};
            break;
        case StopRule::Kind::LocalTimeDown:
            if (st.local_time[static_cast<size_t>(rule.vertex)] <= rule.threshold)
                return {st, true};
            break;
        case StopRule::Kind::FirstHit:
            if (st.current == rule.vertex) return {st, true};
            break;
        case StopRule::Kind::TimeChangedFixed:
            if (rule.threshold <= 0.0) return {st, true};
            break;
        case StopRule::Kind::Absorption:
            break;
    }

    long long events = 0;
    for (;;) {
        if (++events > spec.event_cap)
            throw NonTerminating("event cap exceeded before the stop rule fired");
        const int i = st.current;
        const double li = st.local_time[static_cast<size_t>(i)];
        Pending p = sample_event(spec, st, rng);

        // earliest point inside this hold at which the rule fires
        double h_stop = kInf;
        bool has_assign = false;
        double assign = 0.0;
        switch (rule.kind) {
            case StopRule::Kind::FixedTime:
                h_stop = rule.threshold - st.elapsed;
                break;
            case StopRule::Kind::LocalTimeUp:
                if (i == rule.vertex && spec.epsilon >= 0) {
                    h_stop = rule.threshold - li;
                    has_assign = true;
                    assign = rule.threshold;
                }
                break;
            case StopRule::Kind::LocalTimeDown:
                if (i == rule.vertex && spec.epsilon < 0) {
                    h_stop = li - rule.threshold;
                    has_assign = true;
                    assign = rule.threshold;
                }
                break;
            case StopRule::Kind::TimeChangedFixed:
                if (spec.epsilon >= 0) {
                    double l_star =
                        v_inverse(rule.v, v_value(rule.v, li) + (rule.threshold - a_clock));
                    h_stop = l_star - li;
                    has_assign = true;
                    assign = l_star;
                }
                break;
            default:
                break;
        }
        if (h_stop < 0.0) h_stop = 0.0;

        if (h_stop < kInf && h_stop <= p.holding) {
            // the rule fires during this hold; truncate the final holding
            // and make the stopping condition hold exactly
            double l_end = has_assign ? assign : li + sgn * h_stop;
            if (record) record->segments.push_back({i, h_stop, li, l_end});
            st.local_time[static_cast<size_t>(i)] = l_end;
            st.elapsed += h_stop;
            return {st, true};
        }
        if (!(p.holding < kInf))
            throw NonTerminating(
                "stop rule can never fire and no further event can occur");

        apply_hold(spec, st, p.holding);
        apply_event(st, p);
        const double l_end = st.local_time[static_cast<size_t>(i)];
        if (record) record->segments.push_back({i, p.holding, li, l_end});
        if (rule.kind == StopRule::Kind::TimeChangedFixed)
            a_clock += v_value(rule.v, l_end) - v_value(rule.v, li);

        if (!st.alive()) return {st, rule.kind == StopRule::Kind::Absorption};
        if (rule.kind == StopRule::Kind::FirstHit && st.current == rule.vertex)
            return {st, true};
    }
}

}  // namespace

Trajectory run_until(const WalkSpec& spec, const StopRule& rule, Philox& rng) {
    validate_rule(spec, rule);
    Trajectory t;
    t.initial_local_time = spec.initial_local_time;
    RunResult rr = run_core(spec, rule, rng, &t);
    t.final_state = std::move(rr.state);
    t.stopped = rr.stopped;
    return t;
}

Trajectory time_change(const Trajectory& traj, const VFunc& v) {
    auto check_mono = [&](double x) {
        double d = v.deriv(x);
        if (!(d > 0.0) || !std::isfinite(d))
            throw NonMonotoneV("time-change function is not strictly increasing "
                               "on the visited local-time range");
    };

    Trajectory out;
    out.stopped = traj.stopped;
    out.initial_local_time.reserve(traj.initial_local_time.size());
    for (double l : traj.initial_local_time) {
        check_mono(l);
        out.initial_local_time.push_back(v.value(l));
    }

    out.segments.reserve(traj.segments.size());
    double elapsed = 0.0;
    for (const auto& seg : traj.segments) {
        check_mono(seg.l_start);
        check_mono(seg.l_end);
        double v0 = v.value(seg.l_start), v1 = v.value(seg.l_end);
        double nh = std::abs(v1 - v0);
        out.segments.push_back({seg.vertex, nh, v0, v1});
        elapsed += nh;
    }

    out.final_state = traj.final_state;
    for (auto& l : out.final_state.local_time) l = v.value(l);
    out.final_state.elapsed = elapsed;
    return out;
}

// ------------------------------------------------------------ estimators

namespace {

// One sample of the occupation integral along a fresh trajectory:
//   int_0^infty f(X_t, L_t) [1_{X_t = b_filter}] weight(t) dt
// where weight = exp(-sum_j wrate_j |L^j_t - L0^j|) (empty wrate: 1).
// b_filter < 0 means every vertex contributes.  Within a holding interval
// only the held coordinate moves, so each contribution is a 1-d adaptive
// quadrature.  The trajectory is truncated when the combined certificate
// and reweighting bound has decayed by kLogCut nats, or cut exactly when
// a monotone coordinate of the integrand has left its support for good.
double occupation_sample(const WalkSpec& spec, int start,
                         const std::vector<double>& l0, const VertexFunctional& f,
                         const DecayCert& cert, int b_filter,
                         const std::vector<double>& wrate, Philox& rng) {
    const int n = spec.graph.n();
    const double sgn = sign_of(spec.epsilon);

    WalkState st;
    st.current = start;
    st.local_time = l0;
    st.elapsed = 0.0;

    std::vector<double> c_eff(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
        c_eff[static_cast<size_t>(j)] =
            cert.exp_rate[static_cast<size_t>(j)] +
            (wrate.empty() ? 0.0 : wrate[static_cast<size_t>(j)]);

    // a coordinate that has permanently left the support kills g forever
    auto support_gone = [&](int j) {
        return spec.epsilon >= 0
                   ? st.local_time[static_cast<size_t>(j)] >
                         cert.support_hi[static_cast<size_t>(j)]
                   : st.local_time[static_cast<size_t>(j)] <
                         cert.support_lo[static_cast<size_t>(j)];
    };
    for (int j = 0; j < n; ++j)
        if (support_gone(j)) return 0.0;

    double acc = 0.0;
    double log_gap = 0.0;  // sum_j c_eff_j |L_j - L0_j|, grows monotonically
    double log_w = 0.0;    // sum_j wrate_j |L_j - L0_j|
    std::vector<double> l_eval = st.local_time;

    long long events = 0;
    for (;;) {
        if (++events > spec.event_cap)
            throw NonTerminating("event cap exceeded in occupation-integral estimator");
        const int i = st.current;
        const size_t iu = static_cast<size_t>(i);
        const double li = st.local_time[iu];
        Pending p = sample_event(spec, st, rng);

        // truncation budget for this hold via the moving coordinate
        double h_budget = kInf;
        if (spec.epsilon >= 0 && c_eff[iu] > 0.0)
            h_budget = (kLogCut - log_gap) / c_eff[iu];

        // window within the hold where the integrand can be nonzero
        double h_window = p.holding;
        if (spec.epsilon >= 0 && cert.support_hi[iu] < kInf)
            h_window = std::min(h_window, std::max(0.0, cert.support_hi[iu] - li));
        if (spec.epsilon < 0 && cert.support_lo[iu] > -kInf)
            h_window = std::min(h_window, std::max(0.0, li - cert.support_lo[iu]));

        const bool contributes = b_filter < 0 || i == b_filter;
        double h_int = std::min(h_window, h_budget);
        if (contributes && !(h_int < kInf))
            throw DivergentFunctional(
                "occupation integral has no decay bound on an endless hold");

        if (contributes && h_int > 0.0) {
            const double wr = wrate.empty() ? 0.0 : wrate[iu];
            const double w_base = std::exp(-log_w);
            auto integrand = [&](double u) {
                l_eval[iu] = li + sgn * u;
                double v = f.eval(i, l_eval);
                return v == 0.0 ? 0.0 : v * w_base * std::exp(-wr * u);
            };
            acc += adaptive_simpson(integrand, 0.0, h_int, 1e-10);
            l_eval[iu] = li;
        }

        if (h_budget <= p.holding) return acc;  // certificate bound exhausted
        if (!(p.holding < kInf)) return acc;    // endless hold, zero integrand

        // advance past the event
        apply_hold(spec, st, p.holding);
        apply_event(st, p);
        if (spec.epsilon >= 0 && c_eff[iu] > 0.0) log_gap += c_eff[iu] * p.holding;
        if (!wrate.empty()) log_w += wrate[iu] * p.holding;
        l_eval[iu] = st.local_time[iu];

        if (!st.alive()) return acc;
        // monotone support exit: for a single-target integral the future
        // contribution is identically zero once b's coordinate leaves
        if (b_filter >= 0 && support_gone(b_filter)) return acc;
    }
}

void check_integrability(const WalkSpec& spec, const DecayCert& cert,
                         const std::vector<double>& wrate, KillMode mode) {
    if (spec.epsilon < 0) return;  // death is almost-surely finite
    if (mode == KillMode::Explicit) {
        for (double k : spec.kill)
            if (k > 0.0) return;
    }
    for (double w : wrate)
        if (w > 0.0) return;
    if (cert.any_exp_decay()) return;
    if (cert.any_upper_support()) return;
    throw DivergentFunctional(
        "the time integral needs killing or a decay certificate on g");
}

}  // namespace

Estimate estimate_green(const WalkSpec& spec, const Functional& g, int a, int b,
                        long long n, uint64_t seed, KillMode mode, int workers) {
    const int nv = spec.graph.n();
    if (a < 0 || a >= nv || b < 0 || b >= nv)
        throw ConfigError("green estimator vertices out of range");
    if (n < 1) throw ConfigError("sample count must be positive");

    WalkSpec run = spec;
    run.initial_vertex = a;
    std::vector<double> wrate;
    if (mode == KillMode::Reweight) {
        wrate = run.kill;
        run.kill.assign(static_cast<size_t>(nv), 0.0);
    }
    const DecayCert cert = normalize_cert(g.cert, nv);
    check_integrability(run, cert, wrate, mode);

    VertexFunctional f;
    auto eval = g.eval;
    f.eval = [eval](int, const std::vector<double>& l) { return eval(l); };

    auto sample = [&run, &f, &cert, b, &wrate](Philox& rng, long long) {
        return occupation_sample(run, run.initial_vertex, run.initial_local_time,
                                 f, cert, b, wrate, rng);
    };
    return mc_estimate(seed, n, sample, workers);
}

Estimate estimate_at_stopping(const WalkSpec& spec, const Functional& g,
                              const StopRule& rule, long long n, uint64_t seed,
                              int workers) {
    validate_rule(spec, rule);
    if (rule.kind == StopRule::Kind::Absorption ||
        rule.kind == StopRule::Kind::FirstHit)
        throw ConfigError("stopping estimator needs a local-time or time rule");
    if (n < 1) throw ConfigError("sample count must be positive");

    auto eval = g.eval;
    auto sample = [&spec, &rule, eval](Philox& rng, long long) {
        RunResult rr = run_core(spec, rule, rng, nullptr);
        return rr.stopped ? eval(rr.state.local_time) : 0.0;
    };
    return mc_estimate(seed, n, sample, workers);
}

// ---------------------------------------------------------- initial laws

double RLaw::sample(Philox& rng) const {
    switch (kind) {
        case Kind::Point: return value;
        case Kind::Uniform: return rng.uniform(lo, hi);
    }
    return value;
}

double RLaw::density(double r) const {
    switch (kind) {
        case Kind::Point: return 1.0;  // point mass: collapse, do not weight
        case Kind::Uniform: return (r >= lo && r <= hi) ? 1.0 / (hi - lo) : 0.0;
    }
    return 1.0;
}

InitialLaw InitialLaw::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("initial law JSON parse error: ") + e.what());
    }
    InitialLaw law;
    try {
        law.vertex_weights = j.at("vertex_weights").get<std::vector<double>>();
        const auto& rl = j.at("r_law");
        std::string kind = rl.at("kind").get<std::string>();
        if (kind == "point") {
            law.r_law.kind = RLaw::Kind::Point;
            law.r_law.value = rl.at("value").get<double>();
            if (!(law.r_law.value > 0.0))
                throw ConfigError("point initial local time must be positive");
        } else if (kind == "uniform") {
            law.r_law.kind = RLaw::Kind::Uniform;
            law.r_law.lo = rl.at("lo").get<double>();
            law.r_law.hi = rl.at("hi").get<double>();
            if (!(law.r_law.lo > 0.0) || !(law.r_law.hi > law.r_law.lo))
                throw ConfigError("uniform initial law needs 0 < lo < hi");
        } else {
            throw ConfigError("unknown r_law kind: " + kind);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("initial law JSON shape error: ") + e.what());
    }
    double total = 0.0;
    for (double w : law.vertex_weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw ConfigError("vertex weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw ConfigError("vertex weights must have positive sum");
    return law;
}

int InitialLaw::sample_vertex(Philox& rng) const {
    double total = 0.0;
    for (double w : vertex_weights) total += w;
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (size_t k = 0; k < vertex_weights.size(); ++k) {
        acc += vertex_weights[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(vertex_weights.size()) - 1;
}

double InitialLaw::total_weight() const {
    double total = 0.0;
    for (double w : vertex_weights) total += w;
    return total;
}

Estimate estimate_resolvent(const WalkSpec& spec, const InitialLaw& pi,
                            const VertexFunctional& f, long long n, uint64_t seed,
                            KillMode mode, int workers) {
    const int nv = spec.graph.n();
    if (static_cast<int>(pi.vertex_weights.size()) != nv)
        throw DimensionMismatch("initial law vertex weights size mismatch");
    if (n < 1) throw ConfigError("sample count must be positive");

    WalkSpec run = spec;
    std::vector<double> wrate;
    if (mode == KillMode::Reweight) {
        wrate = run.kill;
        run.kill.assign(static_cast<size_t>(nv), 0.0);
    }
    const DecayCert cert = normalize_cert(f.cert, nv);
    check_integrability(run, cert, wrate, mode);

    auto sample = [&run, &pi, &f, &cert, &wrate, nv](Philox& rng, long long) {
        int v0 = pi.sample_vertex(rng);
        std::vector<double> l0(static_cast<size_t>(nv));
        for (auto& l : l0) l = pi.r_law.sample(rng);
        return occupation_sample(run, v0, l0, f, cert, /*b_filter=*/-1, wrate, rng);
    };
    return mc_estimate(seed, n, sample, workers);
}

}  // namespace isolab
