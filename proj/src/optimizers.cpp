#include "oct/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>

namespace oct {

namespace {

using Complex = std::complex<double>;

// Damping floor for the safeguarded Zhu-Rabitz/Krotov sweeps: below this the
// step is declared a stall rather than shrunk further.
constexpr double kThetaMin = 1.0 / 4194304.0;  // 2^-22

struct ChannelIms {
    double pump = 0.0;
    double stokes = 0.0;
};

// Imaginary parts of <b|X12|a> and <b|X23|a> driving the pump/Stokes updates.
ChannelIms channel_ims(const State& b, const State& a) {
    const Complex p = std::conj(b(0)) * a(1) + std::conj(b(1)) * a(0);
    const Complex s = std::conj(b(1)) * a(2) + std::conj(b(2)) * a(1);
    return {p.imag(), s.imag()};
}

// Runs always work against a shape sampled on the scenario grid; an empty
// non-custom shape is synthesized here so default-constructed penalty configs
// are usable.
PenaltyConfig normalized_penalties(const PenaltyConfig& pen, const TimeGrid& grid) {
    if (static_cast<int>(pen.shape.samples.size()) == grid.num_nodes()) return pen;
    ShapeFunction shape;
    switch (pen.shape.kind) {
        case ShapeFunction::Kind::sine_squared:
            shape = ShapeFunction::sine_squared(grid);
            break;
        case ShapeFunction::Kind::flat:
            shape = ShapeFunction::flat(grid);
            break;
        default:
            throw std::invalid_argument(
                "optimizer penalties: custom shape samples do not match the grid");
    }
    return PenaltyConfig(pen.alpha0, pen.beta, std::move(shape));
}

IterationRecord make_record(int index, const CostBreakdown& cb, const Trajectory& traj) {
    IterationRecord rec;
    rec.index = index;
    rec.cost = cb;
    rec.transition_probability = cb.fidelity;
    rec.max_rho22 = intermediate_population_metrics(traj).max_rho22;
    return rec;
}

ResultSummary make_summary(const ControlField& field, const Trajectory& traj,
                           const CostBreakdown& cb, bool converged) {
    ResultSummary s;
    s.transition_probability = cb.fidelity;
    s.total_cost = cb.total;
    s.max_rho22 = intermediate_population_metrics(traj).max_rho22;
    s.final_coherence = coherence(traj).back();
    int pump_node = 0, stokes_node = 0;
    double pump_peak = -1.0, stokes_peak = -1.0;
    for (int i = 0; i < field.grid.num_nodes(); ++i) {
        const size_t si = static_cast<size_t>(i);
        if (std::abs(field.pump[si]) > pump_peak) {
            pump_peak = std::abs(field.pump[si]);
            pump_node = i;
        }
        if (std::abs(field.stokes[si]) > stokes_peak) {
            stokes_peak = std::abs(field.stokes[si]);
            stokes_node = i;
        }
    }
    s.pump_peak_time = field.grid.node(pump_node);
    s.stokes_peak_time = field.grid.node(stokes_node);
    s.converged = converged;
    return s;
}

void validate_run_inputs(const ControlField& field, const Scenario& scenario,
                         const OptimizerConfig& config) {
    if (!(field.grid == scenario.grid))
        throw std::invalid_argument("optimizer: field grid does not match the scenario grid");
    const size_t nodes = static_cast<size_t>(field.grid.num_nodes());
    if (field.pump.size() != nodes || field.stokes.size() != nodes ||
        field.pump_ref.size() != nodes || field.stokes_ref.size() != nodes)
        throw std::invalid_argument("optimizer: envelope arrays do not match the grid");
    if (config.max_iterations < 1)
        throw std::invalid_argument("optimizer: max_iterations must be >= 1");
    if (!(config.convergence_threshold > 0.0))
        throw std::invalid_argument("optimizer: convergence_threshold must be > 0");
}

// Shared driver state: working field, its trajectory and cost, the record
// list, and the iterate-to-iterate bookkeeping of the outer loop.
struct RunState {
    ControlField field;
    Trajectory traj;
    CostBreakdown cost;
    std::vector<IterationRecord> records;
};

void evaluate(RunState& st, const Scenario& scenario, const PenaltyConfig& pen) {
    st.traj = propagate_state_forward(scenario.initial_state, st.field, scenario.detunings);
    st.cost = evaluate_cost(st.field, st.traj, scenario.target, pen);
}

// Outer iteration shell shared by all three methods. step(st) advances the
// working field by one iteration (re-evaluating traj/cost) and returns false
// on a stall. Records hold iterates 1..m, each taken before its update; the
// Delta-K <= gamma test compares consecutive evaluated iterates.
template <typename StepFn>
OptimizationResult run_loop(RunState st, const Scenario& scenario, const PenaltyConfig& pen,
                            const OptimizerConfig& config, StepFn step) {
    evaluate(st, scenario, pen);
    bool converged = false;
    double previous_total = 0.0;
    for (int k = 1;;) {
        if (k >= 2 && st.cost.total - previous_total <= config.convergence_threshold) {
            converged = true;
            break;
        }
        st.records.push_back(make_record(k, st.cost, st.traj));
        if (k >= config.max_iterations) break;
        previous_total = st.cost.total;
        if (!step(st)) break;
        ++k;
    }
    OptimizationResult result;
    result.summary = make_summary(st.field, st.traj, st.cost, converged);
    result.final_field = std::move(st.field);
    result.final_trajectory = std::move(st.traj);
    result.records = std::move(st.records);
    return result;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// ---- Zhu-Rabitz / Krotov sweeps ------------------------------------------

// Damped update at one node: the implicit field expression relaxed
// toward the old value, new = (1-theta)*old + theta*(ref - Im/(2 alpha)).
// The reference envelopes are passed explicitly because Krotov's
// previous-iterate mode references the current iterate, not the field's
// stored (lagging) reference arrays.
struct SweepUpdate {
    const ControlField* old_field;
    const std::vector<double>* ref_pump;
    const std::vector<double>* ref_stokes;
    const PenaltyConfig* pen;
    double theta;

    std::pair<double, double> operator()(int node, const State& chi, const State& psi) const {
        const ChannelIms ims = channel_ims(chi, psi);
        const size_t si = static_cast<size_t>(node);
        const double inv = 1.0 / (2.0 * pen->alpha(node));
        const double up = (*ref_pump)[si] - ims.pump * inv;
        const double us = (*ref_stokes)[si] - ims.stokes * inv;
        return {(1.0 - theta) * old_field->pump[si] + theta * up,
                (1.0 - theta) * old_field->stokes[si] + theta * us};
    }
};

// Zhu-Rabitz backward sweep: costate and state are co-propagated backward
// under the freshly updated field (right-node value per step), the state
// re-propagated from psi(T) rather than read from the stored trajectory. The
// beta source uses the stored a2 history, keeping it the discrete adjoint of
// the recorded cost. Returns the node costates; the interim field built here
// only drives the backward evolution.
std::vector<State> zr_backward_sweep(const RunState& st, const Scenario& scenario,
                                     const PenaltyConfig& pen, double theta) {
    const TimeGrid& grid = st.field.grid;
    const int n = grid.num_steps;
    const double dt = grid.step();
    const SweepUpdate upd{&st.field, &st.field.pump_ref, &st.field.stokes_ref, &pen, theta};

    std::vector<State> chi(static_cast<size_t>(n) + 1);
    std::vector<double> new_pump(static_cast<size_t>(n) + 1);
    std::vector<double> new_stokes(static_cast<size_t>(n) + 1);

    const State term = terminal_costate(st.traj.states.back(), scenario.target);
    chi[static_cast<size_t>(n)] = term;
    State psi = st.traj.states.back();
    std::tie(new_pump[static_cast<size_t>(n)], new_stokes[static_cast<size_t>(n)]) =
        upd(n, term, psi);

    State cur = term;
    cur(1) -= pen.beta * grid.weight(n) * st.traj.states[static_cast<size_t>(n)](1);
    for (int i = n - 1; i >= 0; --i) {
        const size_t si = static_cast<size_t>(i);
        const StepEigen se =
            step_eigen(new_pump[si + 1], new_stokes[si + 1], scenario.detunings);
        cur = apply_step(se, dt, -1, cur);
        psi = apply_step(se, dt, -1, psi);
        cur(1) -= pen.beta * grid.weight(i) * st.traj.states[si](1);
        chi[si] = cur;
        std::tie(new_pump[si], new_stokes[si]) = upd(i, cur, psi);
    }
    return chi;
}

// Forward sweep shared by Zhu-Rabitz and Krotov: the state evolves under the
// new field, updated node by node from the supplied costates (left-node value
// per step).
void forward_sweep(const RunState& st, const Scenario& scenario, const PenaltyConfig& pen,
                   const std::vector<State>& chi, const std::vector<double>& ref_pump,
                   const std::vector<double>& ref_stokes, double theta,
                   std::vector<double>& new_pump, std::vector<double>& new_stokes) {
    const TimeGrid& grid = st.field.grid;
    const int n = grid.num_steps;
    const double dt = grid.step();
    const SweepUpdate upd{&st.field, &ref_pump, &ref_stokes, &pen, theta};

    new_pump.resize(static_cast<size_t>(n) + 1);
    new_stokes.resize(static_cast<size_t>(n) + 1);
    State psi = scenario.initial_state;
    std::tie(new_pump[0], new_stokes[0]) = upd(0, chi[0], psi);
    for (int i = 0; i < n; ++i) {
        const size_t si = static_cast<size_t>(i);
        const StepEigen se = step_eigen(new_pump[si], new_stokes[si], scenario.detunings);
        psi = apply_step(se, dt, +1, psi);
        std::tie(new_pump[si + 1], new_stokes[si + 1]) = upd(i + 1, chi[si + 1], psi);
    }
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::conjugate_gradient: return "conjugate-gradient";
        case Method::zhu_rabitz: return "zhu-rabitz";
        default: return "krotov";
    }
}

std::string to_string(ReferenceMode mode) {
    switch (mode) {
        case ReferenceMode::zero: return "zero";
        case ReferenceMode::fixed_guess: return "fixed-guess";
        default: return "previous-iterate";
    }
}

GradientPair cost_gradient(const ControlField& field, const Trajectory& state_traj,
                           const Trajectory& costate_traj, const PenaltyConfig& penalties,
                           const Detunings& det) {
    const TimeGrid& grid = field.grid;
    if (!(state_traj.grid == grid) || !(costate_traj.grid == grid))
        throw std::invalid_argument("cost_gradient: trajectory grids do not match the field");
    const int nodes = grid.num_nodes();
    if (static_cast<int>(state_traj.states.size()) != nodes ||
        static_cast<int>(costate_traj.states.size()) != nodes)
        throw std::invalid_argument("cost_gradient: trajectory length does not match the grid");
    if (static_cast<int>(penalties.shape.samples.size()) != nodes)
        throw std::invalid_argument("cost_gradient: shape samples do not match the grid");

    const double dt = grid.step();
    GradientPair g;
    g.pump.assign(static_cast<size_t>(nodes), 0.0);
    g.stokes.assign(static_cast<size_t>(nodes), 0.0);
    for (int j = 0; j < nodes; ++j) {
        const size_t sj = static_cast<size_t>(j);
        const double wa = 2.0 * grid.weight(j) * penalties.alpha(j);
        g.pump[sj] = -wa * (field.pump[sj] - field.pump_ref[sj]);
        g.stokes[sj] = -wa * (field.stokes[sj] - field.stokes_ref[sj]);
    }

    const int n = grid.num_steps;
    // The stored costate leaves the terminal node's own beta-source share to
    // its consumers; fold it in here.
    State chi_terminal = costate_traj.states[static_cast<size_t>(n)];
    chi_terminal(1) -=
        penalties.beta * grid.weight(n) * state_traj.states[static_cast<size_t>(n)](1);

    for (int i = 0; i < n; ++i) {
        const size_t si = static_cast<size_t>(i);
        const double pump_mid = 0.5 * (field.pump[si] + field.pump[si + 1]);
        const double stokes_mid = 0.5 * (field.stokes[si] + field.stokes[si + 1]);
        const StepEigen se = step_eigen(pump_mid, stokes_mid, det);
        const State& psi = state_traj.states[si];
        const State& chi = (i + 1 == n) ? chi_terminal : costate_traj.states[si + 1];

        // Eigenbasis components of the costate ahead of the step and the
        // state behind it.
        Complex ct[3], pt[3];
        for (int a = 0; a < 3; ++a) {
            ct[a] = se.vec(0, a) * chi(0) + se.vec(1, a) * chi(1) + se.vec(2, a) * chi(2);
            pt[a] = se.vec(0, a) * psi(0) + se.vec(1, a) * psi(1) + se.vec(2, a) * psi(2);
        }

        // Directional derivative of exp(-i H dt) via the divided-difference
        // kernel G_ab; both adjacent nodes share the midpoint sensitivity, and
        // the 1/2 from the midpoint average cancels the 2 from 2*Re<.,.>.
        double rp = 0.0, rs = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double dp = -0.5 * (se.vec(0, a) * se.vec(1, b) + se.vec(1, a) * se.vec(0, b));
                const double ds = -0.5 * (se.vec(1, a) * se.vec(2, b) + se.vec(2, a) * se.vec(1, b));
                if (dp == 0.0 && ds == 0.0) continue;
                const double mu = 0.5 * (se.lam(a) + se.lam(b));
                const double x = 0.5 * dt * (se.lam(a) - se.lam(b));
                const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
                const Complex kernel =
                    Complex(std::cos(dt * mu), -std::sin(dt * mu)) * Complex(0.0, -dt) * sinc;
                const double re = (std::conj(ct[a]) * pt[b] * kernel).real();
                rp += dp * re;
                rs += ds * re;
            }
        }
        g.pump[si] += rp;
        g.pump[si + 1] += rp;
        g.stokes[si] += rs;
        g.stokes[si + 1] += rs;
    }
    return g;
}

std::vector<double> prp_direction(const std::vector<double>& gradient,
                                  const std::vector<double>& previous_gradient,
                                  const std::vector<double>& previous_direction) {
    if (!previous_gradient.empty() && previous_gradient.size() != gradient.size())
        throw std::invalid_argument("prp_direction: gradient size mismatch");
    if (!previous_direction.empty() && previous_direction.size() != gradient.size())
        throw std::invalid_argument("prp_direction: direction size mismatch");
    if (previous_gradient.empty() || previous_direction.empty()) return gradient;
    const double denom = dot(previous_gradient, previous_gradient);
    if (denom == 0.0) return gradient;
    double num = 0.0;
    for (size_t i = 0; i < gradient.size(); ++i)
        num += gradient[i] * (gradient[i] - previous_gradient[i]);
    const double zeta = std::max(0.0, num / denom);
    std::vector<double> d = gradient;
    for (size_t i = 0; i < d.size(); ++i) d[i] += zeta * previous_direction[i];
    return d;
}

LineSearchResult line_search(const std::function<double(double)>& cost_along,
                             double cost_at_zero, double seed, const LineSearchConfig& config) {
    LineSearchResult res;
    res.cost = cost_at_zero;

    double best_cost = cost_at_zero;
    double best_lambda = 0.0;
    int evals = 0;
    const int budget = std::max(config.max_evaluations, 4);
    auto eval = [&](double lambda) {
        const double f = cost_along(lambda);
        ++evals;
        if (lambda > 0.0 && f > best_cost) {
            best_cost = f;
            best_lambda = lambda;
        }
        return f;
    };

    // Shrink the seed until the step improves at all.
    double lam = seed > 0.0 ? seed : 1.0;
    double flam = eval(lam);
    const int shrink_budget = std::min(15, budget / 2);
    while (flam < cost_at_zero && evals < shrink_budget) {
        lam *= 0.25;
        flam = eval(lam);
    }
    if (flam < cost_at_zero) {
        res.stalled = true;
        res.evaluations = evals;
        return res;
    }

    // Expand until the cost turns over.
    double lo = 0.0;
    double mid = lam, fmid = flam;
    double hi = lam * config.growth;
    double fhi = eval(hi);
    while (fhi > fmid && evals < budget - 2) {
        lo = mid;
        mid = hi;
        fmid = fhi;
        hi *= config.growth;
        fhi = eval(hi);
    }

    // Golden-section refinement inside [lo, hi].
    if (evals + 2 <= budget) {
        const double gr = 0.61803398874989485;
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = eval(x1), f2 = eval(x2);
        while ((b - a) > config.tolerance * b && evals < budget) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = eval(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = eval(x1);
            }
        }
    }

    if (best_lambda <= 0.0) {
        res.stalled = true;
        res.evaluations = evals;
        return res;
    }
    res.lambda = best_lambda;
    res.cost = best_cost;
    res.evaluations = evals;
    return res;
}

OptimizationResult run_conjugate_gradient(const ControlField& initial_field,
                                          const Scenario& scenario,
                                          const OptimizerConfig& config) {
    validate_run_inputs(initial_field, scenario, config);
    if (config.reference_mode == ReferenceMode::previous_iterate)
        throw std::invalid_argument(
            "conjugate gradient: previous-iterate reference mode is Krotov-only");
    const PenaltyConfig pen = normalized_penalties(config.penalties, scenario.grid);

    RunState st;
    st.field = initial_field;
    const size_t nodes = st.field.pump.size();
    if (config.reference_mode == ReferenceMode::zero) {
        st.field.pump_ref.assign(nodes, 0.0);
        st.field.stokes_ref.assign(nodes, 0.0);
    } else {  // fixed_guess
        st.field.pump_ref = initial_field.pump;
        st.field.stokes_ref = initial_field.stokes;
    }

    std::vector<double> prev_gradient, prev_direction;
    double seed = 1.0;

    auto step = [&](RunState& s) {
        const State term = terminal_costate(s.traj.states.back(), scenario.target);
        const Trajectory costate = propagate_costate_backward(term, s.field, scenario.detunings,
                                                              s.traj, pen.beta);
        const GradientPair grad = cost_gradient(s.field, s.traj, costate, pen,
                                                scenario.detunings);
        std::vector<double> g(grad.pump);
        g.insert(g.end(), grad.stokes.begin(), grad.stokes.end());
        const std::vector<double> d = prp_direction(g, prev_gradient, prev_direction);

        auto cost_along = [&](double lambda) {
            ControlField trial = s.field;
            for (size_t i = 0; i < nodes; ++i) {
                trial.pump[i] += lambda * d[i];
                trial.stokes[i] += lambda * d[nodes + i];
            }
            const Trajectory traj =
                propagate_state_forward(scenario.initial_state, trial, scenario.detunings);
            return evaluate_cost(trial, traj, scenario.target, pen).total;
        };
        const LineSearchResult ls =
            line_search(cost_along, s.cost.total, seed, config.line_search);
        if (ls.stalled) return false;

        for (size_t i = 0; i < nodes; ++i) {
            s.field.pump[i] += ls.lambda * d[i];
            s.field.stokes[i] += ls.lambda * d[nodes + i];
        }
        seed = ls.lambda;
        prev_gradient = g;
        prev_direction = d;
        evaluate(s, scenario, pen);
        return true;
    };
    return run_loop(std::move(st), scenario, pen, config, step);
}

OptimizationResult run_zhu_rabitz(const ControlField& initial_field, const Scenario& scenario,
                                  const OptimizerConfig& config) {
    validate_run_inputs(initial_field, scenario, config);
    if (config.reference_mode == ReferenceMode::previous_iterate)
        throw std::invalid_argument("zhu-rabitz: previous-iterate reference mode is Krotov-only");
    const PenaltyConfig pen = normalized_penalties(config.penalties, scenario.grid);

    RunState st;
    st.field = initial_field;
    const size_t nodes = st.field.pump.size();
    if (config.reference_mode == ReferenceMode::zero) {
        st.field.pump_ref.assign(nodes, 0.0);
        st.field.stokes_ref.assign(nodes, 0.0);
    } else {
        st.field.pump_ref = initial_field.pump;
        st.field.stokes_ref = initial_field.stokes;
    }

    double theta = 1.0;
    std::vector<double> new_pump, new_stokes;

    auto step = [&](RunState& s) {
        while (theta >= kThetaMin) {
            const std::vector<State> chi = zr_backward_sweep(s, scenario, pen, theta);
            forward_sweep(s, scenario, pen, chi, s.field.pump_ref, s.field.stokes_ref, theta,
                          new_pump, new_stokes);
            ControlField trial = s.field;
            trial.pump = new_pump;
            trial.stokes = new_stokes;
            const Trajectory traj =
                propagate_state_forward(scenario.initial_state, trial, scenario.detunings);
            const CostBreakdown cb = evaluate_cost(trial, traj, scenario.target, pen);
            if (cb.total >= s.cost.total) {
                s.field = std::move(trial);
                s.traj = traj;
                s.cost = cb;
                theta = std::min(1.0, theta * 2.0);
                return true;
            }
            theta *= 0.5;
        }
        return false;
    };
    return run_loop(std::move(st), scenario, pen, config, step);
}

OptimizationResult run_krotov(const ControlField& initial_field, const Scenario& scenario,
                              const OptimizerConfig& config) {
    validate_run_inputs(initial_field, scenario, config);
    const PenaltyConfig pen = normalized_penalties(config.penalties, scenario.grid);
    const bool prev_ref = config.reference_mode == ReferenceMode::previous_iterate;

    RunState st;
    st.field = initial_field;
    const size_t nodes = st.field.pump.size();
    if (config.reference_mode == ReferenceMode::zero) {
        st.field.pump_ref.assign(nodes, 0.0);
        st.field.stokes_ref.assign(nodes, 0.0);
    } else {
        // fixed_guess holds the guess; previous_iterate starts from it too
        // (the first iterate's reference is the guess itself).
        st.field.pump_ref = initial_field.pump;
        st.field.stokes_ref = initial_field.stokes;
    }

    double theta = 1.0;
    std::vector<double> new_pump, new_stokes;

    auto step = [&](RunState& s) {
        const State term = terminal_costate(s.traj.states.back(), scenario.target);
        const Trajectory costate = propagate_costate_backward(term, s.field, scenario.detunings,
                                                              s.traj, pen.beta);
        const std::vector<double>& ref_pump = prev_ref ? s.field.pump : s.field.pump_ref;
        const std::vector<double>& ref_stokes = prev_ref ? s.field.stokes : s.field.stokes_ref;
        while (theta >= kThetaMin) {
            forward_sweep(s, scenario, pen, costate.states, ref_pump, ref_stokes, theta,
                          new_pump, new_stokes);
            ControlField trial = s.field;
            trial.pump = new_pump;
            trial.stokes = new_stokes;
            if (prev_ref) {
                trial.pump_ref = s.field.pump;
                trial.stokes_ref = s.field.stokes;
            }
            const Trajectory traj =
                propagate_state_forward(scenario.initial_state, trial, scenario.detunings);
            const CostBreakdown cb = evaluate_cost(trial, traj, scenario.target, pen);
            if (cb.total >= s.cost.total) {
                s.field = std::move(trial);
                s.traj = traj;
                s.cost = cb;
                theta = std::min(1.0, theta * 2.0);
                return true;
            }
            theta *= 0.5;
        }
        return false;
    };
    return run_loop(std::move(st), scenario, pen, config, step);
}

OptimizationResult run_optimizer(const ControlField& initial_field, const Scenario& scenario,
                                 const OptimizerConfig& config) {
    switch (config.method) {
        case Method::conjugate_gradient:
            return run_conjugate_gradient(initial_field, scenario, config);
        case Method::zhu_rabitz:
            return run_zhu_rabitz(initial_field, scenario, config);
        default:
            return run_krotov(initial_field, scenario, config);
    }
}

}  // namespace oct
