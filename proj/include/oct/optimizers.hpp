#pragma once

#include <functional>
#include <vector>

#include "oct/control_field.hpp"
#include "oct/dynamics.hpp"
#include "oct/objective.hpp"
#include "oct/scenarios.hpp"

namespace oct {

enum class Method { conjugate_gradient, zhu_rabitz, krotov };

std::string to_string(Method method);

// Reference envelopes used by the field penalty and the update equations:
// zero, the initial guess held fixed, or (Krotov only) the previous iterate.
enum class ReferenceMode { zero, fixed_guess, previous_iterate };

std::string to_string(ReferenceMode mode);

struct LineSearchConfig {
    double growth = 2.0;       // bracket expansion factor
    int max_evaluations = 40;  // cost-evaluation budget per search
    double tolerance = 1e-3;   // relative golden-section interval tolerance
};

struct OptimizerConfig {
    Method method = Method::conjugate_gradient;
    PenaltyConfig penalties;
    ReferenceMode reference_mode = ReferenceMode::zero;
    int max_iterations = 1000;
    double convergence_threshold = 1e-8;  // gamma
    LineSearchConfig line_search;
};

struct IterationRecord {
    int index = 0;  // 1-based
    CostBreakdown cost;
    double transition_probability = 0.0;  // equals cost.fidelity
    double max_rho22 = 0.0;
};

struct ResultSummary {
    double transition_probability = 0.0;
    double total_cost = 0.0;
    double max_rho22 = 0.0;
    double final_coherence = 0.0;  // |rho31(T)|
    double pump_peak_time = 0.0;
    double stokes_peak_time = 0.0;
    bool converged = false;
};

// records hold the evaluated iterates 1..m (m <= max_iterations), each taken
// before its update step. When the Delta-K <= gamma test fires at iterate k
// the run stops with the k-th evaluation in the summary and records ending at
// k-1, so the summary agrees with the last record within gamma.
struct OptimizationResult {
    ControlField final_field;
    Trajectory final_trajectory;
    std::vector<IterationRecord> records;
    ResultSummary summary;
};

struct GradientPair {
    std::vector<double> pump;
    std::vector<double> stokes;
};

// Exact gradient of the discrete cost (midpoint-exponential propagation plus
// trapezoid penalties) with respect to the node samples of both envelopes.
// Built from the directional derivative of each step's matrix exponential in
// its eigenbasis, so it matches central finite differences of the full
// pipeline to the differencing noise floor. costate_traj must come from
// propagate_costate_backward for state_traj; the terminal node's source share
// is applied internally.
GradientPair cost_gradient(const ControlField& field, const Trajectory& state_traj,
                           const Trajectory& costate_traj, const PenaltyConfig& penalties,
                           const Detunings& det = {});

// d = g + zeta * d_prev with the Polak-Ribiere-Polyak zeta clamped at zero
// (restart). Zero previous gradient returns g.
std::vector<double> prp_direction(const std::vector<double>& gradient,
                                  const std::vector<double>& previous_gradient,
                                  const std::vector<double>& previous_direction);

struct LineSearchResult {
    double lambda = 0.0;
    double cost = 0.0;
    int evaluations = 0;
    bool stalled = false;
};

// Maximizes cost_along(lambda) for lambda > 0: the seed is shrunk until it
// improves on cost_at_zero, the bracket then grows by the configured factor,
// and golden-section refinement finishes within the evaluation budget.
// Returns the best evaluated point; stalls (lambda = 0) when no improvement
// is found.
LineSearchResult line_search(const std::function<double(double)>& cost_along,
                             double cost_at_zero, double seed,
                             const LineSearchConfig& config);

OptimizationResult run_conjugate_gradient(const ControlField& initial_field,
                                          const Scenario& scenario,
                                          const OptimizerConfig& config);

OptimizationResult run_zhu_rabitz(const ControlField& initial_field,
                                  const Scenario& scenario,
                                  const OptimizerConfig& config);

OptimizationResult run_krotov(const ControlField& initial_field,
                              const Scenario& scenario,
                              const OptimizerConfig& config);

// Dispatch on config.method.
OptimizationResult run_optimizer(const ControlField& initial_field,
                                 const Scenario& scenario,
                                 const OptimizerConfig& config);

}  // namespace oct
