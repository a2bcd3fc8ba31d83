#pragma once

#include <vector>

#include "oct/control_field.hpp"
#include "oct/dynamics.hpp"
#include "oct/time_grid.hpp"

namespace oct {

// Floor applied to shape samples so alpha(t) = alpha0/s(t) stays finite at
// the interval edges.
inline constexpr double kShapeFloor = 1e-4;

// Penalty shape s(t) with values in (0, 1]. alpha(t) = alpha0 / s(t) grows
// near the edges, forcing smooth pulse turn-on/off.
struct ShapeFunction {
    enum class Kind { sine_squared, flat, custom };
    Kind kind = Kind::sine_squared;
    std::vector<double> samples;

    static ShapeFunction sine_squared(const TimeGrid& grid);
    static ShapeFunction flat(const TimeGrid& grid);
    // Caller-supplied samples, one per node; values must lie in (0, 1] before
    // flooring. Throws on size or range violations.
    static ShapeFunction custom(const TimeGrid& grid, std::vector<double> samples);
};

struct PenaltyConfig {
    double alpha0 = 0.01;  // field-energy weight, > 0
    double beta = 0.0;     // intermediate-state weight, >= 0
    ShapeFunction shape;

    PenaltyConfig() = default;
    PenaltyConfig(double alpha0_, double beta_, ShapeFunction shape_);

    double alpha(int node) const { return alpha0 / shape.samples[static_cast<size_t>(node)]; }
};

// K = fidelity - field_penalty - state_penalty. The Lagrange-constraint term
// of the cost functional vanishes identically (the state always solves the
// Schrodinger equation) and is not represented.
struct CostBreakdown {
    double fidelity = 0.0;
    double field_penalty = 0.0;
    double state_penalty = 0.0;
    double total = 0.0;
};

// fidelity = |<psi(T)|phi>|^2; penalties integrated by trapezoid rule:
//   field_penalty = int alpha(t) [(Wp-Wp_r)^2 + (Ws-Ws_r)^2] dt
//   state_penalty = beta * int |a2|^2 dt
CostBreakdown evaluate_cost(const ControlField& field, const Trajectory& trajectory,
                            const State& target, const PenaltyConfig& penalties);

// Terminal costate chi(T) = <phi|psi(T)> * phi.
State terminal_costate(const State& final_state, const State& target);

struct PopulationMetrics {
    double max_rho22 = 0.0;
    double integral_rho22 = 0.0;
};
PopulationMetrics intermediate_population_metrics(const Trajectory& trajectory);

// Per-node |a3* a1|, each in [0, 1/2].
std::vector<double> coherence(const Trajectory& trajectory);

}  // namespace oct
