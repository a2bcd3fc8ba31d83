#include "oct/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oct {

ShapeFunction ShapeFunction::sine_squared(const TimeGrid& grid) {
    ShapeFunction s;
    s.kind = Kind::sine_squared;
    s.samples.resize(static_cast<size_t>(grid.num_nodes()));
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double v = std::sin(std::numbers::pi * grid.node(i) / grid.target_time);
        s.samples[static_cast<size_t>(i)] = std::max(v * v, kShapeFloor);
    }
    return s;
}

ShapeFunction ShapeFunction::flat(const TimeGrid& grid) {
    ShapeFunction s;
    s.kind = Kind::flat;
    s.samples.assign(static_cast<size_t>(grid.num_nodes()), 1.0);
    return s;
}

ShapeFunction ShapeFunction::custom(const TimeGrid& grid, std::vector<double> samples) {
    if (samples.size() != static_cast<size_t>(grid.num_nodes()))
        throw std::invalid_argument("ShapeFunction::custom: one sample per node required");
    for (double v : samples)
        if (!(v > 0.0) || v > 1.0)
            throw std::invalid_argument("ShapeFunction::custom: samples must lie in (0, 1]");
    ShapeFunction s;
    s.kind = Kind::custom;
    s.samples = std::move(samples);
    for (double& v : s.samples) v = std::max(v, kShapeFloor);
    return s;
}

PenaltyConfig::PenaltyConfig(double alpha0_, double beta_, ShapeFunction shape_)
    : alpha0(alpha0_), beta(beta_), shape(std::move(shape_)) {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("PenaltyConfig: alpha0 must be > 0");
    if (beta < 0.0) throw std::invalid_argument("PenaltyConfig: beta must be >= 0");
}

CostBreakdown evaluate_cost(const ControlField& field, const Trajectory& trajectory,
                            const State& target, const PenaltyConfig& penalties) {
    const TimeGrid& g = field.grid;
    if (!(trajectory.grid == g))
        throw std::invalid_argument("evaluate_cost: grid mismatch");
    if (penalties.shape.samples.size() != static_cast<size_t>(g.num_nodes()))
        throw std::invalid_argument("evaluate_cost: shape sampled on a different grid");

    CostBreakdown cb;
    const std::complex<double> overlap =
        target.adjoint() * trajectory.states[static_cast<size_t>(g.num_steps)];
    cb.fidelity = std::norm(overlap);

    double fp = 0.0, sp = 0.0;
    for (int i = 0; i < g.num_nodes(); ++i) {
        const size_t si = static_cast<size_t>(i);
        const double w = g.weight(i);
        const double dp = field.pump[si] - field.pump_ref[si];
        const double ds = field.stokes[si] - field.stokes_ref[si];
        fp += w * penalties.alpha(i) * (dp * dp + ds * ds);
        sp += w * std::norm(trajectory.states[si](1));
    }
    cb.field_penalty = fp;
    cb.state_penalty = penalties.beta * sp;
    cb.total = cb.fidelity - cb.field_penalty - cb.state_penalty;
    return cb;
}

State terminal_costate(const State& final_state, const State& target) {
    const std::complex<double> overlap = target.adjoint() * final_state;
    return overlap * target;
}

PopulationMetrics intermediate_population_metrics(const Trajectory& trajectory) {
    PopulationMetrics m;
    for (int i = 0; i < trajectory.grid.num_nodes(); ++i) {
        const double r22 = std::norm(trajectory.states[static_cast<size_t>(i)](1));
        m.max_rho22 = std::max(m.max_rho22, r22);
        m.integral_rho22 += trajectory.grid.weight(i) * r22;
    }
    return m;
}

std::vector<double> coherence(const Trajectory& trajectory) {
    std::vector<double> c(trajectory.states.size());
    for (size_t i = 0; i < trajectory.states.size(); ++i)
        c[i] = std::abs(std::conj(trajectory.states[i](2)) * trajectory.states[i](0));
    return c;
}

}  // namespace oct
