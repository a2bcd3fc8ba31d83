#include "oct/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace oct {

Eigen::Matrix3cd rwa_hamiltonian(double pump_rabi, double stokes_rabi,
                                 const Detunings& det) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = h(1, 0) = -0.5 * pump_rabi;
    h(1, 2) = h(2, 1) = -0.5 * stokes_rabi;
    h(1, 1) = -det.pump;
    h(2, 2) = -(det.pump - det.stokes);
    return h;
}

StepEigen step_eigen(double pump_mid, double stokes_mid, const Detunings& det) {
    StepEigen se;
    if (det.pump == 0.0 && det.stokes == 0.0) {
        // Resonant case: H = -(W/2) * B with B^3 = B. Eigenvalues -W/2, 0, W/2
        // belong to the bright-, dark and bright+ combinations.
        const double w = std::hypot(pump_mid, stokes_mid);
        if (w == 0.0) {
            se.lam.setZero();
            se.vec.setIdentity();
            return se;
        }
        const double n1 = pump_mid / w;
        const double n2 = stokes_mid / w;
        const double r = 1.0 / std::sqrt(2.0);
        se.lam << -0.5 * w, 0.0, 0.5 * w;
        se.vec << n1 * r, n2, n1 * r,
                  r,      0.0, -r,
                  n2 * r, -n1, n2 * r;
        return se;
    }
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    h(0, 1) = h(1, 0) = -0.5 * pump_mid;
    h(1, 2) = h(2, 1) = -0.5 * stokes_mid;
    h(1, 1) = -det.pump;
    h(2, 2) = -(det.pump - det.stokes);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.compute(h);
    se.lam = es.eigenvalues();
    se.vec = es.eigenvectors();
    return se;
}

State apply_step(const StepEigen& se, double dt, int sign, const State& v) {
    State tmp = se.vec.transpose() * v;
    for (int a = 0; a < 3; ++a) {
        const double ph = -sign * se.lam(a) * dt;
        tmp(a) *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return se.vec * tmp;
}

Trajectory propagate_state_forward(const State& initial, const ControlField& field,
                                   const Detunings& det) {
    if (std::abs(initial.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("propagate_state_forward: initial state not normalized");
    const TimeGrid& g = field.grid;
    const double dt = g.step();
    Trajectory traj;
    traj.grid = g;
    traj.states.resize(static_cast<size_t>(g.num_nodes()));
    traj.states[0] = initial;
    State cur = initial;
    for (int i = 0; i < g.num_steps; ++i) {
        const size_t si = static_cast<size_t>(i);
        const double pm = 0.5 * (field.pump[si] + field.pump[si + 1]);
        const double sm = 0.5 * (field.stokes[si] + field.stokes[si + 1]);
        cur = apply_step(step_eigen(pm, sm, det), dt, +1, cur);
        traj.states[si + 1] = cur;
    }
    return traj;
}

Trajectory propagate_costate_backward(const State& terminal, const ControlField& field,
                                      const Detunings& det,
                                      const Trajectory& state_trajectory, double beta) {
    const TimeGrid& g = field.grid;
    if (!(state_trajectory.grid == g))
        throw std::invalid_argument("propagate_costate_backward: grid mismatch");
    const double dt = g.step();
    const int n = g.num_steps;
    Trajectory traj;
    traj.grid = g;
    traj.states.resize(static_cast<size_t>(g.num_nodes()));
    traj.states[static_cast<size_t>(n)] = terminal;
    State cur = terminal;
    cur(1) -= beta * g.weight(n) * state_trajectory.states[static_cast<size_t>(n)](1);
    for (int i = n - 1; i >= 0; --i) {
        const size_t si = static_cast<size_t>(i);
        const double pm = 0.5 * (field.pump[si] + field.pump[si + 1]);
        const double sm = 0.5 * (field.stokes[si] + field.stokes[si + 1]);
        cur = apply_step(step_eigen(pm, sm, det), dt, -1, cur);
        cur(1) -= beta * g.weight(i) * state_trajectory.states[si](1);
        traj.states[si] = cur;
    }
    return traj;
}

State dark_state(double pump_rabi, double stokes_rabi) {
    const double w = std::hypot(pump_rabi, stokes_rabi);
    if (w == 0.0)
        throw std::invalid_argument("dark_state: both Rabi frequencies are zero");
    return State(stokes_rabi / w, 0.0, -pump_rabi / w);
}

}  // namespace oct
