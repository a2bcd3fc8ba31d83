#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "oct/control_field.hpp"
#include "oct/time_grid.hpp"

namespace oct {

// Complex probability-amplitude triple (a1, a2, a3). Costates reuse the type
// un-normalized.
using State = Eigen::Vector3cd;

// Single-photon detunings in units of 1/tau0. Zero is the resonant case.
struct Detunings {
    double pump = 0.0;
    double stokes = 0.0;
};

// State (or costate) history over a grid; states.size() == grid.num_nodes().
struct Trajectory {
    TimeGrid grid;
    std::vector<State> states;
};

// Rotating-frame Hamiltonian (hbar = 1):
//   (1/2) * [[0, -Wp, 0], [-Wp, -2*Dp, -Ws], [0, -Ws, -2*(Dp-Ds)]]
Eigen::Matrix3cd rwa_hamiltonian(double pump_rabi, double stokes_rabi,
                                 const Detunings& det = {});

// Eigendecomposition of the real symmetric step Hamiltonian built from
// midpoint envelopes. H = V * diag(lam) * V^T with orthogonal V; the resonant
// case uses closed-form bright/dark eigenvectors.
struct StepEigen {
    Eigen::Vector3d lam;
    Eigen::Matrix3d vec;
};
StepEigen step_eigen(double pump_mid, double stokes_mid, const Detunings& det);

// Applies exp(-i * sign * H * dt) to v given the step eigensystem.
State apply_step(const StepEigen& se, double dt, int sign, const State& v);

// Advances the Schrodinger equation node to node with the unitary
// exp(-i*H(t_mid)*dt), H built from midpoint-interpolated envelopes.
// Rejects an initial state whose norm deviates from 1 by more than 1e-6.
Trajectory propagate_state_forward(const State& initial, const ControlField& field,
                                   const Detunings& det = {});

// Integrates the costate from t = T down to t = 0: per step the adjoint
// unitary, with the inhomogeneous source beta * a2(t_i) * e2 deposited at
// each node with its trapezoid weight (the discrete adjoint of the forward
// scheme plus quadrature; see cost_gradient). states[last] == terminal; the
// terminal node's own source share is left to the gradient/update consumers.
Trajectory propagate_costate_backward(const State& terminal, const ControlField& field,
                                      const Detunings& det,
                                      const Trajectory& state_trajectory, double beta);

// Zero-eigenvalue dressed state (Ws, 0, -Wp)/sqrt(Wp^2+Ws^2).
// Throws if both Rabi frequencies are zero.
State dark_state(double pump_rabi, double stokes_rabi);

}  // namespace oct
