#pragma once

#include <string>

#include "oct/control_field.hpp"
#include "oct/dynamics.hpp"

namespace oct {

struct OptimizationResult;

enum class ScenarioKind { population_transfer, max_coherence };

std::string to_string(ScenarioKind kind);

// Gaussian guess parameters of both envelopes (units: 1/tau0, tau0, tau0).
struct GuessParams {
    double amplitude = 1.0;
    double center = 5.0;
    double width = 1.0;
};

// A ready-to-run control problem: initial and target states with the grid and
// guess defaults. population_transfer drives (1,0,0) -> (0,0,1);
// max_coherence drives (1,0,0) -> (1/sqrt2, 0, -1/sqrt2), the sign matching
// the dark state so the half-STIRAP mechanism is reachable.
struct Scenario {
    ScenarioKind kind = ScenarioKind::population_transfer;
    State initial_state;
    State target;
    Detunings detunings;
    GuessParams guess;
    TimeGrid grid;
};

Scenario make_scenario(ScenarioKind kind, const TimeGrid& grid);

// Both envelopes amplitude*exp(-(t-center)^2/(2 width^2)) on the grid;
// reference envelopes zero.
ControlField gaussian_guess(const Scenario& scenario);

enum class Ordering { intuitive, counterintuitive, simultaneous };

std::string to_string(Ordering ordering);

struct MechanismReport {
    Ordering ordering = Ordering::simultaneous;
    bool half_stirap = false;
};

// Peak-time comparison with simultaneity tolerance 0.1 (time units of tau0).
// half_stirap: counterintuitive ordering and |pump/stokes - 1| < 0.1 on the
// trailing-edge nodes past the later peak where both envelopes still exceed
// 10% of their peaks. Throws when either channel's peak is below 1e-3 of the
// larger peak (degenerate field).
MechanismReport classify_mechanism(const ControlField& field);
MechanismReport classify_mechanism(const OptimizationResult& result);

}  // namespace oct
