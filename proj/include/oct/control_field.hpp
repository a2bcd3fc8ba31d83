#pragma once

#include <vector>

#include "oct/time_grid.hpp"

namespace oct {

// Sampled real Rabi-frequency envelopes (units 1/tau0) for the pump and
// Stokes channels, plus the reference envelopes entering the field penalty.
// All arrays hold one value per grid node.
struct ControlField {
    TimeGrid grid;
    std::vector<double> pump;
    std::vector<double> stokes;
    std::vector<double> pump_ref;
    std::vector<double> stokes_ref;

    ControlField() : ControlField(TimeGrid{}) {}
    explicit ControlField(const TimeGrid& g)
        : grid(g),
          pump(static_cast<size_t>(g.num_nodes()), 0.0),
          stokes(static_cast<size_t>(g.num_nodes()), 0.0),
          pump_ref(static_cast<size_t>(g.num_nodes()), 0.0),
          stokes_ref(static_cast<size_t>(g.num_nodes()), 0.0) {}
};

}  // namespace oct
