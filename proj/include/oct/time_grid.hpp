#pragma once

#include <stdexcept>
#include <vector>

namespace oct {

// Uniform discretization of [0, target_time] shared by every trajectory and
// field in a run. Node i sits at t_i = i * step, so node(num_steps) is exactly
// target_time.
struct TimeGrid {
    double target_time = 10.0;
    int num_steps = 2000;

    TimeGrid() = default;
    TimeGrid(double target_time_, int num_steps_)
        : target_time(target_time_), num_steps(num_steps_) {
        if (!(target_time > 0.0))
            throw std::invalid_argument("TimeGrid: target_time must be > 0");
        if (num_steps < 1)
            throw std::invalid_argument("TimeGrid: num_steps must be >= 1");
    }

    double step() const { return target_time / num_steps; }
    int num_nodes() const { return num_steps + 1; }
    double node(int i) const { return target_time * i / num_steps; }

    std::vector<double> nodes() const {
        std::vector<double> t(static_cast<size_t>(num_nodes()));
        for (int i = 0; i <= num_steps; ++i) t[static_cast<size_t>(i)] = node(i);
        return t;
    }

    // Trapezoid quadrature weight of node i: step/2 at the ends, step inside.
    double weight(int i) const {
        return (i == 0 || i == num_steps) ? 0.5 * step() : step();
    }

    bool operator==(const TimeGrid&) const = default;
};

}  // namespace oct
