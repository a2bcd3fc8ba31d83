#pragma once

#include <cmath>
#include <vector>

#include "oct/control_field.hpp"
#include "oct/dynamics.hpp"
#include "oct/time_grid.hpp"

namespace oct::test {

// Deterministic xorshift64* generator so property tests never depend on
// library RNG implementations.
struct Rng {
    unsigned long long state;
    explicit Rng(unsigned long long seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    unsigned long long next_bits() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dull;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline std::vector<double> gaussian_samples(const TimeGrid& grid, double amp, double center,
                                            double width) {
    std::vector<double> v(static_cast<size_t>(grid.num_nodes()));
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double u = (grid.node(i) - center) / width;
        v[static_cast<size_t>(i)] = amp * std::exp(-0.5 * u * u);
    }
    return v;
}

inline ControlField gaussian_pair(const TimeGrid& grid, double pump_amp, double pump_center,
                                  double stokes_amp, double stokes_center, double width) {
    ControlField f(grid);
    f.pump = gaussian_samples(grid, pump_amp, pump_center, width);
    f.stokes = gaussian_samples(grid, stokes_amp, stokes_center, width);
    return f;
}

// Smooth band-limited random envelopes: a few sine modes with random
// coefficients, bounded by amp.
inline ControlField random_smooth_field(const TimeGrid& grid, Rng& rng, double amp) {
    ControlField f(grid);
    const double T = grid.target_time;
    double cp[3], cs[3], pp[3], ps[3];
    for (int m = 0; m < 3; ++m) {
        cp[m] = rng.uniform(-1.0, 1.0);
        cs[m] = rng.uniform(-1.0, 1.0);
        pp[m] = rng.uniform(0.0, 6.283185307179586);
        ps[m] = rng.uniform(0.0, 6.283185307179586);
    }
    for (int i = 0; i < grid.num_nodes(); ++i) {
        const double t = grid.node(i);
        double vp = 0.0, vs = 0.0;
        for (int m = 0; m < 3; ++m) {
            vp += cp[m] * std::sin((m + 1) * 3.141592653589793 * t / T + pp[m]);
            vs += cs[m] * std::sin((m + 1) * 3.141592653589793 * t / T + ps[m]);
        }
        f.pump[static_cast<size_t>(i)] = amp * vp / 3.0;
        f.stokes[static_cast<size_t>(i)] = amp * vs / 3.0;
    }
    return f;
}

inline State random_unit_state(Rng& rng) {
    State s;
    for (int k = 0; k < 3; ++k)
        s(k) = std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return s / s.norm();
}

}  // namespace oct::test
