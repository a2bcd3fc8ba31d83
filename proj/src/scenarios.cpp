#include "oct/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oct/optimizers.hpp"

namespace oct {

std::string to_string(ScenarioKind kind) {
    return kind == ScenarioKind::population_transfer ? "population-transfer"
                                                     : "max-coherence";
}

std::string to_string(Ordering ordering) {
    switch (ordering) {
        case Ordering::intuitive: return "intuitive";
        case Ordering::counterintuitive: return "counterintuitive";
        default: return "simultaneous";
    }
}

Scenario make_scenario(ScenarioKind kind, const TimeGrid& grid) {
    Scenario s;
    s.kind = kind;
    s.grid = grid;
    s.initial_state = State(1.0, 0.0, 0.0);
    if (kind == ScenarioKind::population_transfer) {
        s.target = State(0.0, 0.0, 1.0);
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        s.target = State(r, 0.0, -r);
    }
    s.guess.center = 0.5 * grid.target_time;
    return s;
}

ControlField gaussian_guess(const Scenario& scenario) {
    if (!(scenario.guess.width > 0.0))
        throw std::invalid_argument("gaussian_guess: width must be > 0");
    ControlField f(scenario.grid);
    for (int i = 0; i < scenario.grid.num_nodes(); ++i) {
        const double u = (scenario.grid.node(i) - scenario.guess.center) / scenario.guess.width;
        const double v = scenario.guess.amplitude * std::exp(-0.5 * u * u);
        f.pump[static_cast<size_t>(i)] = v;
        f.stokes[static_cast<size_t>(i)] = v;
    }
    return f;
}

namespace {

struct PeakInfo {
    double value = 0.0;
    int node = 0;
};

PeakInfo peak_of(const std::vector<double>& samples) {
    PeakInfo p;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double v = std::abs(samples[i]);
        if (v > p.value) {
            p.value = v;
            p.node = static_cast<int>(i);
        }
    }
    return p;
}

}  // namespace

MechanismReport classify_mechanism(const ControlField& field) {
    const PeakInfo pp = peak_of(field.pump);
    const PeakInfo sp = peak_of(field.stokes);
    const double big = std::max(pp.value, sp.value);
    if (big <= 0.0 || pp.value < 1e-3 * big || sp.value < 1e-3 * big)
        throw std::invalid_argument("classify_mechanism: degenerate field");

    const double tp = field.grid.node(pp.node);
    const double ts = field.grid.node(sp.node);
    constexpr double kSimultaneityTol = 0.1;

    MechanismReport r;
    if (ts < tp - kSimultaneityTol)
        r.ordering = Ordering::counterintuitive;
    else if (tp < ts - kSimultaneityTol)
        r.ordering = Ordering::intuitive;
    else
        r.ordering = Ordering::simultaneous;

    if (r.ordering == Ordering::counterintuitive) {
        // Trailing edge: nodes past the later peak where both envelopes stay
        // above 10% of their peaks must keep the amplitude ratio within 10%.
        const int start = std::max(pp.node, sp.node);
        bool any = false, all_close = true;
        for (int i = start; i < field.grid.num_nodes(); ++i) {
            const size_t si = static_cast<size_t>(i);
            const double ap = std::abs(field.pump[si]);
            const double as = std::abs(field.stokes[si]);
            if (ap >= 0.1 * pp.value && as >= 0.1 * sp.value) {
                any = true;
                if (std::abs(ap / as - 1.0) >= 0.1) all_close = false;
            }
        }
        r.half_stirap = any && all_close;
    }
    return r;
}

MechanismReport classify_mechanism(const OptimizationResult& result) {
    return classify_mechanism(result.final_field);
}

}  // namespace oct
