#pragma once

#include <string>

#include "oct/optimizers.hpp"
#include "oct/scenarios.hpp"

namespace oct {

// One optimization run, as configured from a key-value document. Numeric
// fields must be finite; see parse_config for the validation rules.
struct RunConfig {
    ScenarioKind scenario = ScenarioKind::population_transfer;
    Method method = Method::conjugate_gradient;
    double alpha0 = 0.01;
    double beta = 0.0;
    ReferenceMode reference_mode = ReferenceMode::zero;
    double gamma = 1e-8;
    int max_iterations = 1000;
    double target_time = 10.0;
    int num_steps = 2000;
    double guess_amplitude = 1.0;
    double guess_center = 5.0;
    double guess_width = 1.0;
    // Empty means unset: execute_run falls back to $LAMBDAOCT_OUT_DIR, then "out".
    std::string output_dir;
    // Reserved for future stochastic features; the core is deterministic.
    long seed = 0;

    bool operator==(const RunConfig&) const = default;
};

// Parses a `key = value` document (also accepts `key: value`; '#' starts a
// comment). Omitted keys keep their defaults. Throws std::runtime_error with
// the line number and offending field on syntax errors, unknown or duplicate
// keys, and out-of-range values.
RunConfig parse_config(const std::string& text);

// Renders a document that parse_config maps back to exactly the same config
// (doubles are printed with round-trip precision).
std::string render_config(const RunConfig& config);

}  // namespace oct
