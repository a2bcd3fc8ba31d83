#pragma once

#include <string>
#include <vector>

#include "oct/optimizers.hpp"
#include "oct/run_config.hpp"

namespace oct {

struct RunOutput {
    OptimizationResult result;
    std::string directory;  // where the CSV/summary files were written
};

// Builds the scenario and guess from config, runs the selected optimizer, and
// writes field.csv, populations.csv, convergence.csv and summary.txt into the
// resolved output directory (config.output_dir, else $LAMBDAOCT_OUT_DIR, else
// "out"). Non-convergence is reported in the summary, not thrown; I/O
// failures throw std::runtime_error.
RunOutput execute_run(const RunConfig& config);

struct ComparisonReport {
    std::string table;
    bool all_converged = false;
};

// Executes every config (outputs in numbered subdirectories of output_dir)
// and renders one plain-text comparison table per scenario: columns
// method/alpha0/beta plus P, K, max rho22 for population transfer, and the
// final populations, |rho31|, P, K for coherence. A run that throws becomes a
// FAILED row and does not abort the rest; non-converged rows are marked '*'.
// all_converged is true only if every run converged.
ComparisonReport compare_methods(std::vector<RunConfig> configs, const std::string& output_dir);

}  // namespace oct
