#include "oct/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace oct {

namespace {

std::string resolve_output_dir(const std::string& dir) {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv("LAMBDAOCT_OUT_DIR"); env && *env) return env;
    return "out";
}

std::string g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string gshort(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Scenario scenario_from(const RunConfig& config) {
    const TimeGrid grid{config.target_time, config.num_steps};
    Scenario scenario = make_scenario(config.scenario, grid);
    scenario.guess.amplitude = config.guess_amplitude;
    scenario.guess.center = config.guess_center;
    scenario.guess.width = config.guess_width;
    return scenario;
}

OptimizerConfig optimizer_config_from(const RunConfig& config, const TimeGrid& grid) {
    OptimizerConfig ocfg;
    ocfg.method = config.method;
    ocfg.penalties = PenaltyConfig(config.alpha0, config.beta, ShapeFunction::sine_squared(grid));
    ocfg.reference_mode = config.reference_mode;
    ocfg.max_iterations = config.max_iterations;
    ocfg.convergence_threshold = config.gamma;
    return ocfg;
}

std::string field_csv(const ControlField& field) {
    std::ostringstream out;
    out << "t,omega_P,omega_S\n";
    for (int i = 0; i < field.grid.num_nodes(); ++i) {
        const size_t si = static_cast<size_t>(i);
        out << g12(field.grid.node(i)) << ',' << g12(field.pump[si]) << ','
            << g12(field.stokes[si]) << '\n';
    }
    return out.str();
}

std::string populations_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "t,rho11,rho22,rho33,rho31_abs\n";
    for (int i = 0; i < traj.grid.num_nodes(); ++i) {
        const State& s = traj.states[static_cast<size_t>(i)];
        out << g12(traj.grid.node(i)) << ',' << g12(std::norm(s(0))) << ','
            << g12(std::norm(s(1))) << ',' << g12(std::norm(s(2))) << ','
            << g12(std::abs(std::conj(s(2)) * s(0))) << '\n';
    }
    return out.str();
}

std::string convergence_csv(const std::vector<IterationRecord>& records) {
    std::ostringstream out;
    out << "iteration,P,K,field_penalty,state_penalty\n";
    for (const IterationRecord& r : records) {
        out << r.index << ',' << g12(r.transition_probability) << ',' << g12(r.cost.total)
            << ',' << g12(r.cost.field_penalty) << ',' << g12(r.cost.state_penalty) << '\n';
    }
    return out.str();
}

std::string summary_text(const RunConfig& config, const OptimizationResult& result,
                         const CostBreakdown& final_cost, const std::string& ordering,
                         bool half_stirap) {
    const State& fin = result.final_trajectory.states.back();
    std::ostringstream out;
    out << "scenario = " << to_string(config.scenario) << '\n'
        << "method = " << to_string(config.method) << '\n'
        << "reference_mode = " << to_string(config.reference_mode) << '\n'
        << "alpha0 = " << g12(config.alpha0) << '\n'
        << "beta = " << g12(config.beta) << '\n'
        << "gamma = " << g12(config.gamma) << '\n'
        << "max_iterations = " << config.max_iterations << '\n'
        << "target_time = " << g12(config.target_time) << '\n'
        << "num_steps = " << config.num_steps << '\n'
        << "guess_amplitude = " << g12(config.guess_amplitude) << '\n'
        << "guess_center = " << g12(config.guess_center) << '\n'
        << "guess_width = " << g12(config.guess_width) << '\n'
        << "seed = " << config.seed << '\n'
        << "iterations = " << result.records.size() << '\n'
        << "converged = " << (result.summary.converged ? "true" : "false") << '\n'
        << "transition_probability = " << g12(result.summary.transition_probability) << '\n'
        << "total_cost = " << g12(result.summary.total_cost) << '\n'
        << "field_penalty = " << g12(final_cost.field_penalty) << '\n'
        << "state_penalty = " << g12(final_cost.state_penalty) << '\n'
        << "max_rho22 = " << g12(result.summary.max_rho22) << '\n'
        << "final_coherence = " << g12(result.summary.final_coherence) << '\n'
        << "rho11_final = " << g12(std::norm(fin(0))) << '\n'
        << "rho22_final = " << g12(std::norm(fin(1))) << '\n'
        << "rho33_final = " << g12(std::norm(fin(2))) << '\n'
        << "pump_peak_time = " << g12(result.summary.pump_peak_time) << '\n'
        << "stokes_peak_time = " << g12(result.summary.stokes_peak_time) << '\n'
        << "ordering = " << ordering << '\n'
        << "half_stirap = " << (half_stirap ? "true" : "false") << '\n';
    return out.str();
}

std::string pad(const std::string& s, size_t width) {
    return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

std::string render_rows(const std::string& title, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> widths(header.size());
    for (size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& row : rows)
        for (size_t c = 0; c < row.size() && c < widths.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    std::ostringstream out;
    out << title << '\n';
    for (size_t c = 0; c < header.size(); ++c)
        out << (c ? "  " : "") << pad(header[c], widths[c]);
    out << '\n';
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "  " : "")
                << (c + 1 == row.size() ? row[c] : pad(row[c], c < widths.size() ? widths[c] : 0));
        out << '\n';
    }
    return out.str();
}

}  // namespace

RunOutput execute_run(const RunConfig& config) {
    const Scenario scenario = scenario_from(config);
    const ControlField guess = gaussian_guess(scenario);
    const OptimizerConfig ocfg = optimizer_config_from(config, scenario.grid);

    RunOutput out;
    out.result = run_optimizer(guess, scenario, ocfg);
    out.directory = resolve_output_dir(config.output_dir);

    const CostBreakdown final_cost = evaluate_cost(out.result.final_field,
                                                   out.result.final_trajectory, scenario.target,
                                                   ocfg.penalties);
    std::string ordering = "degenerate";
    bool half_stirap = false;
    try {
        const MechanismReport mech = classify_mechanism(out.result);
        ordering = to_string(mech.ordering);
        half_stirap = mech.half_stirap;
    } catch (const std::invalid_argument&) {
        // all-but-vanished field; keep the degenerate marker
    }

    const std::filesystem::path dir(out.directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
    write_file(dir / "field.csv", field_csv(out.result.final_field));
    write_file(dir / "populations.csv", populations_csv(out.result.final_trajectory));
    write_file(dir / "convergence.csv", convergence_csv(out.result.records));
    write_file(dir / "summary.txt",
               summary_text(config, out.result, final_cost, ordering, half_stirap));
    return out;
}

ComparisonReport compare_methods(std::vector<RunConfig> configs, const std::string& output_dir) {
    const std::string parent = resolve_output_dir(output_dir);

    struct Row {
        RunConfig cfg;
        bool failed = false;
        std::string error;
        OptimizationResult result;
    };
    std::vector<Row> rows;
    rows.reserve(configs.size());
    for (size_t i = 0; i < configs.size(); ++i) {
        Row row;
        row.cfg = configs[i];
        char sub[64];
        std::snprintf(sub, sizeof sub, "%02zu-%s", i + 1, to_string(configs[i].method).c_str());
        row.cfg.output_dir = parent + "/" + sub;
        try {
            row.result = execute_run(row.cfg).result;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }

    ComparisonReport report;
    report.all_converged = true;
    bool any_unconverged_marker = false;
    std::ostringstream tables;
    for (const ScenarioKind kind :
         {ScenarioKind::population_transfer, ScenarioKind::max_coherence}) {
        std::vector<std::vector<std::string>> cells;
        for (const Row& row : rows) {
            if (row.cfg.scenario != kind) continue;
            std::string method = to_string(row.cfg.method);
            if (row.cfg.method == Method::krotov &&
                row.cfg.reference_mode != ReferenceMode::zero)
                method += " (ref)";
            if (row.failed) {
                cells.push_back({method, gshort(row.cfg.alpha0), gshort(row.cfg.beta),
                                 "FAILED: " + row.error});
                report.all_converged = false;
                continue;
            }
            if (!row.result.summary.converged) {
                method += " *";
                any_unconverged_marker = true;
                report.all_converged = false;
            }
            const ResultSummary& s = row.result.summary;
            if (kind == ScenarioKind::population_transfer) {
                cells.push_back({method, gshort(row.cfg.alpha0), gshort(row.cfg.beta),
                                 g3(s.transition_probability), g3(s.total_cost),
                                 g3(s.max_rho22)});
            } else {
                const State& fin = row.result.final_trajectory.states.back();
                cells.push_back({method, gshort(row.cfg.alpha0), gshort(row.cfg.beta),
                                 g3(std::norm(fin(0))), g3(std::norm(fin(1))),
                                 g3(std::norm(fin(2))), g3(s.final_coherence),
                                 g3(s.transition_probability), g3(s.total_cost)});
            }
        }
        if (cells.empty() &&
            std::none_of(rows.begin(), rows.end(),
                         [&](const Row& r) { return r.cfg.scenario == kind; }))
            continue;
        if (tables.tellp() > 0) tables << '\n';
        if (kind == ScenarioKind::population_transfer) {
            tables << render_rows("population transfer",
                                  {"method", "alpha0", "beta", "P", "K", "max_rho22"}, cells);
        } else {
            tables << render_rows("maximum coherence",
                                  {"method", "alpha0", "beta", "rho11", "rho22", "rho33",
                                   "rho31_abs", "P", "K"},
                                  cells);
        }
    }
    if (any_unconverged_marker) tables << "* did not converge\n";
    report.table = tables.str();
    return report;
}

}  // namespace oct
