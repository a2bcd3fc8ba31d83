#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oct/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Overrides {
    std::string out_dir;
    int grid = 0;
    int max_iter = 0;
    double gamma = 0.0;
    bool has_out = false, has_grid = false, has_max_iter = false, has_gamma = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (default: $LAMBDAOCT_OUT_DIR or out)");
        cmd->add_option("--grid", grid, "override num_steps")->check(CLI::Range(10, 10000000));
        cmd->add_option("--max-iter", max_iter, "override max_iterations")
            ->check(CLI::Range(1, 1000000));
        cmd->add_option("--gamma", gamma, "override convergence threshold")
            ->check(CLI::PositiveNumber);
    }

    void capture(const CLI::App* cmd) {
        has_out = cmd->count("--out") > 0;
        has_grid = cmd->count("--grid") > 0;
        has_max_iter = cmd->count("--max-iter") > 0;
        has_gamma = cmd->count("--gamma") > 0;
    }

    void apply(oct::RunConfig& cfg) const {
        if (has_out) cfg.output_dir = out_dir;
        if (has_grid) cfg.num_steps = grid;
        if (has_max_iter) cfg.max_iterations = max_iter;
        if (has_gamma) cfg.gamma = gamma;
    }
};

int do_run(const std::string& path, const Overrides& ov) {
    oct::RunConfig cfg = oct::parse_config(read_file(path));
    ov.apply(cfg);
    const oct::RunOutput out = oct::execute_run(cfg);
    const oct::ResultSummary& s = out.result.summary;

    std::string ordering = "degenerate";
    std::string half = "false";
    try {
        const oct::MechanismReport mech = oct::classify_mechanism(out.result);
        ordering = oct::to_string(mech.ordering);
        half = mech.half_stirap ? "true" : "false";
    } catch (const std::invalid_argument&) {
    }

    std::printf("%s / %s: %s after %zu recorded iterations\n",
                oct::to_string(cfg.scenario).c_str(), oct::to_string(cfg.method).c_str(),
                s.converged ? "converged" : "did not converge", out.result.records.size());
    std::printf("P = %.6f   K = %.6f   max_rho22 = %.4f   |rho31(T)| = %.4f\n",
                s.transition_probability, s.total_cost, s.max_rho22, s.final_coherence);
    std::printf("pump peak t = %.3f   stokes peak t = %.3f   ordering = %s   half_stirap = %s\n",
                s.pump_peak_time, s.stokes_peak_time, ordering.c_str(), half.c_str());
    std::printf("outputs: %s\n", out.directory.c_str());
    return s.converged ? 0 : 1;
}

int do_compare(const std::vector<std::string>& paths, const Overrides& ov) {
    std::vector<oct::RunConfig> configs;
    configs.reserve(paths.size());
    for (const std::string& path : paths) {
        oct::RunConfig cfg = oct::parse_config(read_file(path));
        ov.apply(cfg);
        cfg.output_dir.clear();  // compare assigns per-run subdirectories
        configs.push_back(cfg);
    }
    const std::string out_dir = ov.has_out ? ov.out_dir : std::string();
    const oct::ComparisonReport report = oct::compare_methods(std::move(configs), out_dir);
    std::fputs(report.table.c_str(), stdout);
    return report.all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pump/Stokes pulse-pair optimal control for a three-level Lambda system"};
    app.require_subcommand(1);

    Overrides run_ov, cmp_ov;
    std::string run_file;
    std::vector<std::string> cmp_files;

    CLI::App* run = app.add_subcommand("run", "execute one run from a config file");
    run->add_option("config", run_file, "key = value config file")
        ->required()
        ->check(CLI::ExistingFile);
    run_ov.add_to(run);

    CLI::App* cmp =
        app.add_subcommand("compare", "run several configs and print a comparison table");
    cmp->add_option("configs", cmp_files, "config files, one per run")
        ->required()
        ->check(CLI::ExistingFile);
    cmp_ov.add_to(cmp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_ov.capture(run);
            return do_run(run_file, run_ov);
        }
        cmp_ov.capture(cmp);
        return do_compare(cmp_files, cmp_ov);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
