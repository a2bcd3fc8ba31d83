#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oct/run_config.hpp"
#include "oct/runner.hpp"

using namespace oct;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

// what() of the exception thrown by fn, or empty if it did not throw
template <typename Fn>
std::string thrown_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

RunConfig tiny_run_config(const std::string& out_dir) {
    RunConfig cfg;
    cfg.scenario = ScenarioKind::population_transfer;
    cfg.method = Method::krotov;
    cfg.alpha0 = 0.1;
    cfg.beta = 0.0;
    cfg.max_iterations = 10;
    cfg.num_steps = 120;
    cfg.output_dir = out_dir;
    return cfg;
}

}  // namespace

TEST_CASE("parse_config fills defaults from a minimal document") {
    const RunConfig cfg = parse_config("scenario = population-transfer\nmethod = krotov\n");
    CHECK(cfg.scenario == ScenarioKind::population_transfer);
    CHECK(cfg.method == Method::krotov);
    CHECK(cfg.alpha0 == 0.01);
    CHECK(cfg.beta == 0.0);
    CHECK(cfg.reference_mode == ReferenceMode::zero);
    CHECK(cfg.gamma == 1e-8);
    CHECK(cfg.max_iterations == 1000);
    CHECK(cfg.target_time == 10.0);
    CHECK(cfg.num_steps == 2000);
    CHECK(cfg.guess_amplitude == 1.0);
    CHECK(cfg.guess_center == 5.0);
    CHECK(cfg.guess_width == 1.0);
}

TEST_CASE("parse_config handles comments, blanks, and both separators") {
    const RunConfig cfg = parse_config(
        "# a comment line\n"
        "\n"
        "scenario: max-coherence\n"
        "alpha0 = 0.0005   # trailing comment\n"
        "beta: 1.8\n");
    CHECK(cfg.scenario == ScenarioKind::max_coherence);
    CHECK(cfg.alpha0 == 0.0005);
    CHECK(cfg.beta == 1.8);
}

TEST_CASE("parse_config rejects malformed and out-of-range documents") {
    SUBCASE("negative beta names the field") {
        const std::string msg = thrown_message([] { parse_config("beta = -1\n"); });
        CHECK(msg.find("beta") != std::string::npos);
    }
    SUBCASE("missing separator reports the line number") {
        const std::string msg =
            thrown_message([] { parse_config("scenario = max-coherence\nmethod krotov\n"); });
        CHECK(msg.find("line 2") != std::string::npos);
    }
    SUBCASE("unknown keys are named") {
        const std::string msg = thrown_message([] { parse_config("quux = 3\n"); });
        CHECK(msg.find("quux") != std::string::npos);
    }
    SUBCASE("duplicate keys are flagged") {
        const std::string msg =
            thrown_message([] { parse_config("beta = 1\nbeta = 2\n"); });
        CHECK(msg.find("duplicate") != std::string::npos);
    }
    SUBCASE("grid bounds") {
        const std::string msg = thrown_message([] { parse_config("num_steps = 5\n"); });
        CHECK(msg.find("num_steps") != std::string::npos);
    }
    SUBCASE("previous-iterate requires Krotov") {
        const std::string msg = thrown_message([] {
            parse_config("method = conjugate-gradient\nreference_mode = previous-iterate\n");
        });
        CHECK(msg.find("previous-iterate") != std::string::npos);
    }
    SUBCASE("non-numeric value") {
        const std::string msg = thrown_message([] { parse_config("alpha0 = fast\n"); });
        CHECK(msg.find("alpha0") != std::string::npos);
    }
}

TEST_CASE("render_config round-trips through parse_config") {
    RunConfig cfg;
    cfg.scenario = ScenarioKind::max_coherence;
    cfg.method = Method::zhu_rabitz;
    cfg.alpha0 = 0.0005;
    cfg.beta = 1.8;
    cfg.gamma = 1e-6;
    cfg.max_iterations = 731;
    cfg.target_time = 12.5;
    cfg.num_steps = 1234;
    cfg.guess_amplitude = 15.0;
    cfg.guess_center = 4.75;
    cfg.guess_width = 0.875;
    cfg.output_dir = "some/dir";
    CHECK(parse_config(render_config(cfg)) == cfg);

    RunConfig krotov;
    krotov.method = Method::krotov;
    krotov.reference_mode = ReferenceMode::previous_iterate;
    CHECK(parse_config(render_config(krotov)) == krotov);

    CHECK(parse_config(render_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("execute_run writes the documented artifact set") {
    const fs::path dir = fresh_dir("oct_cli_artifacts");
    const RunConfig cfg = tiny_run_config(dir.string());
    const RunOutput out = execute_run(cfg);
    CHECK(out.directory == dir.string());

    for (const char* name : {"field.csv", "populations.csv", "convergence.csv", "summary.txt"})
        CHECK(fs::exists(dir / name));

    SUBCASE("field.csv is rectangular with one row per node") {
        const std::vector<std::string> lines = lines_of(slurp(dir / "field.csv"));
        REQUIRE(lines.size() == static_cast<size_t>(cfg.num_steps) + 2);
        CHECK(lines[0] == "t,omega_P,omega_S");
        for (size_t i = 1; i < lines.size(); ++i) CHECK(split_csv(lines[i]).size() == 3);
    }
    SUBCASE("populations.csv final row is normalized") {
        const std::vector<std::string> lines = lines_of(slurp(dir / "populations.csv"));
        REQUIRE(lines.size() == static_cast<size_t>(cfg.num_steps) + 2);
        CHECK(lines[0] == "t,rho11,rho22,rho33,rho31_abs");
        const std::vector<std::string> last = split_csv(lines.back());
        REQUIRE(last.size() == 5);
        CHECK(std::stod(last[0]) == doctest::Approx(cfg.target_time).epsilon(1e-12));
        const double sum = std::stod(last[1]) + std::stod(last[2]) + std::stod(last[3]);
        CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
    SUBCASE("convergence.csv mirrors the iteration records") {
        const std::vector<std::string> lines = lines_of(slurp(dir / "convergence.csv"));
        CHECK(lines[0] == "iteration,P,K,field_penalty,state_penalty");
        REQUIRE(lines.size() == out.result.records.size() + 1);
        REQUIRE(out.result.records.size() <= static_cast<size_t>(cfg.max_iterations));
        for (size_t i = 0; i < out.result.records.size(); ++i) {
            const std::vector<std::string> row = split_csv(lines[i + 1]);
            REQUIRE(row.size() == 5);
            CHECK(std::stoi(row[0]) == out.result.records[i].index);
            CHECK(std::stod(row[2]) ==
                  doctest::Approx(out.result.records[i].cost.total).epsilon(1e-9));
        }
    }
    SUBCASE("summary.txt repeats the config and the table metrics") {
        const std::string text = slurp(dir / "summary.txt");
        CHECK(text.find("scenario = population-transfer") != std::string::npos);
        CHECK(text.find("method = krotov") != std::string::npos);
        CHECK(text.find("transition_probability = ") != std::string::npos);
        CHECK(text.find("max_rho22 = ") != std::string::npos);
        CHECK(text.find("converged = ") != std::string::npos);
        CHECK(text.find("ordering = ") != std::string::npos);
    }
}

TEST_CASE("identical runs emit byte-identical artifacts") {
    const fs::path dir_a = fresh_dir("oct_cli_repeat_a");
    const fs::path dir_b = fresh_dir("oct_cli_repeat_b");
    execute_run(tiny_run_config(dir_a.string()));
    execute_run(tiny_run_config(dir_b.string()));
    for (const char* name : {"field.csv", "populations.csv", "convergence.csv", "summary.txt"})
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("the default output directory honors the environment override") {
    const fs::path dir = fresh_dir("oct_cli_envdir");
    REQUIRE(setenv("LAMBDAOCT_OUT_DIR", dir.c_str(), 1) == 0);
    RunConfig cfg = tiny_run_config("");
    cfg.max_iterations = 2;
    const RunOutput out = execute_run(cfg);
    unsetenv("LAMBDAOCT_OUT_DIR");
    CHECK(out.directory == dir.string());
    CHECK(fs::exists(dir / "summary.txt"));
}

TEST_CASE("compare_methods renders per-scenario tables into subdirectories") {
    const fs::path dir = fresh_dir("oct_cli_compare");

    RunConfig transfer = tiny_run_config("");
    transfer.max_iterations = 8;
    RunConfig transfer_zr = transfer;
    transfer_zr.method = Method::zhu_rabitz;
    RunConfig coh = transfer;
    coh.scenario = ScenarioKind::max_coherence;
    coh.max_iterations = 5;

    const ComparisonReport report =
        compare_methods({transfer, transfer_zr, coh}, dir.string());

    CHECK(fs::exists(dir / "01-krotov" / "summary.txt"));
    CHECK(fs::exists(dir / "02-zhu-rabitz" / "summary.txt"));
    CHECK(fs::exists(dir / "03-krotov" / "summary.txt"));

    CHECK(report.table.find("population transfer") != std::string::npos);
    CHECK(report.table.find("maximum coherence") != std::string::npos);
    CHECK(report.table.find("method") != std::string::npos);
    CHECK(report.table.find("max_rho22") != std::string::npos);
    CHECK(report.table.find("rho31_abs") != std::string::npos);
    CHECK(report.table.find("krotov") != std::string::npos);
    CHECK(report.table.find("zhu-rabitz") != std::string::npos);

    // none of these short runs hits the threshold, so the flag must be off
    CHECK_FALSE(report.all_converged);
    CHECK(report.table.find("* did not converge") != std::string::npos);
}
