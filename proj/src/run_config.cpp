#include "oct/run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace oct {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + message);
}

double parse_double(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        fail(line, key + ": not a number: '" + value + "'");
    if (!std::isfinite(v)) fail(line, key + " must be finite");
    return v;
}

long parse_long(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        fail(line, key + ": not an integer: '" + value + "'");
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::set<std::string> seen;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        size_t sep = stripped.find_first_of("=:");
        if (sep == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, sep));
        const std::string value = trim(stripped.substr(sep + 1));
        if (key.empty()) fail(line, "missing key before '" + std::string(1, stripped[sep]) + "'");
        if (value.empty()) fail(line, key + ": missing value");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

        if (key == "scenario") {
            if (value == "population-transfer")
                cfg.scenario = ScenarioKind::population_transfer;
            else if (value == "max-coherence")
                cfg.scenario = ScenarioKind::max_coherence;
            else
                fail(line, "scenario must be population-transfer or max-coherence, got '" +
                               value + "'");
        } else if (key == "method") {
            if (value == "conjugate-gradient")
                cfg.method = Method::conjugate_gradient;
            else if (value == "zhu-rabitz")
                cfg.method = Method::zhu_rabitz;
            else if (value == "krotov")
                cfg.method = Method::krotov;
            else
                fail(line, "method must be conjugate-gradient, zhu-rabitz or krotov, got '" +
                               value + "'");
        } else if (key == "reference_mode") {
            if (value == "zero")
                cfg.reference_mode = ReferenceMode::zero;
            else if (value == "fixed-guess")
                cfg.reference_mode = ReferenceMode::fixed_guess;
            else if (value == "previous-iterate")
                cfg.reference_mode = ReferenceMode::previous_iterate;
            else
                fail(line, "reference_mode must be zero, fixed-guess or previous-iterate, got '" +
                               value + "'");
        } else if (key == "alpha0") {
            cfg.alpha0 = parse_double(line, key, value);
            if (!(cfg.alpha0 > 0.0)) fail(line, "alpha0 must be > 0");
        } else if (key == "beta") {
            cfg.beta = parse_double(line, key, value);
            if (cfg.beta < 0.0) fail(line, "beta must be >= 0");
        } else if (key == "gamma") {
            cfg.gamma = parse_double(line, key, value);
            if (!(cfg.gamma > 0.0)) fail(line, "gamma must be > 0");
        } else if (key == "max_iterations") {
            const long v = parse_long(line, key, value);
            if (v < 1 || v > 1000000) fail(line, "max_iterations must be in [1, 1000000]");
            cfg.max_iterations = static_cast<int>(v);
        } else if (key == "target_time") {
            cfg.target_time = parse_double(line, key, value);
            if (!(cfg.target_time > 0.0)) fail(line, "target_time must be > 0");
        } else if (key == "num_steps") {
            const long v = parse_long(line, key, value);
            if (v < 10 || v > 10000000) fail(line, "num_steps must be in [10, 10000000]");
            cfg.num_steps = static_cast<int>(v);
        } else if (key == "guess_amplitude") {
            cfg.guess_amplitude = parse_double(line, key, value);
            if (!(cfg.guess_amplitude > 0.0)) fail(line, "guess_amplitude must be > 0");
        } else if (key == "guess_center") {
            cfg.guess_center = parse_double(line, key, value);
        } else if (key == "guess_width") {
            cfg.guess_width = parse_double(line, key, value);
            if (!(cfg.guess_width > 0.0)) fail(line, "guess_width must be > 0");
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "seed") {
            cfg.seed = parse_long(line, key, value);
            if (cfg.seed < 0) fail(line, "seed must be >= 0");
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    if (cfg.reference_mode == ReferenceMode::previous_iterate &&
        cfg.method != Method::krotov)
        throw std::runtime_error(
            "config: reference_mode previous-iterate requires method = krotov");
    return cfg;
}

std::string render_config(const RunConfig& config) {
    std::ostringstream out;
    out << "scenario = " << to_string(config.scenario) << '\n'
        << "method = " << to_string(config.method) << '\n'
        << "reference_mode = " << to_string(config.reference_mode) << '\n'
        << "alpha0 = " << fmt(config.alpha0) << '\n'
        << "beta = " << fmt(config.beta) << '\n'
        << "gamma = " << fmt(config.gamma) << '\n'
        << "max_iterations = " << config.max_iterations << '\n'
        << "target_time = " << fmt(config.target_time) << '\n'
        << "num_steps = " << config.num_steps << '\n'
        << "guess_amplitude = " << fmt(config.guess_amplitude) << '\n'
        << "guess_center = " << fmt(config.guess_center) << '\n'
        << "guess_width = " << fmt(config.guess_width) << '\n';
    if (!config.output_dir.empty()) out << "output_dir = " << config.output_dir << '\n';
    out << "seed = " << config.seed << '\n';
    return out.str();
}

}  // namespace oct
