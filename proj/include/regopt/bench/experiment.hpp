#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "regopt/bench/complexity.hpp"
#include "regopt/bench/generators.hpp"
#include "regopt/bench/trace_io.hpp"

namespace regopt::bench {

struct ScheduleConfig {
    double epsilon0 = 1.0;
    double nu = 0.5;
    double sigma = 0.5;
    double tau = 0.25;               // iterreg
    std::optional<double> lambda;   // gpm; defaults to 1/L
    std::optional<double> theta_k;  // cgm; defaults to 1/L
};

struct ConstantsConfig {
    double beta = 0.5;
    double theta = 0.5;
};

struct StopConfig {
    double epsilon_min = 1e-6;
    std::int64_t max_outer = 60;
    std::uint64_t max_inner_per_l = 1'000'000;
    int max_linesearch_m = 60;
    std::uint64_t max_iter = 10'000;  // single-level methods
};

struct ExperimentConfig {
    std::string problem_label = "illposed_box(2)";
    Method method = Method::Gprm;
    ScheduleConfig schedule;
    ConstantsConfig constants;
    StopConfig stop;
    std::optional<Vector> x0;  // defaults to the generator's start
    std::uint64_t seed = 0;
    std::string output;        // CSV path; empty means nothing is written
    bool oracle_distances = false;

    GeometricSchedule geometric() const { return {schedule.epsilon0, schedule.nu, schedule.sigma}; }
    StopPolicy stop_policy() const;
};

// Parses the JSON config format. Unknown keys and out-of-range values raise
// ConfigError naming the offending field, e.g. "schedule.nu".
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

// Checks that need the problem (dimension, feasibility of x0, step limits in terms of L).
void validate_config(const ExperimentConfig& cfg, const GeneratedProblem& gen);

struct ExperimentResult {
    ExperimentConfig config;
    GeneratedProblem generated;
    SolverTrace trace;
    TraceConstants constants;
    std::optional<MethodConstants> method_constants;
};

// Builds the problem, validates everything before computing, runs the solver
// and writes the trace when cfg.output is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// A config object with an extra "sweep" member mapping dotted field names to
// value lists, e.g. {"schedule.sigma": [1, 0.5, 0.25]}. Returns the cartesian
// product, each with its own output path derived from the base one.
std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& j);

// Runs independent configs on up to `threads` workers; results keep input order.
// A failing run rethrows after all workers finish.
std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads);

// Complexity table for a stored two-level trace. The problem is rebuilt from
// the stored config to recover f* and |x*_n|.
ComplexityReport report_from_trace(const StoredTrace& st, const std::vector<double>& alpha_grid);

std::string format_report(const ComplexityReport& r);

}  // namespace regopt::bench
