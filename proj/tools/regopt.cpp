// Command-line front end: run, sweep, verify, report.
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "regopt/bench/acceptance.hpp"
#include "regopt/bench/experiment.hpp"
#include "regopt/simd/kernels.hpp"

namespace {

using namespace regopt;
using namespace regopt::bench;

enum Exit : int { kOk = 0, kConfig = 1, kSolver = 2, kAcceptance = 3 };

void print_summary(const ExperimentResult& r) {
    const auto& recs = r.trace.outer_records;
    std::cout << method_name(r.config.method) << " on " << r.generated.label << ": " << recs.size() << " records, "
              << r.trace.counters.inner_iterations << " inner iterations";
    if (!recs.empty() && recs.back().dist_xstar) {
        std::cout << ", final |w - x*| = " << format_double(*recs.back().dist_xstar);
    }
    if (!r.config.output.empty()) std::cout << " -> " << r.config.output;
    std::cout << '\n';
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse_double(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level regularized gradient projection and conditional gradient methods"};
    app.require_subcommand(1);

    std::string simd = "auto";
    app.add_option("--simd", simd, "Vector kernel backend")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    std::string run_cfg, run_out;
    auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
    run->add_option("config", run_cfg, "Config file")->required();
    run->add_option("-o,--output", run_out, "Override the trace output path");

    std::string sweep_cfg;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a config's \"sweep\" lists");
    sweep->add_option("config", sweep_cfg, "Config file with a \"sweep\" object")->required();
    sweep->add_option("-j,--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);

    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--only", only, "Criterion ids to run")->delimiter(',')->check(CLI::Range(1, kCriterionCount));

    std::vector<std::string> traces;
    std::string grid_text;
    auto* report = app.add_subcommand("report", "Complexity tables from stored traces");
    report->add_option("traces", traces, "Trace CSV files (sidecars are found next to them)")->required();
    report->add_option("--alpha", grid_text, "Comma-separated accuracy grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; usage errors are config errors.
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        if (simd == "scalar") simd::set_backend(simd::Backend::Scalar);
        if (simd == "avx2") simd::set_backend(simd::Backend::Avx2);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }

    try {
        if (*run) {
            ExperimentConfig cfg = load_config(run_cfg);
            if (!run_out.empty()) cfg.output = run_out;
            print_summary(run_experiment(cfg));
        } else if (*sweep) {
            std::ifstream in(sweep_cfg);
            if (!in) throw ConfigError("cannot open config " + sweep_cfg);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(sweep_cfg + ": " + e.what());
            }
            for (const auto& r : run_sweep(expand_sweep(j), threads)) print_summary(r);
        } else if (*verify) {
            if (only.empty()) {
                for (int id = 1; id <= kCriterionCount; ++id) only.push_back(id);
            }
            bool all = true;
            for (int id : only) {
                const CriterionResult r = run_criterion(id);
                std::cout << format_result(r) << std::endl;
                all = all && r.passed;
            }
            return all ? kOk : kAcceptance;
        } else if (*report) {
            const std::vector<double> grid = grid_text.empty() ? kDefaultAlphaGrid : parse_grid(grid_text);
            for (const auto& path : traces) {
                const StoredTrace st = read_trace(path);
                std::cout << "## " << path << " (" << st.trace.method << ")\n"
                          << format_report(report_from_trace(st, grid));
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const RunawayError& e) {
        std::cerr << "solver runaway: " << e.what() << '\n';
        return kSolver;
    } catch (const LineSearchFailure& e) {
        std::cerr << "line-search failure: " << e.what() << '\n';
        return kSolver;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolver;
    }
    return kOk;
}
