#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "regopt/solvers.hpp"

namespace regopt::bench {

inline constexpr std::string_view kTraceCsvHeader = "l,epsilon_l,delta_l,N_l,delta_wl,dist_xstar,cum_inner";

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
// Throws ContractError unless the whole string is one number.
double parse_double(std::string_view s);

// Constants reported alongside a trace; absent entries do not apply to the method.
struct TraceConstants {
    std::optional<double> beta, theta, nu, sigma, gamma, Lprime, C1, C2;

    friend bool operator==(const TraceConstants&, const TraceConstants&) = default;
};

struct StoredTrace {
    SolverTrace trace;
    nlohmann::json config;
    TraceConstants constants;
};

std::string trace_csv(const SolverTrace& trace);
nlohmann::json trace_sidecar(const SolverTrace& trace, const nlohmann::json& config, const TraceConstants& constants);

// The sidecar sits next to the CSV with the extension replaced by ".json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Creates parent directories as needed.
void write_trace(const std::filesystem::path& csv_path, const SolverTrace& trace, const nlohmann::json& config,
                 const TraceConstants& constants);

// Inverse of write_trace; every numeric field comes back bit-exact.
StoredTrace read_trace(const std::filesystem::path& csv_path);

}  // namespace regopt::bench
