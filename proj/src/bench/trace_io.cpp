#include "regopt/bench/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace regopt::bench {

using nlohmann::json;

namespace {

template <class Int>
Int parse_int(std::string_view s, const char* what) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ContractError(std::string("trace: bad integer in column ") + what + ": '" + std::string(s) + "'");
    }
    return v;
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> opt_parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json vector_json(const Vector& v) { return json(v.values()); }

Vector json_vector(const json& j) { return Vector(j.get<std::vector<double>>()); }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ContractError("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw ContractError("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ContractError("parse_double: not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::string trace_csv(const SolverTrace& trace) {
    std::string out(kTraceCsvHeader);
    out += '\n';
    for (const auto& r : trace.outer_records) {
        out += std::to_string(r.l);
        out += ',' + opt_field(r.epsilon_l);
        out += ',' + opt_field(r.delta_l);
        out += ',' + std::to_string(r.N_l);
        out += ',' + opt_field(r.delta_wl);
        out += ',' + opt_field(r.dist_xstar);
        out += ',' + std::to_string(r.cum_inner);
        out += '\n';
    }
    return out;
}

json trace_sidecar(const SolverTrace& trace, const json& config, const TraceConstants& c) {
    json j;
    j["method"] = trace.method;
    j["config"] = config;
    j["constants"] = {{"beta", opt_json(c.beta)},   {"theta", opt_json(c.theta)}, {"nu", opt_json(c.nu)},
                      {"sigma", opt_json(c.sigma)}, {"gamma", opt_json(c.gamma)}, {"Lprime", opt_json(c.Lprime)},
                      {"C1", opt_json(c.C1)},       {"C2", opt_json(c.C2)}};
    const auto& k = trace.counters;
    j["counters"] = {{"gradient_evals", k.gradient_evals}, {"value_evals", k.value_evals},
                     {"projections", k.projections},       {"lmo_calls", k.lmo_calls},
                     {"linesearch_trials", k.linesearch_trials}, {"inner_iterations", k.inner_iterations}};
    const bool finite = trace.min_observed_lambda < std::numeric_limits<double>::infinity();
    j["min_observed_lambda"] = finite ? json(trace.min_observed_lambda) : json(nullptr);
    j["stopped_at_stationary_point"] = trace.stopped_at_stationary_point;
    j["final_point"] = vector_json(trace.final_point);
    j["gap_history"] = trace.gap_history;
    json recs = json::array();
    for (const auto& r : trace.outer_records) {
        recs.push_back({{"w_l", vector_json(r.w_l)},
                        {"f_value", r.f_value},
                        {"phi_gap", opt_json(r.phi_gap)},
                        {"dist_z", opt_json(r.dist_z)}});
    }
    j["records"] = std::move(recs);
    return j;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_trace(const std::filesystem::path& csv_path, const SolverTrace& trace, const json& config,
                 const TraceConstants& constants) {
    if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ContractError("cannot write " + csv_path.string());
        out << trace_csv(trace);
    }
    std::ofstream out(sidecar_path(csv_path), std::ios::binary);
    if (!out) throw ContractError("cannot write " + sidecar_path(csv_path).string());
    out << trace_sidecar(trace, config, constants).dump(2) << '\n';
}

StoredTrace read_trace(const std::filesystem::path& csv_path) {
    StoredTrace st;
    const json j = json::parse(read_file(sidecar_path(csv_path)));
    st.trace.method = j.at("method").get<std::string>();
    st.config = j.at("config");
    const json& c = j.at("constants");
    st.constants = {json_opt(c, "beta"),  json_opt(c, "theta"),  json_opt(c, "nu"), json_opt(c, "sigma"),
                    json_opt(c, "gamma"), json_opt(c, "Lprime"), json_opt(c, "C1"), json_opt(c, "C2")};
    const json& k = j.at("counters");
    auto& ct = st.trace.counters;
    ct.gradient_evals = k.at("gradient_evals").get<std::uint64_t>();
    ct.value_evals = k.at("value_evals").get<std::uint64_t>();
    ct.projections = k.at("projections").get<std::uint64_t>();
    ct.lmo_calls = k.at("lmo_calls").get<std::uint64_t>();
    ct.linesearch_trials = k.at("linesearch_trials").get<std::uint64_t>();
    ct.inner_iterations = k.at("inner_iterations").get<std::uint64_t>();
    st.trace.min_observed_lambda =
        json_opt(j, "min_observed_lambda").value_or(std::numeric_limits<double>::infinity());
    st.trace.stopped_at_stationary_point = j.at("stopped_at_stationary_point").get<bool>();
    st.trace.final_point = json_vector(j.at("final_point"));
    st.trace.gap_history = j.at("gap_history").get<std::vector<double>>();

    const std::string csv = read_file(csv_path);
    std::istringstream lines(csv);
    std::string line;
    if (!std::getline(lines, line) || line != kTraceCsvHeader) {
        throw ContractError("trace: unexpected CSV header in " + csv_path.string());
    }
    const json& recs = j.at("records");
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw ContractError("trace: expected 7 columns, got " + std::to_string(f.size()));
        if (i >= recs.size()) throw ContractError("trace: CSV has more rows than the sidecar");
        OuterRecord r;
        r.l = parse_int<std::int64_t>(f[0], "l");
        r.epsilon_l = opt_parse(f[1]);
        r.delta_l = opt_parse(f[2]);
        r.N_l = parse_int<std::uint64_t>(f[3], "N_l");
        r.delta_wl = opt_parse(f[4]);
        r.dist_xstar = opt_parse(f[5]);
        r.cum_inner = parse_int<std::uint64_t>(f[6], "cum_inner");
        const json& s = recs.at(i++);
        r.w_l = json_vector(s.at("w_l"));
        r.f_value = s.at("f_value").get<double>();
        r.phi_gap = json_opt(s, "phi_gap");
        r.dist_z = json_opt(s, "dist_z");
        st.trace.outer_records.push_back(std::move(r));
    }
    if (i != recs.size()) throw ContractError("trace: sidecar has more records than the CSV");
    return st;
}

}  // namespace regopt::bench
