#include "regopt/bench/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace regopt::bench {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(prefix.empty() ? "config" : prefix, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.count(key)) fail(prefix.empty() ? key : prefix + "." + key, "unknown field");
    }
}

double get_real(const json& j, const char* key, const std::string& field, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) fail(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(field, "must be finite");
    return d;
}

std::uint64_t get_count(const json& j, const char* key, const std::string& field, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) fail(field, "expected a positive integer");
    return v.get<std::uint64_t>();
}

void require_open_unit(double v, const std::string& field) {
    if (!(v > 0.0 && v < 1.0)) fail(field, "must lie in (0,1), got " + format_double(v));
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string sweep_tag(const std::string& dotted, const json& value) {
    const auto dot = dotted.rfind('.');
    std::string tag = dot == std::string::npos ? dotted : dotted.substr(dot + 1);
    std::string v = value.is_string() ? value.get<std::string>()
                    : value.is_number_float() ? format_double(value.get<double>())
                                              : value.dump();
    for (char& c : v) {
        if (c == '(' || c == ')' || c == ',' || c == ' ' || c == '/' || c == '"') c = '_';
    }
    return tag + "-" + v;
}

}  // namespace

StopPolicy ExperimentConfig::stop_policy() const {
    StopPolicy p;
    p.epsilon_min = stop.epsilon_min;
    p.max_outer = stop.max_outer;
    p.max_inner_per_l = stop.max_inner_per_l;
    p.max_linesearch_m = stop.max_linesearch_m;
    return p;
}

ExperimentConfig config_from_json(const json& j) {
    reject_unknown(j, "", {"problem_label", "method", "schedule", "constants", "stop", "x0", "seed", "output",
                           "oracle_distances"});
    ExperimentConfig c;
    if (j.contains("problem_label")) {
        if (!j["problem_label"].is_string()) fail("problem_label", "expected a string");
        c.problem_label = j["problem_label"].get<std::string>();
    }
    if (j.contains("method")) {
        if (!j["method"].is_string()) fail("method", "expected a string");
        try {
            c.method = parse_method(j["method"].get<std::string>());
        } catch (const ContractError&) {
            fail("method", "must be one of gpm, cgm, iterreg, gprm, cgrm");
        }
    }

    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        reject_unknown(s, "schedule", {"epsilon0", "nu", "sigma", "tau", "lambda", "theta_k"});
        auto& sc = c.schedule;
        sc.epsilon0 = get_real(s, "epsilon0", "schedule.epsilon0", sc.epsilon0);
        sc.nu = get_real(s, "nu", "schedule.nu", sc.nu);
        sc.sigma = get_real(s, "sigma", "schedule.sigma", sc.sigma);
        sc.tau = get_real(s, "tau", "schedule.tau", sc.tau);
        if (s.contains("lambda") && !s["lambda"].is_null()) sc.lambda = get_real(s, "lambda", "schedule.lambda", 0);
        if (s.contains("theta_k") && !s["theta_k"].is_null()) {
            sc.theta_k = get_real(s, "theta_k", "schedule.theta_k", 0);
        }
    }
    const auto& sc = c.schedule;
    if (!(sc.epsilon0 > 0.0)) fail("schedule.epsilon0", "must be positive");
    require_open_unit(sc.nu, "schedule.nu");
    if (!(sc.sigma > 0.0 && sc.sigma <= 1.0)) fail("schedule.sigma", "must lie in (0,1], got " + format_double(sc.sigma));
    if (!(sc.tau > 0.0 && sc.tau < 0.5)) fail("schedule.tau", "must lie in (0,0.5), got " + format_double(sc.tau));
    if (sc.lambda && !(*sc.lambda > 0.0)) fail("schedule.lambda", "must be positive");
    if (sc.theta_k && !(*sc.theta_k > 0.0)) fail("schedule.theta_k", "must be positive");

    if (j.contains("constants")) {
        const json& k = j["constants"];
        reject_unknown(k, "constants", {"beta", "theta"});
        c.constants.beta = get_real(k, "beta", "constants.beta", c.constants.beta);
        c.constants.theta = get_real(k, "theta", "constants.theta", c.constants.theta);
    }
    require_open_unit(c.constants.beta, "constants.beta");
    require_open_unit(c.constants.theta, "constants.theta");

    if (j.contains("stop")) {
        const json& s = j["stop"];
        reject_unknown(s, "stop", {"epsilon_min", "max_outer", "max_inner_per_l", "max_linesearch_m", "max_iter"});
        auto& st = c.stop;
        st.epsilon_min = get_real(s, "epsilon_min", "stop.epsilon_min", st.epsilon_min);
        st.max_outer = static_cast<std::int64_t>(get_count(s, "max_outer", "stop.max_outer",
                                                           static_cast<std::uint64_t>(st.max_outer)));
        st.max_inner_per_l = get_count(s, "max_inner_per_l", "stop.max_inner_per_l", st.max_inner_per_l);
        st.max_linesearch_m = static_cast<int>(get_count(s, "max_linesearch_m", "stop.max_linesearch_m",
                                                         static_cast<std::uint64_t>(st.max_linesearch_m)));
        st.max_iter = get_count(s, "max_iter", "stop.max_iter", st.max_iter);
    }
    if (!(c.stop.epsilon_min > 0.0)) fail("stop.epsilon_min", "must be positive");

    if (j.contains("x0") && !j["x0"].is_null()) {
        const json& x = j["x0"];
        if (!x.is_array() || x.empty()) fail("x0", "expected a non-empty array of numbers");
        std::vector<double> v;
        for (const auto& e : x) {
            if (!e.is_number()) fail("x0", "expected a non-empty array of numbers");
            v.push_back(e.get<double>());
        }
        c.x0 = Vector(std::move(v));
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
            fail("seed", "expected a non-negative integer");
        }
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) fail("output", "expected a string");
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("oracle_distances")) {
        if (!j["oracle_distances"].is_boolean()) fail("oracle_distances", "expected true or false");
        c.oracle_distances = j["oracle_distances"].get<bool>();
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["problem_label"] = c.problem_label;
    j["method"] = std::string(method_name(c.method));
    j["schedule"] = {{"epsilon0", c.schedule.epsilon0}, {"nu", c.schedule.nu},
                     {"sigma", c.schedule.sigma},       {"tau", c.schedule.tau},
                     {"lambda", opt_number(c.schedule.lambda)}, {"theta_k", opt_number(c.schedule.theta_k)}};
    j["constants"] = {{"beta", c.constants.beta}, {"theta", c.constants.theta}};
    j["stop"] = {{"epsilon_min", c.stop.epsilon_min},
                 {"max_outer", c.stop.max_outer},
                 {"max_inner_per_l", c.stop.max_inner_per_l},
                 {"max_linesearch_m", c.stop.max_linesearch_m},
                 {"max_iter", c.stop.max_iter}};
    j["x0"] = c.x0 ? json(c.x0->values()) : json(nullptr);
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["oracle_distances"] = c.oracle_distances;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const ExperimentConfig& cfg, const GeneratedProblem& gen) {
    const Problem& p = gen.problem;
    const double L = p.objective.lipschitz;
    if (cfg.x0) {
        if (cfg.x0->size() != p.dimension()) {
            fail("x0", "has " + std::to_string(cfg.x0->size()) + " entries, problem dimension is " +
                           std::to_string(p.dimension()));
        }
        if (!p.set.contains(*cfg.x0, kMembershipTol)) fail("x0", "is not in the feasible set");
    }
    if (cfg.schedule.lambda && L > 0.0 && !(*cfg.schedule.lambda < 2.0 / L)) {
        fail("schedule.lambda", "must be below 2/L = " + format_double(2.0 / L));
    }
    if (cfg.schedule.theta_k && L > 0.0 && !(*cfg.schedule.theta_k < 2.0 / L)) {
        fail("schedule.theta_k", "must be below 2/L = " + format_double(2.0 / L));
    }
    const bool needs_lmo = cfg.method == Method::Cgm || cfg.method == Method::Cgrm;
    if (needs_lmo && !(p.set.has_lmo() && p.set.is_bounded())) {
        fail("method", "conditional-gradient methods need a bounded set with a linear minimization oracle");
    }
    if (!needs_lmo && !p.set.has_projection()) fail("method", "projection methods need a projection oracle");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.config = cfg;
    try {
        res.generated = make_problem(cfg.problem_label, cfg.seed);
    } catch (const ContractError& e) {
        fail("problem_label", e.what());
    }
    validate_config(cfg, res.generated);

    const Problem& prob = res.generated.problem;
    const Vector x0 = cfg.x0 ? *cfg.x0 : res.generated.default_start;
    const double L = prob.objective.lipschitz;
    const double inv_L = L > 0.0 ? 1.0 / L : 1.0;
    TraceConstants& tc = res.constants;

    switch (cfg.method) {
        case Method::Gpm:
            res.trace = run_gpm(prob, cfg.schedule.lambda.value_or(inv_L), x0, cfg.stop.max_iter);
            break;
        case Method::Cgm:
            res.trace = run_cgm(prob, cfg.schedule.theta_k.value_or(inv_L), x0, cfg.stop.max_iter);
            break;
        case Method::IterReg:
            res.trace = run_iterreg(prob, IterRegSchedule(cfg.schedule.tau), x0, cfg.stop.max_iter);
            break;
        case Method::Gprm:
        case Method::Cgrm: {
            const GeometricSchedule sched = cfg.geometric();
            const MethodConstants mc =
                cfg.method == Method::Gprm
                    ? gprm_constants(prob, sched, cfg.constants.beta, cfg.constants.theta)
                    : cgrm_constants(prob, sched, cfg.constants.beta, cfg.constants.theta, x0);
            res.method_constants = mc;
            tc.beta = mc.beta;
            tc.theta = mc.theta;
            tc.nu = sched.nu;
            tc.sigma = sched.sigma;
            tc.gamma = mc.gamma;
            tc.Lprime = mc.Lprime;
            if (prob.known_xstar_n) {
                const BoundConstants b = bound_constants(cfg.method, sched, mc, norm(*prob.known_xstar_n));
                tc.C1 = b.C1;
                tc.C2 = b.C2;
            }
            res.trace = cfg.method == Method::Gprm ? run_gprm(prob, sched, mc, x0, cfg.stop_policy())
                                                   : run_cgrm(prob, sched, mc, x0, cfg.stop_policy());
            if (cfg.oracle_distances) attach_oracle_distances(res.trace, prob);
            break;
        }
    }
    if (!cfg.output.empty()) write_trace(cfg.output, res.trace, config_to_json(cfg), tc);
    return res;
}

std::vector<ExperimentConfig> expand_sweep(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected an object");
    json base = j;
    json axes = json::object();
    if (base.contains("sweep")) {
        axes = base["sweep"];
        base.erase("sweep");
        if (!axes.is_object()) fail("sweep", "expected an object of field lists");
    }
    std::vector<std::pair<std::string, json>> dims;
    for (const auto& [key, values] : axes.items()) {
        if (!values.is_array() || values.empty()) fail("sweep." + key, "expected a non-empty list");
        dims.emplace_back(key, values);
    }

    std::vector<ExperimentConfig> out;
    std::vector<std::size_t> idx(dims.size(), 0);
    const std::filesystem::path base_out = base.value("output", std::string());
    for (;;) {
        json cfg = base;
        std::string suffix;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            const std::string& key = dims[d].first;
            const json& v = dims[d].second[idx[d]];
            json* node = &cfg;
            std::stringstream ss(key);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(ss, part, '.')) parts.push_back(part);
            for (std::size_t p = 0; p + 1 < parts.size(); ++p) node = &(*node)[parts[p]];
            (*node)[parts.back()] = v;
            suffix += "_" + sweep_tag(key, v);
        }
        if (!base_out.empty() && !dims.empty()) {
            std::filesystem::path p = base_out;
            const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
            p.replace_filename(p.stem().string() + suffix + ext);
            cfg["output"] = p.string();
        }
        out.push_back(config_from_json(cfg));

        std::size_t d = 0;
        while (d < dims.size() && ++idx[d] == dims[d].second.size()) idx[d++] = 0;
        if (d == dims.size()) break;
    }
    return out;
}

std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads) {
    std::vector<ExperimentResult> results(cfgs.size());
    std::vector<std::exception_ptr> errors(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfgs.size(); i = next++) {
            try {
                results[i] = run_experiment(cfgs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfgs.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

ComplexityReport report_from_trace(const StoredTrace& st, const std::vector<double>& alpha_grid) {
    const ExperimentConfig cfg = config_from_json(st.config);
    const GeneratedProblem gen = make_problem(cfg.problem_label, cfg.seed);
    const Problem& p = gen.problem;
    if (!p.known_fstar) throw ContractError("report: the problem has no known optimal value");
    ComplexityReport r = measure_complexity(st.trace, *p.known_fstar, alpha_grid);
    const auto& c = st.constants;
    if (is_two_level(cfg.method) && p.known_xstar_n && c.beta && c.theta && c.gamma && c.Lprime) {
        MethodConstants mc;
        mc.beta = *c.beta;
        mc.theta = *c.theta;
        mc.gamma = *c.gamma;
        mc.Lprime = *c.Lprime;
        attach_bounds(r, cfg.method, cfg.geometric(), mc, norm(*p.known_xstar_n));
    }
    return r;
}

std::string format_report(const ComplexityReport& r) {
    std::ostringstream os;
    os << "alpha,measured_N,bound_N\n";
    for (std::size_t i = 0; i < r.alpha_grid.size(); ++i) {
        os << format_double(r.alpha_grid[i]) << ',';
        if (r.measured_N[i]) os << *r.measured_N[i];
        os << ',';
        if (i < r.bound_N.size() && r.bound_N[i]) os << format_double(*r.bound_N[i]);
        os << '\n';
    }
    os << "# C1=" << (r.C1 ? format_double(*r.C1) : "n/a") << " C2=" << (r.C2 ? format_double(*r.C2) : "n/a")
       << " fitted_exponent=" << (std::isnan(r.fitted_exponent) ? "n/a" : format_double(r.fitted_exponent))
       << " fit_points=" << r.fit_points << '\n';
    return os.str();
}

}  // namespace regopt::bench
