#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "regopt/bench/experiment.hpp"
#include "regopt/oracles.hpp"

using namespace regopt;
using namespace regopt::bench;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("regopt_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Brute-force minimal-norm point over a grid of the solution set of 0.5(x1 - x2)^2 on the 3d simplex.
Vector grid_min_norm_simplex(int steps) {
    Vector best;
    double best_n = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j) {
            const Vector q{double(i) / steps, double(j) / steps, double(steps - i - j) / steps};
            if (std::abs(q[0] - q[1]) > 1e-12) continue;
            if (norm(q) < best_n) best_n = norm(q), best = q;
        }
    return best;
}

SolverTrace synthetic_trace(const std::vector<double>& deltas, const std::vector<std::uint64_t>& n) {
    SolverTrace t;
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        OuterRecord r;
        r.l = static_cast<std::int64_t>(i + 1);
        r.N_l = n[i];
        cum += n[i];
        r.cum_inner = cum;
        r.f_value = deltas[i];
        r.delta_wl = deltas[i];
        t.outer_records.push_back(r);
    }
    return t;
}

}  // namespace

TEST_CASE("make_illposed_box") {
    const auto g2 = make_illposed_box(2);
    CHECK(g2.analytic_xstar_n == Vector{0.5, 0.5});
    CHECK(g2.analytic_L == 2.0);
    const Vector other{1.0, 0.0};
    CHECK(g2.problem.objective.value(other) == 0.0);
    CHECK(g2.problem.set.contains(other, kMembershipTol));
    CHECK(norm(other) > norm(g2.analytic_xstar_n));
    const auto g3 = make_illposed_box(3);
    CHECK(distance(g3.analytic_xstar_n, Vector{1.0 / 3, 1.0 / 3, 1.0 / 3}) < 1e-15);
    CHECK(g3.analytic_L == 3.0);
    CHECK_THROWS_AS(make_illposed_box(1), ContractError);
}

TEST_CASE("make_illposed_simplex") {
    const auto g = make_illposed_simplex(3);
    CHECK(distance(g.analytic_xstar_n, Vector{1.0 / 3, 1.0 / 3, 1.0 / 3}) < 1e-15);
    CHECK(distance(g.analytic_xstar_n, grid_min_norm_simplex(300)) < 1e-2);
    CHECK(g.problem.objective.value(Vector{0.0, 0.0, 1.0}) == 0.0);
    CHECK(g.problem.objective.value(g.analytic_xstar_n) == 0.0);
    CHECK_THROWS_AS(make_illposed_simplex(2), ContractError);
}

TEST_CASE("make_rankdef_lsq examples") {
    SUBCASE("reduces to the ill-posed box") {
        const auto g = make_rankdef_lsq(Matrix{{1.0, 1.0}, {0.0, 0.0}}, Vector{1.0, 0.0},
                                        make_feasible_set(BoxSet::uniform(2, -1.0, 1.0)));
        CHECK(distance(g.analytic_xstar_n, Vector{0.5, 0.5}) < 1e-8);
        CHECK(g.analytic_L == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(g.analytic_fstar) < 1e-12);
    }
    SUBCASE("well-posed special case") {
        const auto g = make_rankdef_lsq(Matrix::identity(2), Vector{0.3, 0.4},
                                        make_feasible_set(BoxSet::uniform(2, -1.0, 1.0)));
        CHECK(distance(g.analytic_xstar_n, Vector{0.3, 0.4}) < 1e-8);
    }
    SUBCASE("reduces to the ill-posed simplex") {
        const auto g = make_rankdef_lsq(Matrix{{1.0, -1.0, 0.0}, {0.0, 0.0, 0.0}}, Vector{0.0, 0.0},
                                        make_feasible_set(SimplexSet(3)));
        CHECK(distance(g.analytic_xstar_n, Vector{1.0 / 3, 1.0 / 3, 1.0 / 3}) < 1e-8);
    }
    SUBCASE("random instances satisfy the problem invariants") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto g = make_random_rankdef(6, 8, 3, seed);
            CHECK(g.problem.set.contains(g.analytic_xstar_n, kMembershipTol));
            CHECK(std::abs(g.problem.objective.value(g.analytic_xstar_n) - g.analytic_fstar) <= 1e-10);
            // x*_n must agree with the Tikhonov path at small epsilon.
            const TikhonovRecord z = tikhonov_solve(g.problem, 1e-3, 1e-11);
            CHECK(distance(z.z, g.analytic_xstar_n) < 5e-2);
        }
    }
    SUBCASE("shape errors") {
        CHECK_THROWS_AS(make_rankdef_lsq(Matrix(2, 3), Vector{0.0, 0.0}, make_feasible_set(SimplexSet(2))),
                        ContractError);
        CHECK_THROWS_AS(make_random_rankdef(3, 3, 4, 0), ContractError);
    }
}

TEST_CASE("well-posed generators") {
    const auto b = make_wellposed_box(10);
    CHECK(b.problem.objective.value(b.analytic_xstar_n) == 0.0);
    CHECK(b.problem.set.contains(b.default_start, kMembershipTol));
    const auto s = make_wellposed_simplex(3);
    CHECK(s.analytic_xstar_n == Vector{0.7, 0.3, 0.0});
    CHECK(s.analytic_fstar == doctest::Approx(0.02));
    // The minimizer is the projection of p onto the simplex.
    CHECK(distance(project_simplex(Vector{0.7, 0.3, -0.2}, SimplexSet(3)), s.analytic_xstar_n) < 1e-15);
}

TEST_CASE("make_problem parses labels") {
    CHECK(make_problem("illposed_box(4)").problem.dimension() == 4);
    CHECK(make_problem(" rankdef( 5, 4, 2 ) ", 9).problem.dimension() == 4);
    CHECK_THROWS_AS(make_problem("illposed_box"), ContractError);
    CHECK_THROWS_AS(make_problem("nope(2)"), ContractError);
    CHECK_THROWS_AS(make_problem("rankdef(2,2)"), ContractError);
}

TEST_CASE("theoretical_bound examples") {
    MethodConstants mc;
    mc.beta = 0.5;
    mc.gamma = 1.0 / 6.0;
    mc.Lprime = 3.0;
    const GeometricSchedule s(1.0, 0.5, 0.5);
    const double xn = std::sqrt(0.5);
    const BoundConstants b = bound_constants(Method::Gprm, s, mc, xn);
    CHECK(b.C1 == doctest::Approx(2.0 * 16.0 + 0.25));
    CHECK(b.C2 == doctest::Approx(b.C1 / (0.5 / 6.0)));
    CHECK(theoretical_bound(Method::Gprm, s, mc, xn, b.C1) == 0.0);
    CHECK(theoretical_bound(Method::Gprm, s, mc, xn, 2.0 * b.C1) == 0.0);
    CHECK(theoretical_bound(Method::Gprm, s, mc, xn, b.C1 / 2.0) == doctest::Approx(8.0 * b.C2));

    const GeometricSchedule s1(1.0, 0.5, 1.0);
    const BoundConstants c = bound_constants(Method::Cgrm, s1, mc, std::sqrt(1.0 / 3.0));
    CHECK(c.C1 == doctest::Approx(7.0 / 6.0));
    CHECK_THROWS_AS(bound_constants(Method::Gpm, s, mc, xn), ContractError);
    CHECK_THROWS_AS(theoretical_bound(Method::Gprm, s, mc, xn, 0.0), ContractError);
}

TEST_CASE("measure_complexity on a synthetic trace") {
    const SolverTrace t = synthetic_trace({0.5, 0.1, 0.01}, {3, 4, 5});
    const ComplexityReport r = measure_complexity(t, 0.0, {1.0, 0.05, 0.005});
    REQUIRE(r.measured_N.size() == 3);
    CHECK(r.measured_N[0] == std::uint64_t{0});
    CHECK(r.measured_N[1] == std::uint64_t{7});
    CHECK_FALSE(r.measured_N[2].has_value());
    CHECK(r.fit_points == 1);
    CHECK(std::isnan(r.fitted_exponent));
    CHECK_FALSE(measure_complexity(SolverTrace{}, 0.0, {0.1}).measured_N[0].has_value());
    CHECK_THROWS_AS(measure_complexity(t, 0.0, {0.1, -1.0}), ContractError);
}

TEST_CASE("measured N is non-decreasing as alpha decreases") {
    const auto g = make_illposed_box(2);
    const GeometricSchedule s(1.0, 0.5, 1.0);
    StopPolicy stop;
    stop.epsilon_min = 1e-4;
    const SolverTrace t = run_gprm(g.problem, s, gprm_constants(g.problem, s, 0.5, 0.5), g.default_start, stop);
    std::vector<double> grid;
    for (int i = 2; i <= 20; ++i) grid.push_back(std::pow(10.0, -0.5 * i));
    const ComplexityReport r = measure_complexity(t, 0.0, grid);
    std::uint64_t prev = 0;
    for (const auto& n : r.measured_N) {
        if (!n) continue;
        CHECK(*n >= prev);
        prev = *n;
    }
    CHECK(r.fit_points >= 4);
}

TEST_CASE("fit_slope recovers an exact power law") {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
        x.push_back(i * 0.7);
        y.push_back(1.5 * i * 0.7 + 2.0);
    }
    CHECK(fit_slope(x, y) == doctest::Approx(1.5));
    CHECK(std::isnan(fit_slope({1.0}, {1.0})));
}

TEST_CASE("format_double round-trips and is short") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        CHECK(same_bits(parse_double(format_double(v)), v));
    }
    CHECK_THROWS_AS(parse_double("1.5x"), ContractError);
    CHECK_THROWS_AS(parse_double(""), ContractError);
}

TEST_CASE("trace serialization is lossless") {
    const auto dir = scratch_dir("roundtrip");
    ExperimentConfig cfg;
    cfg.problem_label = "rankdef(6,4,2)";
    cfg.method = Method::Cgrm;
    cfg.stop.epsilon_min = 1e-2;
    cfg.oracle_distances = true;
    cfg.seed = 4;
    cfg.output = (dir / "cgrm.csv").string();
    const ExperimentResult res = run_experiment(cfg);
    const StoredTrace st = read_trace(cfg.output);
    CHECK(st.trace == res.trace);
    CHECK(st.constants == res.constants);
    CHECK(config_from_json(st.config).problem_label == cfg.problem_label);
    for (std::size_t i = 0; i < st.trace.outer_records.size(); ++i) {
        const auto& a = st.trace.outer_records[i];
        const auto& b = res.trace.outer_records[i];
        CHECK(same_bits(*a.epsilon_l, *b.epsilon_l));
        CHECK(same_bits(*a.dist_xstar, *b.dist_xstar));
        CHECK(same_bits(*a.phi_gap, *b.phi_gap));
    }

    std::ifstream csv(cfg.output);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "l,epsilon_l,delta_l,N_l,delta_wl,dist_xstar,cum_inner");
    std::ifstream side(sidecar_path(cfg.output));
    const json j = json::parse(side);
    for (const char* k : {"beta", "theta", "nu", "sigma", "gamma", "Lprime", "C1", "C2"}) {
        CHECK(j["constants"].contains(k));
        CHECK(j["constants"][k].is_number());
    }
    CHECK(j["counters"]["inner_iterations"].get<std::uint64_t>() == res.trace.counters.inner_iterations);
}

TEST_CASE("single-level traces leave unavailable fields empty") {
    const auto dir = scratch_dir("gpm");
    ExperimentConfig cfg;
    cfg.method = Method::Gpm;
    cfg.x0 = Vector{1.0, 0.0};
    cfg.stop.max_iter = 50;
    cfg.output = (dir / "gpm.csv").string();
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.trace.final_point == Vector{1.0, 0.0});
    CHECK(*res.trace.outer_records.back().dist_xstar == doctest::Approx(std::sqrt(0.5)));
    std::ifstream csv(cfg.output);
    std::string line;
    std::getline(csv, line);
    std::getline(csv, line);
    CHECK(line == "0,,,0,0,0.7071067811865476,0");
    CHECK(read_trace(cfg.output).trace == res.trace);
}

TEST_CASE("run_experiment examples") {
    ExperimentConfig cfg;
    cfg.stop.epsilon_min = 1e-4;
    cfg.x0 = Vector{1.0, 0.0};
    const ExperimentResult r = run_experiment(cfg);
    CHECK(*r.trace.outer_records.back().dist_xstar < 5e-2);
    // Deterministic for a fixed config.
    CHECK(run_experiment(cfg).trace == r.trace);
}

TEST_CASE("config validation") {
    auto reject = [](const json& j, const std::string& field) {
        CAPTURE(j.dump());
        try {
            config_from_json(j);
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).rfind(field, 0) == 0);
        }
    };
    reject({{"schedule", {{"nu", 1.2}}}}, "schedule.nu");
    reject({{"schedule", {{"sigma", 0.0}}}}, "schedule.sigma");
    reject({{"schedule", {{"sigma", 1.5}}}}, "schedule.sigma");
    reject({{"schedule", {{"epsilon0", -1.0}}}}, "schedule.epsilon0");
    reject({{"schedule", {{"tau", 0.5}}}}, "schedule.tau");
    reject({{"constants", {{"beta", 1.0}}}}, "constants.beta");
    reject({{"method", "newton"}}, "method");
    reject({{"stop", {{"max_outer", 0}}}}, "stop.max_outer");
    reject({{"stop", {{"bogus", 1}}}}, "stop.bogus");
    reject({{"colour", "red"}}, "colour");
    reject({{"x0", "origin"}}, "x0");

    CHECK(config_from_json(json::object()).method == Method::Gprm);
    const ExperimentConfig sigma1 = config_from_json({{"schedule", {{"sigma", 1}}}});
    CHECK(sigma1.schedule.sigma == 1.0);

    ExperimentConfig gpm;
    gpm.method = Method::Gpm;
    gpm.schedule.lambda = 1.0;  // L = 2, so 2/L = 1
    CHECK_THROWS_AS(run_experiment(gpm), ConfigError);
    ExperimentConfig cgm;
    cgm.method = Method::Cgm;
    cgm.schedule.theta_k = 2.5;
    cgm.problem_label = "wellposed_simplex(3)";
    CHECK_THROWS_AS(run_experiment(cgm), ConfigError);
    ExperimentConfig bad_x0;
    bad_x0.x0 = Vector{2.0, 0.0};
    CHECK_THROWS_AS(run_experiment(bad_x0), ConfigError);
    ExperimentConfig bad_label;
    bad_label.problem_label = "illposed_box(1)";
    CHECK_THROWS_AS(run_experiment(bad_label), ConfigError);
}

TEST_CASE("config json round trip") {
    ExperimentConfig c;
    c.problem_label = "illposed_simplex(4)";
    c.method = Method::Cgrm;
    c.schedule.sigma = 0.25;
    c.schedule.theta_k = 0.3;
    c.stop.max_outer = 12;
    c.x0 = Vector{0.25, 0.25, 0.25, 0.25};
    c.seed = 77;
    const ExperimentConfig d = config_from_json(config_to_json(c));
    CHECK(config_to_json(d) == config_to_json(c));
}

TEST_CASE("sweep expansion and concurrent runs") {
    const auto dir = scratch_dir("sweep");
    const json j = {{"problem_label", "illposed_box(2)"},
                    {"stop", {{"epsilon_min", 1e-3}}},
                    {"output", (dir / "run.csv").string()},
                    {"sweep", {{"schedule.sigma", {1.0, 0.5, 0.25}}, {"method", {"gprm", "cgrm"}}}}};
    const auto cfgs = expand_sweep(j);
    REQUIRE(cfgs.size() == 6);
    std::set<std::string> outputs;
    for (const auto& c : cfgs) outputs.insert(c.output);
    CHECK(outputs.size() == 6);
    const auto results = run_sweep(cfgs, 4);
    REQUIRE(results.size() == 6);
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        CHECK(std::filesystem::exists(cfgs[i].output));
        // Concurrent results equal a sequential rerun.
        ExperimentConfig seq = cfgs[i];
        seq.output.clear();
        CHECK(run_experiment(seq).trace == results[i].trace);
    }
    CHECK_THROWS_AS(expand_sweep({{"sweep", {{"schedule.nu", {0.5, 1.5}}}}}), ConfigError);
    CHECK(expand_sweep(json::object()).size() == 1);
}

TEST_CASE("report from a stored trace") {
    const auto dir = scratch_dir("report");
    ExperimentConfig cfg;
    cfg.stop.epsilon_min = 1e-4;
    cfg.output = (dir / "gprm.csv").string();
    run_experiment(cfg);
    const ComplexityReport r = report_from_trace(read_trace(cfg.output), kDefaultAlphaGrid);
    REQUIRE(r.C1.has_value());
    for (std::size_t i = 0; i < r.alpha_grid.size(); ++i) {
        if (r.measured_N[i]) CHECK(static_cast<double>(*r.measured_N[i]) <= *r.bound_N[i]);
    }
    const std::string text = format_report(r);
    CHECK(text.rfind("alpha,measured_N,bound_N\n", 0) == 0);
}
