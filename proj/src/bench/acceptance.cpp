#include "regopt/bench/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "regopt/bench/complexity.hpp"
#include "regopt/bench/generators.hpp"
#include "regopt/bench/trace_io.hpp"
#include "regopt/oracles.hpp"
#include "regopt/regularization.hpp"
#include "regopt/solvers.hpp"

namespace regopt::bench {

namespace {

constexpr double kStrongTol = 5e-2;
constexpr double kAcceptanceEpsMin = 1e-4;
constexpr double kCertificateSlack = 1e-8;
constexpr double kPathSlack = 1e-8;

const std::vector<double> kSigmas{1.0, 0.5, 0.25};
const std::vector<std::string> kIllPosed{"illposed_box(2)", "illposed_simplex(3)"};

struct Run {
    std::string label;
    Method method;
    double sigma;
    GeneratedProblem gen;
    MethodConstants consts;
    SolverTrace trace;
    double seconds = 0.0;
};

std::string describe(const std::string& label, Method m, double sigma) {
    return std::string(method_name(m)) + " " + label + " sigma=" + format_double(sigma);
}

Run two_level_run(const std::string& label, Method method, double sigma, const InnerObserver& observer = {},
                  std::optional<Vector> start = std::nullopt) {
    Run r{label, method, sigma, make_problem(label), {}, {}, 0.0};
    const Problem& p = r.gen.problem;
    const GeometricSchedule sched(1.0, 0.5, sigma);
    StopPolicy stop;
    stop.epsilon_min = kAcceptanceEpsMin;
    const Vector w0 = start.value_or(r.gen.default_start);
    const auto t0 = std::chrono::steady_clock::now();
    r.consts = method == Method::Gprm ? gprm_constants(p, sched, 0.5, 0.5) : cgrm_constants(p, sched, 0.5, 0.5, w0);
    r.trace = method == Method::Gprm ? run_gprm(p, sched, r.consts, w0, stop, observer)
                                     : run_cgrm(p, sched, r.consts, w0, stop, observer);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// The bundled two-level runs: both methods, both ill-posed generators, all sigmas.
const std::vector<Run>& bundled_runs() {
    static const std::vector<Run> runs = [] {
        std::vector<Run> out;
        for (Method m : {Method::Gprm, Method::Cgrm})
            for (const auto& label : kIllPosed)
                for (double s : kSigmas) out.push_back(two_level_run(label, m, s));
        return out;
    }();
    return runs;
}

double final_distance(const SolverTrace& t) {
    if (t.outer_records.empty() || !t.outer_records.back().dist_xstar) return std::nan("");
    return *t.outer_records.back().dist_xstar;
}

CriterionResult strong_convergence(int id, const std::string& label, Method m, Vector start) {
    CriterionResult res{id, "strong convergence (" + std::string(method_name(m)) + ")", false, "", 0.0};
    const Run r = two_level_run(label, m, 0.5, {}, start);
    const double d = final_distance(r.trace);
    res.passed = d < kStrongTol && r.seconds < 1.0;
    std::ostringstream os;
    os << label << " |w - x*| = " << format_double(d) << " (< 5e-2), runtime " << r.seconds << " s (< 1 s)";
    res.detail = os.str();
    return res;
}

CriterionResult c1() { return strong_convergence(1, "illposed_box(2)", Method::Gprm, Vector{1.0, 0.0}); }
CriterionResult c2() { return strong_convergence(2, "illposed_simplex(3)", Method::Cgrm, Vector{1.0, 0.0, 0.0}); }

CriterionResult c3() {
    CriterionResult res{3, "weak/strong contrast", false, "", 0.0};
    const GeneratedProblem g = make_illposed_box(2);
    const SolverTrace gpm = run_gpm(g.problem, 1.0 / g.problem.objective.lipschitz, Vector{1.0, 0.0}, 1000);
    const double d_gpm = final_distance(gpm);
    const CriterionResult strong = c1();
    res.passed = d_gpm >= 0.7 && strong.passed;
    res.detail = "gpm |x - x*| = " + format_double(d_gpm) + " (>= 0.7); gprm " + (strong.passed ? "meets" : "misses") +
                 " criterion 1";
    return res;
}

CriterionResult c4() {
    CriterionResult res{4, "complexity bounds", true, "", 0.0};
    std::size_t checked = 0;
    double worst = 0.0;
    for (const Run& r : bundled_runs()) {
        const Problem& p = r.gen.problem;
        ComplexityReport rep = measure_complexity(r.trace, *p.known_fstar, kDefaultAlphaGrid);
        attach_bounds(rep, r.method, GeometricSchedule(1.0, 0.5, r.sigma), r.consts, norm(*p.known_xstar_n));
        for (std::size_t i = 0; i < rep.alpha_grid.size(); ++i) {
            if (!rep.measured_N[i]) continue;
            ++checked;
            const double n = static_cast<double>(*rep.measured_N[i]);
            const double bound = *rep.bound_N[i];
            if (bound > 0.0) worst = std::max(worst, n / bound);
            if (n > bound) {
                res.passed = false;
                res.detail += describe(r.label, r.method, r.sigma) + " alpha=" + format_double(rep.alpha_grid[i]) +
                              " N=" + format_double(n) + " > " + format_double(bound) + "; ";
            }
        }
    }
    if (res.passed) {
        res.detail = std::to_string(checked) + " attained (run, alpha) pairs, max N/bound = " + format_double(worst);
    }
    return res;
}

CriterionResult c5() {
    CriterionResult res{5, "step lower bounds", true, "", 0.0};
    double worst = std::numeric_limits<double>::infinity();
    for (const Run& r : bundled_runs()) {
        const double ratio = r.trace.min_observed_lambda / r.consts.gamma;
        worst = std::min(worst, ratio);
        if (!(r.trace.min_observed_lambda >= r.consts.gamma)) {
            res.passed = false;
            res.detail += describe(r.label, r.method, r.sigma) + " min lambda " +
                          format_double(r.trace.min_observed_lambda) + " < gamma " + format_double(r.consts.gamma) +
                          "; ";
        }
    }
    if (res.passed) res.detail = "min over runs of (min lambda / gamma) = " + format_double(worst);
    return res;
}

CriterionResult c6() {
    CriterionResult res{6, "inner finiteness", true, "", 0.0};
    std::uint64_t worst = 0;
    std::size_t levels = 0;
    for (const Run& r : bundled_runs()) {
        for (const auto& rec : r.trace.outer_records) {
            ++levels;
            worst = std::max(worst, rec.N_l);
            if (rec.N_l >= 1'000'000) {
                res.passed = false;
                res.detail += describe(r.label, r.method, r.sigma) + " level " + std::to_string(rec.l) + "; ";
            }
        }
    }
    if (res.passed) {
        res.detail = std::to_string(levels) + " completed levels, max N_l = " + std::to_string(worst) + " (< 1e6)";
    }
    return res;
}

// Inner iterates sampled for the certificate checks.
struct Sample {
    double epsilon;
    Vector x;
    Vector y;
    double measure;
};

constexpr double kCertificateMinEps = 1.0 / 256.0;
constexpr std::uint64_t kSamplesPerLevel = 4;

CriterionResult c7() {
    CriterionResult res{7, "sandwich/gap certificates", true, "", 0.0};
    std::ostringstream summary;
    for (Method m : {Method::Gprm, Method::Cgrm}) {
        for (const auto& label : kIllPosed) {
            std::vector<Sample> samples;
            auto observer = [&](const InnerStep& s) {
                if (s.epsilon >= kCertificateMinEps && s.k < kSamplesPerLevel) {
                    samples.push_back({s.epsilon, s.x, s.y, s.stop_measure});
                }
            };
            const Run r = two_level_run(label, m, 0.5, observer);
            const Problem& p = r.gen.problem;
            const double lp1 = r.consts.Lprime + 1.0;
            std::map<double, TikhonovRecord> oracle;
            std::size_t bad = 0;
            for (const Sample& s : samples) {
                auto it = oracle.find(s.epsilon);
                if (it == oracle.end()) it = oracle.emplace(s.epsilon, tikhonov_solve(p, s.epsilon)).first;
                const TikhonovRecord& z = it->second;
                const PerturbedObjective phi(p.objective, s.epsilon, 1.0);
                // GPRM certifies y^k, CGRM certifies x^k.
                const Vector& v = m == Method::Gprm ? s.y : s.x;
                const double gap = phi.value(v) - z.value;
                const double dz = distance(v, z.z);
                const double lower = 0.5 * s.epsilon * dz * dz;
                const double upper = m == Method::Gprm ? lp1 * distance(s.y, s.x) * dz : s.measure;
                if (lower > gap + kCertificateSlack || gap > upper + kCertificateSlack) ++bad;
            }
            const bool ok = bad == 0 && samples.size() >= 10;
            res.passed = res.passed && ok;
            summary << method_name(m) << " " << label << ": " << samples.size() << " samples, " << bad
                    << " violations; ";
        }
    }
    res.detail = summary.str();
    return res;
}

CriterionResult c8() {
    CriterionResult res{8, "Tikhonov path", true, "", 0.0};
    const std::vector<double> grid = geometric_grid(1.0, 0.5, 11);
    std::ostringstream summary;
    for (const auto& label : kIllPosed) {
        const GeneratedProblem g = make_problem(label);
        const Problem& p = g.problem;
        std::vector<TikhonovRecord> recs;
        // The minimal-norm solution closes the path at epsilon = 0.
        TikhonovRecord truth;
        truth.epsilon = 0.0;
        truth.z = *p.known_xstar_n;
        truth.value = *p.known_fstar;
        recs.push_back(truth);
        for (auto it = grid.rbegin(); it != grid.rend(); ++it) recs.push_back(tikhonov_solve(p, *it));

        std::size_t pairs = 0, bad = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < recs.size(); ++i) {
            for (std::size_t j = i + 1; j < recs.size(); ++j) {
                const PathCheckReport rep = path_check(p.objective, recs[i], recs[j], kPathSlack);
                ++pairs;
                if (!rep.all_ok()) ++bad;
                worst = std::max({worst, rep.objective_gap_excess, rep.optimal_value_excess, rep.norm_excess});
            }
        }
        const double end_dist = distance(recs[1].z, *p.known_xstar_n);
        const bool ok = bad == 0 && end_dist < 1e-2;
        res.passed = res.passed && ok;
        summary << label << ": " << pairs << " pairs, " << bad << " violations, max excess " << format_double(worst)
                << ", |z(2^-10) - x*| = " << format_double(end_dist) << "; ";
    }
    res.detail = summary.str();
    return res;
}

struct RateWindow {
    double first = 0.0;   // max k Delta over k in [100, 1000]
    double second = 0.0;  // max k Delta over k in [1000, 10000]
};

RateWindow rate_windows(const SolverTrace& t) {
    RateWindow w;
    for (const auto& rec : t.outer_records) {
        if (rec.l < 100 || !rec.delta_wl) continue;
        const double v = static_cast<double>(rec.l) * *rec.delta_wl;
        if (rec.l <= 1000) w.first = std::max(w.first, v);
        if (rec.l >= 1000) w.second = std::max(w.second, v);
    }
    return w;
}

CriterionResult c9() {
    CriterionResult res{9, "baseline rates", true, "", 0.0};
    constexpr std::uint64_t kIters = 10'000;
    const GeneratedProblem box = make_wellposed_box(10);
    const GeneratedProblem simplex = make_wellposed_simplex(3);
    const SolverTrace gpm = run_gpm(box.problem, 1.0 / box.problem.objective.lipschitz, box.default_start, kIters);
    const SolverTrace cgm =
        run_cgm(simplex.problem, 1.0 / simplex.problem.objective.lipschitz, simplex.default_start, kIters);
    std::ostringstream os;
    for (const auto& [name, trace] : {std::pair<const char*, const SolverTrace*>{"gpm wellposed_box(10)", &gpm},
                                      {"cgm wellposed_simplex(3)", &cgm}}) {
        const RateWindow w = rate_windows(*trace);
        const double ratio = w.first > 0.0 ? w.second / w.first : std::nan("");
        const bool ok = std::isfinite(w.first) && std::isfinite(w.second) && ratio >= 0.5 && ratio <= 2.0;
        res.passed = res.passed && ok;
        os << name << ": max k*Delta " << format_double(w.first) << " -> " << format_double(w.second) << " (ratio "
           << format_double(ratio) << "); ";
    }
    res.detail = os.str();
    return res;
}

Vector random_box_point(const BoxSet& b, std::mt19937_64& rng) {
    Vector x(b.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(b.lower[i], b.upper[i])(rng);
    return x;
}

Vector random_ball_point(const BallSet& b, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Vector dir(b.dimension());
    for (double& v : dir) v = gauss(rng);
    const double n = norm(dir);
    const double r = b.radius * std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                                         1.0 / static_cast<double>(b.dimension()));
    return add_scaled(b.center, n > 0.0 ? r / n : 0.0, dir);
}

Vector random_simplex_point(std::size_t dim, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    Vector x(dim);
    double s = 0.0;
    for (double& v : x) s += (v = expo(rng));
    return (1.0 / s) * x;
}

Vector random_ambient(std::size_t dim, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vector x(dim);
    for (double& v : x) v = gauss(rng);
    return x;
}

struct OracleStats {
    std::size_t failures = 0;
    double worst_idem = 0.0, worst_expand = 0.0, worst_vi = -1e300, worst_lmo = -1e300;
};

void oracle_suite(const FeasibleSet& set, const std::function<Vector(std::mt19937_64&)>& sample, std::uint64_t seed,
                  OracleStats& st) {
    std::mt19937_64 rng(seed);
    const std::size_t n = set.dimension;
    for (int t = 0; t < 100; ++t) {
        const Vector x = random_ambient(n, 2.0, rng);
        const Vector y = random_ambient(n, 2.0, rng);
        const Vector px = set.project(x);
        const Vector py = set.project(y);
        const double idem = distance(set.project(px), px);
        const double expand = distance(px, py) - distance(x, y);
        st.worst_idem = std::max(st.worst_idem, idem);
        st.worst_expand = std::max(st.worst_expand, expand);
        if (idem > 1e-12 || expand > 1e-12) ++st.failures;

        const Vector g = random_ambient(n, 1.0, rng);
        const Vector s = set.lmo(g);
        if (!set.contains(s, kMembershipTol) || !set.contains(px, kMembershipTol)) ++st.failures;
        for (int q = 0; q < 50; ++q) {
            const Vector z = sample(rng);
            const double vi = dot(x - px, z - px);
            const double lmo_excess = dot(g, s) - dot(g, z);
            st.worst_vi = std::max(st.worst_vi, vi);
            st.worst_lmo = std::max(st.worst_lmo, lmo_excess);
            if (vi > 1e-10 || lmo_excess > 1e-10) ++st.failures;
        }
    }
}

CriterionResult c10() {
    CriterionResult res{10, "oracle invariants", true, "", 0.0};
    const BoxSet box(Vector{-1.0, -0.5, 0.0, 0.25, -2.0}, Vector{1.0, 0.5, 3.0, 0.25, -1.0});
    const BallSet ball(Vector{0.5, -0.5, 1.0, 0.0, 2.0}, 1.5);
    const SimplexSet simplex(5);
    OracleStats st;
    oracle_suite(make_feasible_set(box), [&](std::mt19937_64& r) { return random_box_point(box, r); }, 11, st);
    oracle_suite(make_feasible_set(ball), [&](std::mt19937_64& r) { return random_ball_point(ball, r); }, 12, st);
    oracle_suite(make_feasible_set(simplex), [&](std::mt19937_64& r) { return random_simplex_point(5, r); }, 13, st);
    res.passed = st.failures == 0;
    std::ostringstream os;
    os << "box, ball, simplex x 100 samples: " << st.failures << " failures; worst idempotence "
       << format_double(st.worst_idem) << ", expansion " << format_double(st.worst_expand) << ", VI "
       << format_double(st.worst_vi) << ", LMO " << format_double(st.worst_lmo);
    res.detail = os.str();
    return res;
}

// Half-decade grid 1e-1 ... 1e-12. The default grid leaves too few attained
// points with N > 0 for a slope; only attained points enter each fit anyway.
std::vector<double> exponent_grid() {
    std::vector<double> g;
    for (int i = 2; i <= 24; ++i) g.push_back(std::pow(10.0, -0.5 * i));
    return g;
}

CriterionResult c11() {
    CriterionResult res{11, "exponent trend", true, "", 0.0};
    const std::vector<double> grid = exponent_grid();
    std::vector<double> exps;
    std::ostringstream os;
    for (double s : kSigmas) {
        const Run r = two_level_run("illposed_box(2)", Method::Gprm, s, {}, Vector{1.0, 0.0});
        const ComplexityReport rep = measure_complexity(r.trace, 0.0, grid);
        exps.push_back(rep.fitted_exponent);
        const bool ok = rep.fit_points >= 4 && std::isfinite(rep.fitted_exponent) &&
                        rep.fitted_exponent <= 1.0 + 2.0 * s + 0.5;
        res.passed = res.passed && ok;
        os << "sigma=" << format_double(s) << ": " << format_double(rep.fitted_exponent) << " (" << rep.fit_points
           << " pts); ";
    }
    for (std::size_t i = 1; i < exps.size(); ++i) {
        if (!(exps[i] <= exps[i - 1])) res.passed = false;
    }
    os << (res.passed ? "non-increasing" : "not monotone non-increasing in sigma");
    res.detail = os.str();
    return res;
}

const std::vector<std::function<CriterionResult()>>& criteria() {
    static const std::vector<std::function<CriterionResult()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    return all;
}

const char* criterion_name(int id) {
    static const char* names[] = {"strong convergence (gprm)", "strong convergence (cgrm)", "weak/strong contrast",
                                  "complexity bounds", "step lower bounds", "inner finiteness",
                                  "sandwich/gap certificates", "Tikhonov path", "baseline rates",
                                  "oracle invariants", "exponent trend"};
    return names[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriterionCount) throw ContractError("run_criterion: id must lie in 1.." +
                                                            std::to_string(kCriterionCount));
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = criteria()[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
        r = {id, criterion_name(id), false, std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance_suite() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (" << std::fixed;
    os.precision(3);
    os << r.seconds << " s): " << r.detail;
    return os.str();
}

}  // namespace regopt::bench
