#include "regopt/bench/generators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>

#include "regopt/oracles.hpp"

namespace regopt::bench {

namespace {

Vector uniform_vector(std::size_t dim, double v) { return Vector(dim, v); }

Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

// Projected gradient with step 1/L until the unit-step residual stalls.
Vector minimize_least_squares(const Objective& f, const FeasibleSet& set, Vector x) {
    const double L = f.lipschitz;
    if (L == 0.0) return x;
    const double step = 1.0 / L;
    constexpr int kMaxIter = 5'000'000;
    for (int it = 0; it < kMaxIter; ++it) {
        const Vector g = f.gradient(x);
        Vector next = set.project(add_scaled(x, -step, g));
        const double change = distance(next, x);
        x = std::move(next);
        if (change <= 1e-15 * (1.0 + norm(x))) break;
    }
    return x;
}

struct AffineSlice {
    Eigen::MatrixXd a;
    Eigen::MatrixXd pinv;
    Eigen::VectorXd target;

    // Nearest point of {x : A x = target}.
    Vector project(const Vector& x) const {
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        const Eigen::VectorXd p = xv - pinv * (a * xv - target);
        return Vector(std::vector<double>(p.data(), p.data() + p.size()));
    }
};

// Dykstra's algorithm: converges to the projection of `start` onto D intersected with the slice.
Vector dykstra(const FeasibleSet& set, const AffineSlice& slice, const Vector& start) {
    const std::size_t n = start.size();
    Vector x = start;
    Vector p(n), q(n);
    constexpr int kMaxIter = 2'000'000;
    for (int it = 0; it < kMaxIter; ++it) {
        const Vector y = set.project(x + p);
        p = x + p - y;
        const Vector x_next = slice.project(y + q);
        q = y + q - x_next;
        const double change = distance(x_next, x) + distance(y, x_next);
        x = x_next;
        if (change <= 1e-15) break;
    }
    // End on the set side so the result is feasible.
    return set.project(x);
}

std::string cache_key(const Matrix& a, const Vector& b, const FeasibleSet& set) {
    std::ostringstream os;
    os.precision(17);
    os << a.rows() << 'x' << a.cols() << ':';
    for (double v : a.values()) os << v << ',';
    os << '|';
    for (double v : b) os << v << ',';
    os << '|' << set.description;
    return os.str();
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, Vector>& truth_cache() {
    static std::map<std::string, Vector> cache;
    return cache;
}

}  // namespace

GeneratedProblem make_illposed_box(std::size_t dim) {
    if (dim < 2) throw ContractError("make_illposed_box: dim must be at least 2");
    Objective f;
    f.value = [](const Vector& x) {
        double s = -1.0;
        for (double v : x) s += v;
        return 0.5 * s * s;
    };
    f.gradient = [dim](const Vector& x) {
        double s = -1.0;
        for (double v : x) s += v;
        return Vector(dim, s);
    };
    f.lipschitz = static_cast<double>(dim);
    f.label = "half_squared_sum_residual";

    GeneratedProblem g;
    g.label = "illposed_box(" + std::to_string(dim) + ")";
    g.analytic_L = f.lipschitz;
    g.analytic_xstar_n = uniform_vector(dim, 1.0 / static_cast<double>(dim));
    g.analytic_fstar = 0.0;
    g.dstar_description = "{x in [-1,1]^n : sum x = 1}";
    g.default_start = Vector(dim);
    g.default_start[0] = 1.0;
    g.problem.objective = std::move(f);
    g.problem.set = make_feasible_set(BoxSet::uniform(dim, -1.0, 1.0));
    g.problem.known_fstar = g.analytic_fstar;
    g.problem.known_xstar_n = g.analytic_xstar_n;
    g.problem.validate();
    return g;
}

GeneratedProblem make_illposed_simplex(std::size_t dim) {
    if (dim < 3) throw ContractError("make_illposed_simplex: dim must be at least 3");
    Objective f;
    f.value = [](const Vector& x) {
        const double d = x[0] - x[1];
        return 0.5 * d * d;
    };
    f.gradient = [dim](const Vector& x) {
        Vector g(dim);
        g[0] = x[0] - x[1];
        g[1] = -g[0];
        return g;
    };
    f.lipschitz = 2.0;
    f.label = "half_squared_first_difference";

    GeneratedProblem g;
    g.label = "illposed_simplex(" + std::to_string(dim) + ")";
    g.analytic_L = 2.0;
    g.analytic_xstar_n = uniform_vector(dim, 1.0 / static_cast<double>(dim));
    g.analytic_fstar = 0.0;
    g.dstar_description = "{x in simplex : x_1 = x_2}";
    g.default_start = Vector(dim);
    g.default_start[0] = 1.0;
    g.problem.objective = std::move(f);
    g.problem.set = make_feasible_set(SimplexSet(dim));
    g.problem.known_fstar = g.analytic_fstar;
    g.problem.known_xstar_n = g.analytic_xstar_n;
    g.problem.validate();
    return g;
}

GeneratedProblem make_rankdef_lsq(const Matrix& a, const Vector& b, const FeasibleSet& set, std::string label) {
    if (a.cols() != set.dimension) throw ContractError("make_rankdef_lsq: columns of A must match the set");
    if (a.rows() != b.size()) throw ContractError("make_rankdef_lsq: rows of A must match b");
    if (!set.has_projection()) throw ContractError("make_rankdef_lsq: the set needs a projection");

    Objective f = least_squares_objective(a, b);
    const std::size_t n = a.cols();
    const std::string key = cache_key(a, b, set);

    std::optional<Vector> cached;
    {
        std::lock_guard lock(cache_mutex());
        if (auto it = truth_cache().find(key); it != truth_cache().end()) cached = it->second;
    }

    Vector xstar;
    if (cached) {
        xstar = *cached;
    } else {
        const Vector x1 = minimize_least_squares(f, set, set.project(Vector(n, 1.0)));
        const Vector x2 = minimize_least_squares(f, set, set.project(Vector(n, -1.0)));
        const Vector r1 = a.multiply(x1);
        const Vector r2 = a.multiply(x2);
        if (distance(r1, r2) > 1e-8) {
            throw OracleFailure("make_rankdef_lsq: ground-truth oracle disagrees between starting points");
        }
        AffineSlice slice;
        slice.a = to_eigen(a);
        slice.pinv = slice.a.completeOrthogonalDecomposition().pseudoInverse();
        slice.target = Eigen::Map<const Eigen::VectorXd>(r1.data(), static_cast<Eigen::Index>(r1.size()));
        xstar = dykstra(set, slice, Vector(n));
        if (f.value(xstar) > std::min(f.value(x1), f.value(x2)) + 1e-10) {
            throw OracleFailure("make_rankdef_lsq: minimal-norm point is not optimal");
        }
        std::lock_guard lock(cache_mutex());
        truth_cache().emplace(key, xstar);
    }

    GeneratedProblem g;
    g.label = std::move(label);
    g.analytic_L = f.lipschitz;
    g.analytic_xstar_n = xstar;
    g.analytic_fstar = f.value(xstar);
    g.dstar_description = "{x in " + set.description + " : A x = A x*}";
    g.default_start = set.project(Vector(n, 1.0));
    g.problem.objective = std::move(f);
    g.problem.set = set;
    g.problem.known_fstar = g.analytic_fstar;
    g.problem.known_xstar_n = g.analytic_xstar_n;
    g.problem.validate();
    return g;
}

GeneratedProblem make_random_rankdef(std::size_t m, std::size_t n, std::size_t rank, std::uint64_t seed) {
    if (m == 0 || n == 0 || rank == 0 || rank > std::min(m, n)) {
        throw ContractError("make_random_rankdef: need 0 < rank <= min(m, n)");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix u(m, rank), v(rank, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < rank; ++j) u(i, j) = gauss(rng) / std::sqrt(static_cast<double>(rank));
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < n; ++j) v(i, j) = gauss(rng) / std::sqrt(static_cast<double>(n));
    Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < rank; ++r) s += u(i, r) * v(r, j);
            a(i, j) = s;
        }
    // b = A x_true with x_true strictly inside the box, so D* meets the interior.
    Vector x_true(n);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    for (double& c : x_true) c = unif(rng);
    const Vector b = a.multiply(x_true);
    std::ostringstream label;
    label << "rankdef(" << m << "," << n << "," << rank << ")";
    return make_rankdef_lsq(a, b, make_feasible_set(BoxSet::uniform(n, -1.0, 1.0)), label.str());
}

GeneratedProblem make_wellposed_box(std::size_t dim) {
    if (dim < 2) throw ContractError("make_wellposed_box: dim must be at least 2");
    Vector curv(dim), center(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        curv[i] = std::pow(10.0, -4.0 * static_cast<double>(i) / static_cast<double>(dim - 1));
        center[i] = (i % 2 == 0) ? 0.5 : -0.5;
    }
    Objective f;
    f.value = [curv, center](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - center[i];
            s += curv[i] * d * d;
        }
        return 0.5 * s;
    };
    f.gradient = [curv, center](const Vector& x) {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = curv[i] * (x[i] - center[i]);
        return g;
    };
    f.lipschitz = 1.0;
    f.label = "diagonal_quadratic";

    GeneratedProblem g;
    g.label = "wellposed_box(" + std::to_string(dim) + ")";
    g.analytic_L = 1.0;
    g.analytic_xstar_n = center;
    g.analytic_fstar = 0.0;
    g.dstar_description = "singleton {center}";
    g.default_start = -1.0 * center;
    g.problem.objective = std::move(f);
    g.problem.set = make_feasible_set(BoxSet::uniform(dim, -1.0, 1.0));
    g.problem.known_fstar = 0.0;
    g.problem.known_xstar_n = center;
    g.problem.validate();
    return g;
}

GeneratedProblem make_wellposed_simplex(std::size_t dim) {
    if (dim < 3) throw ContractError("make_wellposed_simplex: dim must be at least 3");
    Vector p(dim, -0.2);
    p[0] = 0.7;
    p[1] = 0.3;
    Vector xstar(dim);
    xstar[0] = 0.7;
    xstar[1] = 0.3;

    GeneratedProblem g;
    g.label = "wellposed_simplex(" + std::to_string(dim) + ")";
    g.problem.objective = half_squared_distance(p);
    g.analytic_L = 1.0;
    g.analytic_xstar_n = xstar;
    g.analytic_fstar = 0.5 * 0.04 * static_cast<double>(dim - 2);
    g.dstar_description = "singleton {(0.7, 0.3, 0, ...)} on an edge";
    g.default_start = Vector(dim);
    g.default_start[dim - 1] = 1.0;
    g.problem.set = make_feasible_set(SimplexSet(dim));
    g.problem.known_fstar = g.problem.objective.value(xstar);
    g.problem.known_xstar_n = xstar;
    g.analytic_fstar = *g.problem.known_fstar;
    g.problem.validate();
    return g;
}

GeneratedProblem make_problem(const std::string& label, std::uint64_t seed) {
    static const std::regex pattern(R"(^\s*([a-z_]+)\s*\(\s*([0-9,\s]*)\)\s*$)");
    std::smatch m;
    if (!std::regex_match(label, m, pattern)) throw ContractError("unknown problem label '" + label + "'");
    const std::string name = m[1];
    std::vector<std::size_t> args;
    std::stringstream ss(m[2].str());
    for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        args.push_back(static_cast<std::size_t>(std::stoull(tok)));
    }
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw ContractError("problem label '" + label + "' expects " + std::to_string(count) + " argument(s)");
        }
    };
    if (name == "illposed_box") { need(1); return make_illposed_box(args[0]); }
    if (name == "illposed_simplex") { need(1); return make_illposed_simplex(args[0]); }
    if (name == "wellposed_box") { need(1); return make_wellposed_box(args[0]); }
    if (name == "wellposed_simplex") { need(1); return make_wellposed_simplex(args[0]); }
    if (name == "rankdef") { need(3); return make_random_rankdef(args[0], args[1], args[2], seed); }
    throw ContractError("unknown problem family '" + name + "'");
}

}  // namespace regopt::bench
