#include <cmath>
#include <random>

#include "doctest.h"
#include "regopt/bench/generators.hpp"
#include "regopt/core.hpp"
#include "regopt/oracles.hpp"

using namespace regopt;

TEST_CASE("vector arithmetic") {
    const Vector x{1.0, 2.0};
    const Vector y{3.0, -1.0};
    CHECK(x + y == Vector{4.0, 1.0});
    CHECK(x - y == Vector{-2.0, 3.0});
    CHECK(2.0 * x == Vector{2.0, 4.0});
    CHECK(dot(x, y) == 1.0);
    CHECK(norm_sq(x) == 5.0);
    CHECK(distance(x, y) == doctest::Approx(std::sqrt(13.0)));
    CHECK(add_scaled(x, -1.0, y) == x - y);
    Vector z = x;
    axpy(2.0, y, z);
    CHECK(z == Vector{7.0, 0.0});
    CHECK_THROWS_AS(dot(x, Vector{1.0}), ContractError);
    CHECK_FALSE(Vector{1.0, std::nan("")}.all_finite());
}

TEST_CASE("matrix products") {
    const Matrix a{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    CHECK(a.multiply(Vector{1.0, -1.0}) == Vector{-1.0, -1.0, -1.0});
    CHECK(a.multiply_transposed(Vector{1.0, 0.0, 1.0}) == Vector{6.0, 8.0});
    CHECK(Matrix::identity(2).multiply(Vector{3.0, 4.0}) == Vector{3.0, 4.0});
}

TEST_CASE("check_gradient examples") {
    SUBCASE("half squared norm") {
        const Objective f = half_squared_distance(Vector{0.0, 0.0});
        CHECK(check_gradient(f, Vector{1.0, 2.0}, 1e-6) < 1e-8);
    }
    SUBCASE("linear") {
        const Objective f = linear_objective(Vector{3.0, -1.0});
        CHECK(check_gradient(f, Vector{0.3, -7.0}, 1e-6) < 1e-10);
    }
    SUBCASE("rank-deficient least squares") {
        const Objective f = least_squares_objective(Matrix{{1.0, 1.0}, {0.0, 0.0}}, Vector{1.0, 0.0});
        // Hand gradient A^T (A x - b) vanishes at (1, 0).
        CHECK(f.gradient(Vector{1.0, 0.0}) == Vector{0.0, 0.0});
        CHECK(check_gradient(f, Vector{1.0, 0.0}, 1e-6) < 1e-7);
    }
    SUBCASE("step outside the allowed range") {
        const Objective f = zero_objective(2);
        CHECK_THROWS_AS(check_gradient(f, Vector{0.0, 0.0}, 0.5), ContractError);
        CHECK_THROWS_AS(check_gradient(f, Vector{0.0, 0.0}, 0.0), ContractError);
    }
    SUBCASE("non-finite values") {
        Objective f = zero_objective(1);
        f.value = [](const Vector&) { return std::nan(""); };
        CHECK_THROWS_AS(check_gradient(f, Vector{0.0}, 1e-6), OracleFailure);
    }
}

TEST_CASE("estimate_lipschitz_quadratic examples") {
    CHECK(estimate_lipschitz_quadratic(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(estimate_lipschitz_quadratic(Matrix{{2.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(4.0).epsilon(1e-9));
    // A^T A = [[1,1],[1,1]] has eigenvalues {0, 2}.
    CHECK(estimate_lipschitz_quadratic(Matrix{{1.0, 1.0}, {0.0, 0.0}}) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(estimate_lipschitz_quadratic(Matrix(2, 3)) == 0.0);
}

TEST_CASE("lipschitz estimate agrees with a dense eigenvalue oracle") {
    // Oracle: Jacobi rotations on A^T A, written independently of the power iteration.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Matrix a(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = g(rng);
    double m[3][3] = {};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t r = 0; r < 4; ++r) m[i][j] += a(r, i) * a(r, j);
    for (int sweep = 0; sweep < 50; ++sweep) {
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(m[p][q]) < 1e-300) continue;
                const double th = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
                const double c = std::cos(th), s = std::sin(th);
                for (int k = 0; k < 3; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
    }
    const double top = std::max({m[0][0], m[1][1], m[2][2]});
    CHECK(estimate_lipschitz_quadratic(a) == doctest::Approx(top).epsilon(1e-8));
}

TEST_CASE("problem validation") {
    Problem p;
    p.objective = half_squared_distance(Vector{0.0, 0.0});
    p.set = make_feasible_set(BoxSet::uniform(2, -1.0, 1.0));
    p.known_xstar_n = Vector{0.0, 0.0};
    p.known_fstar = 0.0;
    CHECK_NOTHROW(p.validate());
    p.known_fstar = 1.0;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.known_fstar = 0.0;
    p.known_xstar_n = Vector{2.0, 0.0};
    CHECK_THROWS_AS(p.validate(), ContractError);
}

namespace {

Vector random_point_in(const FeasibleSet& set, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 2.0);
    Vector x(set.dimension);
    for (double& v : x) v = g(rng);
    return set.project(x);
}

}  // namespace

TEST_CASE("bundled objectives: convexity, descent lemma, gradient accuracy") {
    std::mt19937_64 rng(99);
    for (const char* label : {"illposed_box(2)", "illposed_box(5)", "illposed_simplex(3)", "rankdef(6,4,2)",
                              "wellposed_box(10)", "wellposed_simplex(4)"}) {
        CAPTURE(label);
        const auto gen = bench::make_problem(label, 3);
        const Objective& f = gen.problem.objective;
        const FeasibleSet& set = gen.problem.set;
        for (int t = 0; t < 20; ++t) {
            const Vector x = random_point_in(set, rng);
            const Vector y = random_point_in(set, rng);
            const Vector mid = 0.5 * (x + y);
            CHECK(f.value(mid) <= 0.5 * f.value(x) + 0.5 * f.value(y) + 1e-12);
            const Vector d = y - x;
            CHECK(f.value(y) <= f.value(x) + dot(f.gradient(x), d) + 0.5 * f.lipschitz * norm_sq(d) + 1e-12);
            CHECK(check_gradient(f, x, 1e-6) < 1e-5);
        }
    }
}
