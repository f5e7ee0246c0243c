#pragma once

#include <cstdint>
#include <string>

#include "regopt/core.hpp"

namespace regopt::bench {

// A problem instance together with its analytically (or oracle-) known ground truth.
struct GeneratedProblem {
    Problem problem;
    std::string label;
    double analytic_L = 0.0;
    Vector analytic_xstar_n;
    double analytic_fstar = 0.0;
    std::string dstar_description;
    // Deterministic feasible start used when a config gives none.
    Vector default_start;
};

// f(x) = 0.5 (sum x - 1)^2 on [-1,1]^dim. Solution set is the hyperplane slice;
// x*_n = (1/dim, ..., 1/dim), L = dim, f* = 0.
GeneratedProblem make_illposed_box(std::size_t dim);

// f(x) = 0.5 (x_1 - x_2)^2 on the unit simplex; x*_n is the barycenter, L = 2, f* = 0.
GeneratedProblem make_illposed_simplex(std::size_t dim);

// f(x) = 0.5 |A x - b|^2 over the given set. x*_n comes from an oracle that does
// not touch the Tikhonov path: projected gradient (two starts) fixes the optimal
// residual A x*, then Dykstra's alternating projections compute the nearest point
// to the origin in D intersected with {x : A x = A x*}. Results are cached by content.
GeneratedProblem make_rankdef_lsq(const Matrix& a, const Vector& b, const FeasibleSet& set,
                                  std::string label = "rankdef_lsq");

// Random rank-deficient least squares on [-1,1]^n; A is m x n with rank r.
GeneratedProblem make_random_rankdef(std::size_t m, std::size_t n, std::size_t rank, std::uint64_t seed);

// Well-posed baselines. Box: diagonal quadratic with curvatures spread
// log-uniformly over [1e-4, 1] and an interior minimizer. Simplex: 0.5 |x - p|^2
// whose minimizer lies in the relative interior of an edge.
GeneratedProblem make_wellposed_box(std::size_t dim);
GeneratedProblem make_wellposed_simplex(std::size_t dim);

// Parses labels such as "illposed_box(2)", "illposed_simplex(3)",
// "rankdef(6,4,2)", "wellposed_box(10)", "wellposed_simplex(3)".
GeneratedProblem make_problem(const std::string& label, std::uint64_t seed = 0);

}  // namespace regopt::bench
