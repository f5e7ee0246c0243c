#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regopt/regularization.hpp"
#include "regopt/solvers.hpp"

namespace regopt::bench {

enum class Method { Gpm, Cgm, IterReg, Gprm, Cgrm };

std::string_view method_name(Method m);
// Throws ContractError for unknown names.
Method parse_method(std::string_view name);
bool is_two_level(Method m);

inline const std::vector<double> kDefaultAlphaGrid{0.1, 0.03, 0.01, 0.003, 0.001};

struct BoundConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};

// GPRM: C1 = 2 (L'+1)^2 eps0^(1+2 sigma) + 0.5 eps0 |x*_n|^2
// CGRM: C1 = eps0^(1+2 sigma) + 0.5 eps0 |x*_n|^2
// both: C2 = C1 / (beta gamma eps0^(2(1+sigma)))
BoundConstants bound_constants(Method method, const GeometricSchedule& sched, const MethodConstants& consts,
                               double xstar_norm);

// N(alpha) <= C2 ((C1/alpha)^(1+2 sigma) - 1) / (nu (1 - nu^(1+2 sigma))); 0 when alpha >= C1.
double theoretical_bound(Method method, const GeometricSchedule& sched, const MethodConstants& consts,
                         double xstar_norm, double alpha);

struct ComplexityReport {
    std::vector<double> alpha_grid;
    // Empty entries mark accuracies never reached within the trace.
    std::vector<std::optional<std::uint64_t>> measured_N;
    std::vector<std::optional<double>> bound_N;
    std::optional<double> C1;
    std::optional<double> C2;
    // Least-squares slope of log N against log(1/alpha) over attained points with N > 0; NaN with < 2 points.
    double fitted_exponent = 0.0;
    std::size_t fit_points = 0;
};

// N(alpha) = sum of N_l for l <= l(alpha), where l(alpha) is the largest l with
// Delta(w^l) >= alpha (0 if none). alpha counts as attained when a later record exists.
ComplexityReport measure_complexity(const SolverTrace& trace, double fstar, const std::vector<double>& alpha_grid);

// Fills bound_N, C1 and C2.
void attach_bounds(ComplexityReport& report, Method method, const GeometricSchedule& sched,
                   const MethodConstants& consts, double xstar_norm);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace regopt::bench
