#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "regopt/core.hpp"
#include "regopt/regularization.hpp"

namespace regopt {

// Constants of the two-level methods and the step lower bound gamma they imply.
struct MethodConstants {
    double beta = 0.5;
    double theta = 0.5;
    double gamma = 0.0;
    double Lprime = 0.0;                 // L + epsilon0
    std::optional<double> Ldoubleprime;  // CGRM only
    std::optional<double> B;             // CGRM only: diameter of D
};

// gamma = min{1, theta * 2(1 - beta) / L'}.
MethodConstants gprm_constants(const Problem& prob, const GeometricSchedule& sched, double beta, double theta);

// gamma = min{theta, 2(1 - beta)/(L' B^2), 1/(L'' B)} with
// L'' = |f'(xbar)| + epsilon0 |xbar| + L' B for the reference point xbar.
MethodConstants cgrm_constants(const Problem& prob, const GeometricSchedule& sched, double beta, double theta,
                               const Vector& reference_point);

struct StopPolicy {
    double epsilon_min = 1e-6;
    std::int64_t max_outer = 60;
    std::uint64_t max_inner_per_l = 1'000'000;
    int max_linesearch_m = 60;

    void validate() const;
};

// One row per completed outer level (two-level methods) or per iterate
// (single-level methods, where l is the iteration index and N_l is 0 or 1).
struct OuterRecord {
    std::int64_t l = 0;
    std::optional<double> epsilon_l;
    std::optional<double> delta_l;
    std::uint64_t N_l = 0;
    Vector w_l;
    double f_value = 0.0;
    std::optional<double> phi_gap;     // phi_{eps_l}(w^l) - phi*_{eps_l}, filled by attach_oracle_distances
    std::optional<double> delta_wl;    // f(w^l) - f*
    std::optional<double> dist_xstar;  // |w^l - x*_n|
    std::optional<double> dist_z;      // |w^l - z(eps_l)|, filled by attach_oracle_distances
    std::uint64_t cum_inner = 0;

    friend bool operator==(const OuterRecord&, const OuterRecord&) = default;
};

struct SolverTrace {
    std::string method;
    std::vector<OuterRecord> outer_records;
    OracleCounters counters;
    // +inf when no step was taken.
    double min_observed_lambda = std::numeric_limits<double>::infinity();
    // mu_{k,l} for every CGRM inner step, in order.
    std::vector<double> gap_history;
    Vector final_point;
    bool stopped_at_stationary_point = false;

    friend bool operator==(const SolverTrace&, const SolverTrace&) = default;
};

// Snapshot handed to an observer at every inner iteration of GPRM/CGRM.
struct InnerStep {
    std::int64_t l;
    double epsilon;
    double delta;
    std::uint64_t k;
    const Vector& x;
    const Vector& y;
    // |x - y| for GPRM, mu_{k,l} for CGRM.
    double stop_measure;
    double phi_x;
    bool stopped;  // the outer stop test fired at this k; no step follows
    // Filled only when a step was taken.
    double lambda = 0.0;
    double phi_next = 0.0;
    double quad_coeff = 0.0;
};

using InnerObserver = std::function<void(const InnerStep&)>;

struct ArmijoResult {
    int m = 0;
    double lambda = 1.0;
    double value = 0.0;  // phi(x + lambda d)
};

// Smallest m >= 0 with phi(x + theta^m d) <= phi(x) - beta theta^m quad_coeff
// and, when cap is given, theta^m * cap <= 1.
ArmijoResult armijo_search(const PerturbedObjective& phi, const Vector& x, const Vector& d, double beta,
                           double theta, double quad_coeff, std::optional<double> cap, int max_m,
                           OracleCounters* counters = nullptr, std::optional<double> phi_x = std::nullopt);

// Fixed-step gradient projection x+ = P_D[x - lambda f'(x)], 0 < lambda < 2/L.
SolverTrace run_gpm(const Problem& prob, double lambda, const Vector& x0, std::uint64_t max_iter);

// Single-loop iterative regularization with lambda_k = (k+1)^-0.5, eps_k = (k+1)^-tau.
SolverTrace run_iterreg(const Problem& prob, const IterRegSchedule& sched, const Vector& x0,
                        std::uint64_t max_iter);

// Two-level gradient projection with regularization.
SolverTrace run_gprm(const Problem& prob, const GeometricSchedule& sched, const MethodConstants& consts,
                     const Vector& w0, const StopPolicy& stop, const InnerObserver& observer = {});

// Conditional gradient with step min{1, theta_k beta_k}, 0 < theta_k < 2/L.
SolverTrace run_cgm(const Problem& prob, double theta_k, const Vector& x0, std::uint64_t max_iter);

// Two-level conditional gradient with regularization.
SolverTrace run_cgrm(const Problem& prob, const GeometricSchedule& sched, const MethodConstants& consts,
                     const Vector& w0, const StopPolicy& stop, const InnerObserver& observer = {});

// Fills phi_gap and dist_z of every record with epsilon_l from tikhonov_solve.
void attach_oracle_distances(SolverTrace& trace, const Problem& prob, double oracle_tol = kTikhonovDefaultTol);

}  // namespace regopt
