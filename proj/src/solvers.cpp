#include "regopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regopt {

namespace {

void require_feasible_start(const Problem& prob, const Vector& x0, const char* who) {
    if (x0.size() != prob.dimension()) {
        throw ContractError(std::string(who) + ": start point has the wrong dimension");
    }
    if (!prob.set.contains(x0, kMembershipTol)) {
        throw ContractError(std::string(who) + ": start point is infeasible");
    }
}

void require_beta_theta(double beta, double theta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ContractError("beta must lie in (0,1)");
    if (!(theta > 0.0 && theta < 1.0)) throw ContractError("theta must lie in (0,1)");
}

OuterRecord make_record(const Problem& prob, std::int64_t l, Vector w, std::uint64_t n_l,
                        std::uint64_t cum_inner) {
    OuterRecord rec;
    rec.l = l;
    rec.N_l = n_l;
    rec.cum_inner = cum_inner;
    rec.f_value = prob.objective.value(w);
    if (prob.known_fstar) rec.delta_wl = rec.f_value - *prob.known_fstar;
    if (prob.known_xstar_n) rec.dist_xstar = distance(w, *prob.known_xstar_n);
    rec.w_l = std::move(w);
    return rec;
}

[[noreturn]] void throw_runaway(const char* who, std::int64_t l, std::uint64_t cap) {
    std::ostringstream os;
    os << who << ": inner loop at level " << l << " exceeded " << cap << " iterations";
    throw RunawayError(os.str());
}

}  // namespace

MethodConstants gprm_constants(const Problem& prob, const GeometricSchedule& sched, double beta, double theta) {
    require_beta_theta(beta, theta);
    sched.validate();
    MethodConstants c;
    c.beta = beta;
    c.theta = theta;
    c.Lprime = prob.objective.lipschitz + sched.epsilon0;
    c.gamma = std::min(1.0, theta * 2.0 * (1.0 - beta) / c.Lprime);
    return c;
}

MethodConstants cgrm_constants(const Problem& prob, const GeometricSchedule& sched, double beta, double theta,
                               const Vector& reference_point) {
    require_beta_theta(beta, theta);
    sched.validate();
    if (!prob.set.is_bounded() || !(*prob.set.diameter > 0.0)) {
        throw ContractError("cgrm_constants: feasible set must be bounded with positive diameter");
    }
    require_feasible_start(prob, reference_point, "cgrm_constants");
    MethodConstants c;
    c.beta = beta;
    c.theta = theta;
    c.Lprime = prob.objective.lipschitz + sched.epsilon0;
    const double b = *prob.set.diameter;
    c.B = b;
    const double grad_norm = norm(prob.objective.gradient(reference_point));
    c.Ldoubleprime = grad_norm + sched.epsilon0 * norm(reference_point) + c.Lprime * b;
    const double lambda1 = 2.0 * (1.0 - beta) / (c.Lprime * b * b);
    const double lambda2 = 1.0 / (*c.Ldoubleprime * b);
    c.gamma = std::min({theta, lambda1, lambda2});
    return c;
}

void StopPolicy::validate() const {
    if (!(epsilon_min > 0.0)) throw ContractError("StopPolicy: epsilon_min must be positive");
    if (max_outer <= 0) throw ContractError("StopPolicy: max_outer must be positive");
    if (max_inner_per_l == 0) throw ContractError("StopPolicy: max_inner_per_l must be positive");
    if (max_linesearch_m <= 0) throw ContractError("StopPolicy: max_linesearch_m must be positive");
}

ArmijoResult armijo_search(const PerturbedObjective& phi, const Vector& x, const Vector& d, double beta,
                           double theta, double quad_coeff, std::optional<double> cap, int max_m,
                           OracleCounters* counters, std::optional<double> phi_x) {
    require_same_size(x, d, "armijo_search");
    if (norm_sq(d) == 0.0) throw ContractError("armijo_search: zero direction");
    require_beta_theta(beta, theta);
    const double base = phi_x ? *phi_x : phi.value(x);
    if (!phi_x && counters) ++counters->value_evals;

    double lambda = 1.0;
    for (int m = 0; m <= max_m; ++m, lambda *= theta) {
        if (counters) ++counters->linesearch_trials;
        if (cap && lambda * *cap > 1.0) continue;
        const Vector trial = add_scaled(x, lambda, d);
        const double v = phi.value(trial);
        if (counters) ++counters->value_evals;
        if (!std::isfinite(v)) throw OracleFailure("armijo_search: non-finite objective value");
        if (v <= base - beta * lambda * quad_coeff) return {m, lambda, v};
    }
    std::ostringstream os;
    os << "armijo_search: no acceptable step for m <= " << max_m;
    throw LineSearchFailure(os.str());
}

SolverTrace run_gpm(const Problem& prob, double lambda, const Vector& x0, std::uint64_t max_iter) {
    if (!prob.set.has_projection()) throw ContractError("run_gpm: feasible set has no projection");
    const double L = prob.objective.lipschitz;
    if (!(lambda > 0.0) || (L > 0.0 && !(lambda < 2.0 / L))) {
        throw ContractError("run_gpm: step must satisfy 0 < lambda < 2/L");
    }
    require_feasible_start(prob, x0, "run_gpm");

    SolverTrace trace;
    trace.method = "gpm";
    Vector x = x0;
    trace.outer_records.push_back(make_record(prob, 0, x, 0, 0));
    for (std::uint64_t k = 0; k < max_iter; ++k) {
        const Vector g = prob.objective.gradient(x);
        ++trace.counters.gradient_evals;
        x = prob.set.project(add_scaled(x, -lambda, g));
        ++trace.counters.projections;
        ++trace.counters.inner_iterations;
        trace.min_observed_lambda = std::min(trace.min_observed_lambda, lambda);
        trace.outer_records.push_back(
            make_record(prob, static_cast<std::int64_t>(k + 1), x, 1, trace.counters.inner_iterations));
    }
    trace.final_point = std::move(x);
    return trace;
}

SolverTrace run_iterreg(const Problem& prob, const IterRegSchedule& sched, const Vector& x0,
                        std::uint64_t max_iter) {
    sched.validate();
    if (!prob.set.has_projection()) throw ContractError("run_iterreg: feasible set has no projection");
    require_feasible_start(prob, x0, "run_iterreg");

    SolverTrace trace;
    trace.method = "iterreg";
    Vector x = x0;
    trace.outer_records.push_back(make_record(prob, 0, x, 0, 0));
    for (std::uint64_t k = 0; k < max_iter; ++k) {
        const auto [lambda, eps] = iterreg_params(sched, static_cast<std::int64_t>(k));
        Vector g = prob.objective.gradient(x);
        ++trace.counters.gradient_evals;
        axpy(eps, x, g);
        x = prob.set.project(add_scaled(x, -lambda, g));
        ++trace.counters.projections;
        ++trace.counters.inner_iterations;
        trace.min_observed_lambda = std::min(trace.min_observed_lambda, lambda);
        OuterRecord rec = make_record(prob, static_cast<std::int64_t>(k + 1), x, 1, trace.counters.inner_iterations);
        rec.epsilon_l = eps;
        trace.outer_records.push_back(std::move(rec));
    }
    trace.final_point = std::move(x);
    return trace;
}

SolverTrace run_gprm(const Problem& prob, const GeometricSchedule& sched, const MethodConstants& consts,
                     const Vector& w0, const StopPolicy& stop, const InnerObserver& observer) {
    sched.validate();
    stop.validate();
    require_beta_theta(consts.beta, consts.theta);
    if (!prob.set.has_projection()) throw ContractError("run_gprm: feasible set has no projection");
    require_feasible_start(prob, w0, "run_gprm");

    SolverTrace trace;
    trace.method = "gprm";
    OracleCounters& cnt = trace.counters;
    Vector w = w0;

    for (std::int64_t l = 1; l <= stop.max_outer; ++l) {
        const auto [eps, delta] = schedule_params(sched, l);
        if (eps < stop.epsilon_min) break;
        const PerturbedObjective phi(prob.objective, eps, sched.epsilon0);

        Vector x = w;
        std::uint64_t k = 0;
        while (true) {
            const Vector g = phi.gradient(x);
            ++cnt.gradient_evals;
            Vector y = prob.set.project(x - g);
            ++cnt.projections;
            const double gap = distance(x, y);
            const double phi_x = phi.value(x);
            ++cnt.value_evals;

            if (gap <= delta) {
                const double phi_y = phi.value(y);
                ++cnt.value_evals;
                if (observer) observer({l, eps, delta, k, x, y, gap, phi_x, true});
                // Ties go to y.
                w = phi_x < phi_y ? std::move(x) : std::move(y);
                break;
            }
            if (k >= stop.max_inner_per_l) throw_runaway("run_gprm", l, stop.max_inner_per_l);

            const Vector d = y - x;
            const double dd = norm_sq(d);
            const ArmijoResult step = armijo_search(phi, x, d, consts.beta, consts.theta, dd, std::nullopt,
                                                    stop.max_linesearch_m, &cnt, phi_x);
            trace.min_observed_lambda = std::min(trace.min_observed_lambda, step.lambda);
            if (observer) {
                InnerStep s{l, eps, delta, k, x, y, gap, phi_x, false};
                s.lambda = step.lambda;
                s.phi_next = step.value;
                s.quad_coeff = dd;
                observer(s);
            }
            axpy(step.lambda, d, x);
            ++k;
            ++cnt.inner_iterations;
        }
        OuterRecord rec = make_record(prob, l, w, k, cnt.inner_iterations);
        rec.epsilon_l = eps;
        rec.delta_l = delta;
        trace.outer_records.push_back(std::move(rec));
    }
    trace.final_point = std::move(w);
    return trace;
}

SolverTrace run_cgm(const Problem& prob, double theta_k, const Vector& x0, std::uint64_t max_iter) {
    if (!prob.set.has_lmo() || !prob.set.is_bounded()) {
        throw ContractError("run_cgm: feasible set must be bounded and provide a linear minimization oracle");
    }
    const double L = prob.objective.lipschitz;
    if (!(theta_k > 0.0) || (L > 0.0 && !(theta_k < 2.0 / L))) {
        throw ContractError("run_cgm: theta_k must satisfy 0 < theta_k < 2/L");
    }
    require_feasible_start(prob, x0, "run_cgm");

    SolverTrace trace;
    trace.method = "cgm";
    Vector x = x0;
    trace.outer_records.push_back(make_record(prob, 0, x, 0, 0));
    for (std::uint64_t k = 0; k < max_iter; ++k) {
        const Vector g = prob.objective.gradient(x);
        ++trace.counters.gradient_evals;
        const Vector y = prob.set.lmo(g);
        ++trace.counters.lmo_calls;
        const Vector d = y - x;
        const double dd = norm_sq(d);
        if (dd == 0.0) {
            trace.stopped_at_stationary_point = true;
            break;
        }
        const double beta_k = -dot(g, d) / dd;
        const double lambda = std::min(1.0, theta_k * beta_k);
        axpy(lambda, d, x);
        ++trace.counters.inner_iterations;
        trace.min_observed_lambda = std::min(trace.min_observed_lambda, lambda);
        trace.outer_records.push_back(
            make_record(prob, static_cast<std::int64_t>(k + 1), x, 1, trace.counters.inner_iterations));
    }
    trace.final_point = std::move(x);
    return trace;
}

SolverTrace run_cgrm(const Problem& prob, const GeometricSchedule& sched, const MethodConstants& consts,
                     const Vector& w0, const StopPolicy& stop, const InnerObserver& observer) {
    sched.validate();
    stop.validate();
    require_beta_theta(consts.beta, consts.theta);
    if (!prob.set.has_lmo()) throw ContractError("run_cgrm: feasible set has no linear minimization oracle");
    if (!prob.set.is_bounded()) throw ContractError("run_cgrm: feasible set must be bounded");
    require_feasible_start(prob, w0, "run_cgrm");

    SolverTrace trace;
    trace.method = "cgrm";
    OracleCounters& cnt = trace.counters;
    Vector w = w0;

    for (std::int64_t l = 1; l <= stop.max_outer; ++l) {
        const auto [eps, delta] = schedule_params(sched, l);
        if (eps < stop.epsilon_min) break;
        const PerturbedObjective phi(prob.objective, eps, sched.epsilon0);

        Vector x = w;
        std::uint64_t k = 0;
        while (true) {
            const Vector g = phi.gradient(x);
            ++cnt.gradient_evals;
            const Vector y = prob.set.lmo(g);
            ++cnt.lmo_calls;
            const Vector d = y - x;
            const double mu = -dot(g, d);
            trace.gap_history.push_back(mu);
            const double phi_x = phi.value(x);
            ++cnt.value_evals;

            if (mu <= delta) {
                if (observer) observer({l, eps, delta, k, x, y, mu, phi_x, true});
                w = std::move(x);
                break;
            }
            if (k >= stop.max_inner_per_l) throw_runaway("run_cgrm", l, stop.max_inner_per_l);

            // Step x + theta^m mu d with theta^m mu <= 1.
            const Vector scaled = mu * d;
            const ArmijoResult step = armijo_search(phi, x, scaled, consts.beta, consts.theta, mu * mu, mu,
                                                    stop.max_linesearch_m, &cnt, phi_x);
            trace.min_observed_lambda = std::min(trace.min_observed_lambda, step.lambda);
            if (observer) {
                InnerStep s{l, eps, delta, k, x, y, mu, phi_x, false};
                s.lambda = step.lambda;
                s.phi_next = step.value;
                s.quad_coeff = mu * mu;
                observer(s);
            }
            axpy(step.lambda, scaled, x);
            ++k;
            ++cnt.inner_iterations;
        }
        OuterRecord rec = make_record(prob, l, w, k, cnt.inner_iterations);
        rec.epsilon_l = eps;
        rec.delta_l = delta;
        trace.outer_records.push_back(std::move(rec));
    }
    trace.final_point = std::move(w);
    return trace;
}

void attach_oracle_distances(SolverTrace& trace, const Problem& prob, double oracle_tol) {
    for (OuterRecord& rec : trace.outer_records) {
        if (!rec.epsilon_l || !(*rec.epsilon_l > 0.0)) continue;
        const TikhonovRecord z = tikhonov_solve(prob, *rec.epsilon_l, oracle_tol);
        const PerturbedObjective phi(prob.objective, *rec.epsilon_l, *rec.epsilon_l);
        rec.phi_gap = phi.value(rec.w_l) - z.value;
        rec.dist_z = distance(rec.w_l, z.z);
    }
}

}  // namespace regopt
