#include "regopt/regularization.hpp"

#include <cmath>
#include <sstream>

namespace regopt {

PerturbedObjective::PerturbedObjective(const Objective& base, double epsilon, double epsilon0)
    : base_(base), epsilon_(epsilon), epsilon0_(epsilon0) {
    if (!(epsilon >= 0.0)) throw ContractError("PerturbedObjective: epsilon must be non-negative");
    if (!(epsilon0 > 0.0)) throw ContractError("PerturbedObjective: epsilon0 must be positive");
}

double PerturbedObjective::value(const Vector& x) const {
    return base_.get().value(x) + 0.5 * epsilon_ * norm_sq(x);
}

Vector PerturbedObjective::gradient(const Vector& x) const {
    Vector g = base_.get().gradient(x);
    axpy(epsilon_, x, g);
    return g;
}

double perturbed_value(const PerturbedObjective& p, const Vector& x) { return p.value(x); }

GeometricSchedule::GeometricSchedule(double e0, double n, double s) : epsilon0(e0), nu(n), sigma(s) {
    validate();
}

void GeometricSchedule::validate() const {
    if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) throw ContractError("GeometricSchedule: epsilon0 must be > 0");
    if (!(nu > 0.0 && nu < 1.0)) throw ContractError("GeometricSchedule: nu must lie in (0,1)");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ContractError("GeometricSchedule: sigma must lie in (0,1]");
}

LevelParams schedule_params(const GeometricSchedule& s, std::int64_t l) {
    if (l < 0) throw ContractError("schedule_params: level must be non-negative");
    const double eps = std::pow(s.nu, static_cast<double>(l)) * s.epsilon0;
    return {eps, std::pow(eps, 1.0 + s.sigma)};
}

IterRegSchedule::IterRegSchedule(double t) : tau(t) { validate(); }

void IterRegSchedule::validate() const {
    if (!(tau > 0.0 && tau < 0.5)) throw ContractError("IterRegSchedule: tau must lie in (0,0.5)");
}

StepParams iterreg_params(const IterRegSchedule& s, std::int64_t k) {
    if (k < 0) throw ContractError("iterreg_params: k must be non-negative");
    const double kp1 = static_cast<double>(k + 1);
    return {std::pow(kp1, -0.5), std::pow(kp1, -s.tau)};
}

TikhonovRecord tikhonov_solve(const Problem& prob, double epsilon, double tol) {
    if (!(epsilon > 0.0)) throw ContractError("tikhonov_solve: epsilon must be positive");
    if (!(tol >= 1e-12)) throw ContractError("tikhonov_solve: tol must be at least 1e-12");
    if (!prob.set.has_projection()) throw ContractError("tikhonov_solve: feasible set has no projection");

    const PerturbedObjective phi(prob.objective, epsilon, epsilon);
    const double step = 1.0 / (prob.objective.lipschitz + epsilon);
    const auto& project = prob.set.project;

    Vector z = project(Vector(prob.dimension()));
    for (std::uint64_t it = 0; it <= kTikhonovMaxIterations; ++it) {
        const Vector g = phi.gradient(z);
        if (!g.all_finite()) throw OracleFailure("tikhonov_solve: non-finite gradient");
        const double residual = distance(z, project(z - g));
        if (residual <= tol) {
            TikhonovRecord rec;
            rec.epsilon = epsilon;
            rec.residual = residual;
            rec.value = phi.value(z);
            rec.distance_bound = 2.0 * (prob.objective.lipschitz + epsilon + 1.0) * residual / epsilon + residual;
            rec.iterations = it;
            rec.z = std::move(z);
            return rec;
        }
        z = project(add_scaled(z, -step, g));
    }
    std::ostringstream os;
    os << "tikhonov_solve: no convergence in " << kTikhonovMaxIterations << " iterations at eps=" << epsilon
       << " (is the Lipschitz constant right?)";
    throw OracleFailure(os.str());
}

PathCheckReport path_check(const Objective& f, const TikhonovRecord& mu_rec, const TikhonovRecord& eta_rec,
                           double slack) {
    const double mu = mu_rec.epsilon;
    const double eta = eta_rec.epsilon;
    if (!(mu >= 0.0 && mu < eta)) throw ContractError("path_check: need 0 <= mu < eta");
    const double zmu_sq = norm_sq(mu_rec.z);
    const double zeta_sq = norm_sq(eta_rec.z);
    const double f_mu = f.value(mu_rec.z);
    const double f_eta = f.value(eta_rec.z);
    const double phi_mu = f_mu + 0.5 * mu * zmu_sq;
    const double phi_eta = f_eta + 0.5 * eta * zeta_sq;

    PathCheckReport r;
    r.objective_gap_excess = (f_eta - f_mu) - 0.5 * eta * (zmu_sq - zeta_sq);
    r.optimal_value_excess = (phi_eta - phi_mu) - 0.5 * (eta - mu) * zmu_sq;
    r.norm_excess = std::sqrt(zeta_sq) - std::sqrt(zmu_sq);
    r.objective_gap_ok = r.objective_gap_excess <= slack;
    r.optimal_value_ok = r.optimal_value_excess <= slack;
    r.norm_monotone_ok = r.norm_excess <= slack;
    return r;
}

PathCheckReport path_check(const Problem& prob, double mu, double eta, double slack, double oracle_tol) {
    if (!(mu >= 0.0 && mu < eta)) throw ContractError("path_check: need 0 <= mu < eta");
    TikhonovRecord mu_rec;
    if (mu == 0.0) {
        if (!prob.known_xstar_n) throw ContractError("path_check: mu = 0 requires a known minimal-norm solution");
        mu_rec.epsilon = 0.0;
        mu_rec.z = *prob.known_xstar_n;
    } else {
        mu_rec = tikhonov_solve(prob, mu, oracle_tol);
    }
    const TikhonovRecord eta_rec = tikhonov_solve(prob, eta, oracle_tol);
    return path_check(prob.objective, mu_rec, eta_rec, slack);
}

std::vector<double> geometric_grid(double first, double ratio, std::size_t count) {
    std::vector<double> grid;
    grid.reserve(count);
    double v = first;
    for (std::size_t i = 0; i < count; ++i, v *= ratio) grid.push_back(v);
    return grid;
}

}  // namespace regopt
