#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "regopt/core.hpp"

namespace regopt {

// phi_eps(x) = f(x) + 0.5 * eps * |x|^2.
//
// epsilon0 is the largest regularization weight of the run; it fixes the
// Lipschitz bound L' = L + epsilon0 shared by every level. The base objective
// is referenced, not copied, and must outlive this object.
class PerturbedObjective {
public:
    PerturbedObjective(const Objective& base, double epsilon, double epsilon0);

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    double epsilon() const noexcept { return epsilon_; }
    double epsilon0() const noexcept { return epsilon0_; }
    double lipschitz_prime() const noexcept { return base_.get().lipschitz + epsilon0_; }
    const Objective& base() const noexcept { return base_.get(); }

private:
    std::reference_wrapper<const Objective> base_;
    double epsilon_;
    double epsilon0_;
};

double perturbed_value(const PerturbedObjective& p, const Vector& x);

struct LevelParams {
    double epsilon;
    double delta;
};

// eps_l = nu^l * eps0, delta_l = eps_l^(1 + sigma).
struct GeometricSchedule {
    double epsilon0 = 1.0;
    double nu = 0.5;
    double sigma = 0.5;

    GeometricSchedule() = default;
    GeometricSchedule(double epsilon0, double nu, double sigma);
    void validate() const;
};

LevelParams schedule_params(const GeometricSchedule& s, std::int64_t l);

struct StepParams {
    double lambda;
    double epsilon;
};

// lambda_k = (k+1)^-0.5, eps_k = (k+1)^-tau with tau in (0, 0.5).
struct IterRegSchedule {
    double tau = 0.25;

    IterRegSchedule() = default;
    explicit IterRegSchedule(double tau);
    void validate() const;
};

StepParams iterreg_params(const IterRegSchedule& s, std::int64_t k);

struct TikhonovRecord {
    double epsilon = 0.0;
    Vector z;
    // |z - P_D[z - phi_eps'(z)]|
    double residual = 0.0;
    // phi_eps(z), the optimal value of the perturbed problem up to the residual.
    double value = 0.0;
    // Certified bound on |z - z(eps)|: 2 (L' + 1) residual / eps + residual.
    double distance_bound = 0.0;
    std::uint64_t iterations = 0;
};

inline constexpr double kTikhonovDefaultTol = 1e-11;
inline constexpr std::uint64_t kTikhonovMaxIterations = 10'000'000;

// High-accuracy reference solution z(eps) by fixed-step projected gradient
// with step 1/(L + eps). Independent of the Armijo code in the solvers.
TikhonovRecord tikhonov_solve(const Problem& prob, double epsilon, double tol = kTikhonovDefaultTol);

struct PathCheckReport {
    // f(z(eta)) - f(z(mu)) <= 0.5 eta (|z(mu)|^2 - |z(eta)|^2)
    bool objective_gap_ok = false;
    // phi*_eta - phi*_mu <= 0.5 (eta - mu) |z(mu)|^2
    bool optimal_value_ok = false;
    // |z(eta)| <= |z(mu)|
    bool norm_monotone_ok = false;
    // lhs - rhs of each inequality; non-positive means it holds without slack.
    double objective_gap_excess = 0.0;
    double optimal_value_excess = 0.0;
    double norm_excess = 0.0;

    bool all_ok() const { return objective_gap_ok && optimal_value_ok && norm_monotone_ok; }
};

// mu == 0 stands for the minimal-norm solution, which must be known analytically.
PathCheckReport path_check(const Problem& prob, double mu, double eta, double slack,
                           double oracle_tol = kTikhonovDefaultTol);

// Same checks against precomputed oracle solutions (mu_rec.epsilon < eta_rec.epsilon).
PathCheckReport path_check(const Objective& f, const TikhonovRecord& mu_rec, const TikhonovRecord& eta_rec,
                           double slack);

// eps_j = first * ratio^j for j = 0..count-1.
std::vector<double> geometric_grid(double first, double ratio, std::size_t count);

}  // namespace regopt
