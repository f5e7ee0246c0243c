#include "regopt/bench/complexity.hpp"

#include <cmath>
#include <limits>

namespace regopt::bench {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Gpm: return "gpm";
        case Method::Cgm: return "cgm";
        case Method::IterReg: return "iterreg";
        case Method::Gprm: return "gprm";
        case Method::Cgrm: return "cgrm";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::Gpm, Method::Cgm, Method::IterReg, Method::Gprm, Method::Cgrm}) {
        if (method_name(m) == name) return m;
    }
    throw ContractError("unknown method '" + std::string(name) + "'");
}

bool is_two_level(Method m) { return m == Method::Gprm || m == Method::Cgrm; }

BoundConstants bound_constants(Method method, const GeometricSchedule& sched, const MethodConstants& consts,
                               double xstar_norm) {
    if (!is_two_level(method)) throw ContractError("bound_constants: only defined for gprm and cgrm");
    const double e0 = sched.epsilon0;
    const double s = sched.sigma;
    const double tail = 0.5 * e0 * xstar_norm * xstar_norm;
    BoundConstants b;
    if (method == Method::Gprm) {
        const double lp1 = consts.Lprime + 1.0;
        b.C1 = 2.0 * lp1 * lp1 * std::pow(e0, 1.0 + 2.0 * s) + tail;
    } else {
        b.C1 = std::pow(e0, 1.0 + 2.0 * s) + tail;
    }
    b.C2 = b.C1 / (consts.beta * consts.gamma * std::pow(e0, 2.0 * (1.0 + s)));
    return b;
}

double theoretical_bound(Method method, const GeometricSchedule& sched, const MethodConstants& consts,
                         double xstar_norm, double alpha) {
    if (!(alpha > 0.0)) throw ContractError("theoretical_bound: alpha must be positive");
    const BoundConstants b = bound_constants(method, sched, consts, xstar_norm);
    if (alpha >= b.C1) return 0.0;
    const double p = 1.0 + 2.0 * sched.sigma;
    return b.C2 * (std::pow(b.C1 / alpha, p) - 1.0) / (sched.nu * (1.0 - std::pow(sched.nu, p)));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / sxx;
}

ComplexityReport measure_complexity(const SolverTrace& trace, double fstar, const std::vector<double>& alpha_grid) {
    for (double a : alpha_grid) {
        if (!(a > 0.0)) throw ContractError("measure_complexity: alpha values must be positive");
    }
    ComplexityReport r;
    r.alpha_grid = alpha_grid;
    r.bound_N.assign(alpha_grid.size(), std::nullopt);

    const auto& recs = trace.outer_records;
    std::vector<double> xs, ys;
    for (double alpha : alpha_grid) {
        // l(alpha) as a position in recs: one past the last record with Delta >= alpha.
        std::size_t last = 0;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            if (recs[i].f_value - fstar >= alpha) last = i + 1;
        }
        if (last == recs.size()) {
            r.measured_N.push_back(std::nullopt);
            continue;
        }
        const std::uint64_t n = last == 0 ? 0 : recs[last - 1].cum_inner - (recs.front().cum_inner - recs.front().N_l);
        r.measured_N.push_back(n);
        if (n > 0) {
            xs.push_back(std::log(1.0 / alpha));
            ys.push_back(std::log(static_cast<double>(n)));
        }
    }
    r.fit_points = xs.size();
    r.fitted_exponent = fit_slope(xs, ys);
    return r;
}

void attach_bounds(ComplexityReport& report, Method method, const GeometricSchedule& sched,
                   const MethodConstants& consts, double xstar_norm) {
    const BoundConstants b = bound_constants(method, sched, consts, xstar_norm);
    report.C1 = b.C1;
    report.C2 = b.C2;
    report.bound_N.clear();
    for (double a : report.alpha_grid) report.bound_N.push_back(theoretical_bound(method, sched, consts, xstar_norm, a));
}

}  // namespace regopt::bench
