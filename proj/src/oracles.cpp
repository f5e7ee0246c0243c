#include "regopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "regopt/simd/kernels.hpp"

namespace regopt {

namespace {

void require_dim(const Vector& x, std::size_t dim, const char* what) {
    if (x.size() != dim) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << x.size() << " vs " << dim << ")";
        throw ContractError(os.str());
    }
}

}  // namespace

BoxSet::BoxSet(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    require_same_size(lower, upper, "BoxSet");
    if (lower.empty()) throw ContractError("BoxSet: empty box");
    if (!lower.all_finite() || !upper.all_finite()) throw ContractError("BoxSet: bounds must be finite");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) throw ContractError("BoxSet: lower bound exceeds upper bound");
    }
}

BoxSet BoxSet::uniform(std::size_t dim, double lo, double hi) { return BoxSet(Vector(dim, lo), Vector(dim, hi)); }

BallSet::BallSet(Vector c, double r) : center(std::move(c)), radius(r) {
    if (center.empty()) throw ContractError("BallSet: empty center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractError("BallSet: radius must be positive");
    if (!center.all_finite()) throw ContractError("BallSet: center must be finite");
}

SimplexSet::SimplexSet(std::size_t d) : dim(d) {
    if (dim < 1) throw ContractError("SimplexSet: dimension must be at least 1");
}

Vector project_box(const Vector& x, const BoxSet& set) {
    require_dim(x, set.dimension(), "project_box");
    Vector p(x.size());
    simd::clamp(x.span(), set.lower.span(), set.upper.span(), p.span());
    return p;
}

Vector project_ball(const Vector& x, const BallSet& set) {
    require_dim(x, set.dimension(), "project_ball");
    const double r = distance(x, set.center);
    if (r <= set.radius) return x;
    return add_scaled(set.center, set.radius / r, x - set.center);
}

Vector project_simplex(const Vector& x, const SimplexSet& set) {
    require_dim(x, set.dimension(), "project_simplex");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    // Largest k with sorted[k-1] - (sum_{j<k} sorted[j] - 1)/k > 0 fixes the threshold.
    double prefix = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        const double candidate = (prefix - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) tau = candidate;
    }
    Vector p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i] - tau, 0.0);
    return p;
}

Vector lmo_box(const Vector& g, const BoxSet& set) {
    require_dim(g, set.dimension(), "lmo_box");
    Vector y(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = g[i] < 0.0 ? set.upper[i] : set.lower[i];
    return y;
}

Vector lmo_ball(const Vector& g, const BallSet& set) {
    require_dim(g, set.dimension(), "lmo_ball");
    const double gn = norm(g);
    if (gn == 0.0) return set.center;
    return add_scaled(set.center, -set.radius / gn, g);
}

Vector lmo_simplex(const Vector& g, const SimplexSet& set) {
    require_dim(g, set.dimension(), "lmo_simplex");
    // min_element returns the first minimum, which is the tie rule.
    const auto it = std::min_element(g.begin(), g.end());
    Vector y(g.size());
    y[static_cast<std::size_t>(it - g.begin())] = 1.0;
    return y;
}

bool box_contains(const Vector& x, const BoxSet& set, double tol) {
    if (x.size() != set.dimension() || !x.all_finite()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < set.lower[i] - tol || x[i] > set.upper[i] + tol) return false;
    }
    return true;
}

bool ball_contains(const Vector& x, const BallSet& set, double tol) {
    if (x.size() != set.dimension() || !x.all_finite()) return false;
    return distance(x, set.center) <= set.radius + tol;
}

bool simplex_contains(const Vector& x, const SimplexSet& set, double tol) {
    if (x.size() != set.dimension() || !x.all_finite()) return false;
    double sum = 0.0;
    for (double v : x) {
        if (v < -tol) return false;
        sum += v;
    }
    return std::fabs(sum - 1.0) <= tol;
}

FeasibleSet make_feasible_set(const BoxSet& set) {
    FeasibleSet fs;
    fs.dimension = set.dimension();
    fs.project = [set](const Vector& x) { return project_box(x, set); };
    fs.lmo = [set](const Vector& g) { return lmo_box(g, set); };
    fs.diameter = distance(set.upper, set.lower);
    fs.contains = [set](const Vector& x, double tol) { return box_contains(x, set, tol); };
    std::ostringstream os;
    os.precision(17);
    os << "box(";
    for (std::size_t i = 0; i < set.dimension(); ++i) {
        os << (i ? ";" : "") << "[" << set.lower[i] << "," << set.upper[i] << "]";
    }
    os << ")";
    fs.description = os.str();
    return fs;
}

FeasibleSet make_feasible_set(const BallSet& set) {
    FeasibleSet fs;
    fs.dimension = set.dimension();
    fs.project = [set](const Vector& x) { return project_ball(x, set); };
    fs.lmo = [set](const Vector& g) { return lmo_ball(g, set); };
    fs.diameter = 2.0 * set.radius;
    fs.contains = [set](const Vector& x, double tol) { return ball_contains(x, set, tol); };
    std::ostringstream os;
    os.precision(17);
    os << "ball(center=";
    for (std::size_t i = 0; i < set.dimension(); ++i) os << (i ? ";" : "") << set.center[i];
    os << ",radius=" << set.radius << ")";
    fs.description = os.str();
    return fs;
}

FeasibleSet make_feasible_set(const SimplexSet& set) {
    FeasibleSet fs;
    fs.dimension = set.dimension();
    fs.project = [set](const Vector& x) { return project_simplex(x, set); };
    fs.lmo = [set](const Vector& g) { return lmo_simplex(g, set); };
    fs.diameter = set.dimension() > 1 ? std::sqrt(2.0) : 0.0;
    fs.contains = [set](const Vector& x, double tol) { return simplex_contains(x, set, tol); };
    fs.description = "simplex(" + std::to_string(set.dimension()) + ")";
    return fs;
}

}  // namespace regopt
