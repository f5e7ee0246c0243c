#include "regopt/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "regopt/simd/kernels.hpp"

namespace regopt {

bool Vector::all_finite() const noexcept {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

void require_same_size(const Vector& x, const Vector& y, const char* what) {
    if (x.size() != y.size()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << x.size() << " vs " << y.size() << ")";
        throw ContractError(os.str());
    }
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_size(*this, other, "Vector::operator+=");
    simd::axpy(1.0, other.span(), span());
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_size(*this, other, "Vector::operator-=");
    simd::sub(span(), other.span(), span());
    return *this;
}

Vector& Vector::operator*=(double a) {
    for (double& x : v_) x *= a;
    return *this;
}

Vector operator+(const Vector& x, const Vector& y) {
    Vector r = x;
    r += y;
    return r;
}

Vector operator-(const Vector& x, const Vector& y) {
    require_same_size(x, y, "operator-");
    Vector r(x.size());
    simd::sub(x.span(), y.span(), r.span());
    return r;
}

Vector operator*(double a, const Vector& x) {
    Vector r = x;
    r *= a;
    return r;
}

double dot(const Vector& x, const Vector& y) {
    require_same_size(x, y, "dot");
    return simd::dot(x.span(), y.span());
}

double norm_sq(const Vector& x) { return simd::norm_sq(x.span()); }

double norm(const Vector& x) { return std::sqrt(norm_sq(x)); }

double distance(const Vector& x, const Vector& y) {
    require_same_size(x, y, "distance");
    return std::sqrt(simd::dist_sq(x.span(), y.span()));
}

Vector add_scaled(const Vector& x, double a, const Vector& y) {
    require_same_size(x, y, "add_scaled");
    Vector r(x.size());
    simd::add_scaled(x.span(), a, y.span(), r.span());
    return r;
}

void axpy(double a, const Vector& y, Vector& x) {
    require_same_size(x, y, "axpy");
    simd::axpy(a, y.span(), x.span());
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ContractError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::multiply(const Vector& x) const {
    if (x.size() != cols_) throw ContractError("Matrix::multiply: dimension mismatch");
    Vector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r[i] = simd::dot(row(i), x.span());
    return r;
}

Vector Matrix::multiply_transposed(const Vector& r) const {
    if (r.size() != rows_) throw ContractError("Matrix::multiply_transposed: dimension mismatch");
    Vector out(cols_);
    for (std::size_t i = 0; i < rows_; ++i) simd::axpy(r[i], row(i), out.span());
    return out;
}

void Problem::validate() const {
    if (set.dimension == 0) throw ContractError("Problem: zero dimension");
    if (!objective.value || !objective.gradient) throw ContractError("Problem: objective is incomplete");
    if (!(objective.lipschitz >= 0.0) || !std::isfinite(objective.lipschitz)) {
        throw ContractError("Problem: Lipschitz constant must be finite and non-negative");
    }
    if (!set.has_projection() && !set.has_lmo()) {
        throw ContractError("Problem: feasible set needs a projection or a linear minimization oracle");
    }
    if (!set.contains) throw ContractError("Problem: feasible set has no membership test");
    if (known_xstar_n) {
        if (known_xstar_n->size() != set.dimension) throw ContractError("Problem: x*_n dimension mismatch");
        if (!set.contains(*known_xstar_n, kMembershipTol)) throw ContractError("Problem: x*_n is infeasible");
        if (known_fstar && std::fabs(objective.value(*known_xstar_n) - *known_fstar) > 1e-10) {
            throw ContractError("Problem: f(x*_n) disagrees with f*");
        }
    }
}

double check_gradient(const Objective& obj, const Vector& x, double h) {
    if (!(h > 1e-10 && h < 1e-2)) throw ContractError("check_gradient: h must lie in (1e-10, 1e-2)");
    if (!x.all_finite()) throw ContractError("check_gradient: non-finite point");
    const Vector g = obj.gradient(x);
    require_same_size(x, g, "check_gradient");
    double worst = 0.0;
    Vector probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = obj.value(probe);
        probe[i] = x[i] - h;
        const double fm = obj.value(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw OracleFailure("check_gradient: non-finite objective value near x");
        }
        const double fd = (fp - fm) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd - g[i]) / (1.0 + std::fabs(g[i])));
    }
    return worst;
}

double estimate_lipschitz_quadratic(const Matrix& a) {
    const std::size_t n = a.cols();
    if (n == 0) return 0.0;
    for (double v : a.values()) {
        if (!std::isfinite(v)) throw ContractError("estimate_lipschitz_quadratic: non-finite entry");
    }
    // Fixed seed: the estimate must be reproducible.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Vector v(n);
    for (double& c : v) c = unif(rng);
    v *= 1.0 / norm(v);

    double rayleigh = 0.0;
    constexpr int kMaxIter = 200000;
    for (int it = 0; it < kMaxIter; ++it) {
        const Vector w = a.multiply_transposed(a.multiply(v));
        const double wn = norm(w);
        if (wn == 0.0) return 0.0;
        const double next = dot(v, w);
        v = (1.0 / wn) * w;
        if (it > 0 && std::fabs(next - rayleigh) <= 1e-10 * std::fabs(next)) {
            // Rayleigh quotient of the updated vector is at least as accurate.
            const Vector av = a.multiply(v);
            return std::max(next, norm_sq(av));
        }
        rayleigh = next;
    }
    return rayleigh;
}

Objective linear_objective(Vector c) {
    Objective obj;
    obj.value = [c](const Vector& x) { return dot(c, x); };
    obj.gradient = [c](const Vector&) { return c; };
    obj.lipschitz = 0.0;
    obj.label = "linear";
    return obj;
}

Objective zero_objective(std::size_t dim) {
    Objective obj;
    obj.value = [](const Vector&) { return 0.0; };
    obj.gradient = [dim](const Vector&) { return Vector(dim); };
    obj.lipschitz = 0.0;
    obj.label = "zero";
    return obj;
}

Objective half_squared_distance(Vector center) {
    Objective obj;
    obj.value = [center](const Vector& x) { return 0.5 * norm_sq(x - center); };
    obj.gradient = [center](const Vector& x) { return x - center; };
    obj.lipschitz = 1.0;
    obj.label = "half_squared_distance";
    return obj;
}

Objective least_squares_objective(Matrix a, Vector b) {
    if (a.rows() != b.size()) throw ContractError("least_squares_objective: rows of A must match b");
    Objective obj;
    obj.lipschitz = estimate_lipschitz_quadratic(a);
    obj.value = [a, b](const Vector& x) {
        const Vector r = a.multiply(x) - b;
        return 0.5 * norm_sq(r);
    };
    obj.gradient = [a, b](const Vector& x) { return a.multiply_transposed(a.multiply(x) - b); };
    obj.label = "least_squares";
    return obj;
}

}  // namespace regopt
