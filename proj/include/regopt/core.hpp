#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regopt/errors.hpp"

namespace regopt {

// Absolute tolerance for set membership checks everywhere in the library.
inline constexpr double kMembershipTol = 1e-10;

// Finite-dimensional element of the ambient Hilbert space.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0) : v_(n, value) {}
    Vector(std::initializer_list<double> values) : v_(values) {}
    explicit Vector(std::vector<double> values) : v_(std::move(values)) {}

    std::size_t size() const noexcept { return v_.size(); }
    bool empty() const noexcept { return v_.empty(); }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    double* data() noexcept { return v_.data(); }
    const double* data() const noexcept { return v_.data(); }
    auto begin() noexcept { return v_.begin(); }
    auto end() noexcept { return v_.end(); }
    auto begin() const noexcept { return v_.begin(); }
    auto end() const noexcept { return v_.end(); }

    std::span<double> span() noexcept { return v_; }
    std::span<const double> span() const noexcept { return v_; }
    const std::vector<double>& values() const noexcept { return v_; }

    bool all_finite() const noexcept;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double a);

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> v_;
};

Vector operator+(const Vector& x, const Vector& y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator*(double a, const Vector& x);

// Throws ContractError when the sizes differ.
void require_same_size(const Vector& x, const Vector& y, const char* what);

double dot(const Vector& x, const Vector& y);
double norm_sq(const Vector& x);
double norm(const Vector& x);
double distance(const Vector& x, const Vector& y);
// x + a * y
Vector add_scaled(const Vector& x, double a, const Vector& y);
// x += a * y
void axpy(double a, const Vector& y, Vector& x);

// Dense row-major matrix, just enough for the generated quadratics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const std::vector<double>& values() const noexcept { return data_; }

    Vector multiply(const Vector& x) const;
    Vector multiply_transposed(const Vector& r) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Objective {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    // Lipschitz constant of the gradient.
    double lipschitz = 0.0;
    std::string label;
};

struct FeasibleSet {
    std::size_t dimension = 0;
    std::function<Vector(const Vector&)> project;  // may be empty
    std::function<Vector(const Vector&)> lmo;      // may be empty
    std::optional<double> diameter;                // absent for unbounded sets
    std::function<bool(const Vector&, double)> contains;
    std::string description;

    bool has_projection() const { return static_cast<bool>(project); }
    bool has_lmo() const { return static_cast<bool>(lmo); }
    bool is_bounded() const { return diameter.has_value(); }
};

struct Problem {
    Objective objective;
    FeasibleSet set;
    std::optional<double> known_fstar;
    std::optional<Vector> known_xstar_n;

    std::size_t dimension() const { return set.dimension; }
    // Checks the structural invariants; throws ContractError on violation.
    void validate() const;
};

// Per-run oracle accounting. Owned by whoever runs a solver; never shared.
struct OracleCounters {
    std::uint64_t gradient_evals = 0;
    std::uint64_t value_evals = 0;
    std::uint64_t projections = 0;
    std::uint64_t lmo_calls = 0;
    std::uint64_t linesearch_trials = 0;
    std::uint64_t inner_iterations = 0;

    friend bool operator==(const OracleCounters&, const OracleCounters&) = default;
};

// Max over coordinates of |central difference - gradient| / (1 + |gradient|).
double check_gradient(const Objective& obj, const Vector& x, double h);

// Spectral norm of A^T A by power iteration; the gradient Lipschitz constant of 0.5 |Ax - b|^2.
double estimate_lipschitz_quadratic(const Matrix& a);

// Standard objectives used by the generators and tests.
Objective linear_objective(Vector c);
Objective zero_objective(std::size_t dim);
// 0.5 |x - center|^2
Objective half_squared_distance(Vector center);
// 0.5 |A x - b|^2, L from estimate_lipschitz_quadratic.
Objective least_squares_objective(Matrix a, Vector b);

}  // namespace regopt
