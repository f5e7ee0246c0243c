#include "regopt/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace regopt::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double norm_sq_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double dist_sq_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_scalar(const double* x, double a, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub_scalar(const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

// Same operand order as _mm256_min_pd(_mm256_max_pd(x, lo), hi) so NaN and
// signed-zero behavior match the vector path.
void clamp_scalar(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x[i] > lo[i] ? x[i] : lo[i];
        out[i] = a < hi[i] ? a : hi[i];
    }
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

constexpr KernelTable kScalarTable{
    dot_scalar,  norm_sq_scalar, dist_sq_scalar, axpy_scalar,
    add_scaled_scalar, sub_scalar, clamp_scalar, max_abs_diff_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace regopt::simd
