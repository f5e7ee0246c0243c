#pragma once

// Dense vector kernels used by every solver inner loop.
//
// Two implementations exist: a portable scalar reference and an AVX2 variant.
// The active one is picked once at startup from the CPU feature bits (or the
// REGOPT_SIMD environment variable: "scalar" or "avx2") and can be switched
// explicitly, which the equivalence tests rely on.
//
// Elementwise kernels are bit-identical across backends. Reductions (dot,
// norm_sq, dist_sq) differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace regopt::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*norm_sq)(const double* x, std::size_t n);
    double (*dist_sq)(const double* x, const double* y, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out = x + a * y
    void (*add_scaled)(const double* x, double a, const double* y, double* out, std::size_t n);
    // out = x - y
    void (*sub)(const double* x, const double* y, double* out, std::size_t n);
    // out = min(max(x, lo), hi)
    void (*clamp)(const double* x, const double* lo, const double* hi, double* out, std::size_t n);
    // returns max |x_i - y_i|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the build has no AVX2 translation unit.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

Backend active_backend();
std::string_view backend_name(Backend b);
// Throws std::invalid_argument if the backend is unavailable on this host.
void set_backend(Backend b);
const KernelTable& kernels();

// RAII switch used by tests.
class ScopedBackend {
public:
    explicit ScopedBackend(Backend b) : previous_(active_backend()) { set_backend(b); }
    ~ScopedBackend() { set_backend(previous_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend previous_;
};

inline double dot(std::span<const double> x, std::span<const double> y) {
    return kernels().dot(x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const double> x) { return kernels().norm_sq(x.data(), x.size()); }
inline double dist_sq(std::span<const double> x, std::span<const double> y) {
    return kernels().dist_sq(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    kernels().axpy(a, x.data(), y.data(), x.size());
}
inline void add_scaled(std::span<const double> x, double a, std::span<const double> y, std::span<double> out) {
    kernels().add_scaled(x.data(), a, y.data(), out.data(), x.size());
}
inline void sub(std::span<const double> x, std::span<const double> y, std::span<double> out) {
    kernels().sub(x.data(), y.data(), out.data(), x.size());
}
inline void clamp(std::span<const double> x, std::span<const double> lo, std::span<const double> hi,
                  std::span<double> out) {
    kernels().clamp(x.data(), lo.data(), hi.data(), out.data(), x.size());
}
inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    return kernels().max_abs_diff(x.data(), y.data(), x.size());
}

}  // namespace regopt::simd
