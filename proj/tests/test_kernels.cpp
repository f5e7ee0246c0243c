#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "regopt/bench/generators.hpp"
#include "regopt/simd/kernels.hpp"
#include "regopt/solvers.hpp"

using namespace regopt;
namespace simd = regopt::simd;

namespace {

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng, double scale = 10.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// Lengths that exercise empty input, pure tails, one block and block plus tail.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1000, 1023};

// Summation-order error bound for a length-n reduction of |terms| summing to `mag`.
double reduction_tol(std::size_t n, double mag) {
    return 2.0 * static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon() * mag;
}

}  // namespace

TEST_CASE("scalar backend is always available and selectable") {
    simd::ScopedBackend guard(simd::Backend::Scalar);
    CHECK(simd::active_backend() == simd::Backend::Scalar);
    CHECK(simd::backend_name(simd::Backend::Scalar) == "scalar");
    CHECK(&simd::kernels() == &simd::scalar_kernels());
}

TEST_CASE("avx2 availability matches the build and the cpu") {
    if (simd::avx2_kernels() == nullptr || !simd::cpu_supports_avx2()) {
        CHECK_THROWS_AS(simd::set_backend(simd::Backend::Avx2), std::invalid_argument);
        return;
    }
    simd::ScopedBackend guard(simd::Backend::Avx2);
    CHECK(simd::active_backend() == simd::Backend::Avx2);
    CHECK(&simd::kernels() == simd::avx2_kernels());
}

TEST_CASE("scalar reference kernels on hand values") {
    const auto& k = simd::scalar_kernels();
    const double x[] = {1.0, 2.0, 3.0};
    const double y[] = {4.0, -5.0, 6.0};
    CHECK(k.dot(x, y, 3) == 12.0);
    CHECK(k.norm_sq(x, 3) == 14.0);
    CHECK(k.dist_sq(x, y, 3) == 9.0 + 49.0 + 9.0);
    CHECK(k.max_abs_diff(x, y, 3) == 7.0);
    double out[3];
    k.add_scaled(x, 2.0, y, out, 3);
    CHECK(out[0] == 9.0);
    CHECK(out[1] == -8.0);
    CHECK(out[2] == 15.0);
    k.sub(x, y, out, 3);
    CHECK(out[1] == 7.0);
    double z[] = {1.0, 1.0, 1.0};
    k.axpy(-1.0, x, z, 3);
    CHECK(z[2] == -2.0);
    const double lo[] = {0.0, 0.0, 0.0};
    const double hi[] = {1.0, 1.0, 1.0};
    const double w[] = {2.0, -1.0, 0.5};
    k.clamp(w, lo, hi, out, 3);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.5);
}

TEST_CASE("avx2 kernels match the scalar reference") {
    const simd::KernelTable* avx = simd::avx2_kernels();
    if (avx == nullptr || !simd::cpu_supports_avx2()) {
        MESSAGE("avx2 variant not available on this host; equivalence test skipped");
        return;
    }
    const auto& ref = simd::scalar_kernels();
    std::mt19937_64 rng(2024);
    for (std::size_t n : kLengths) {
        CAPTURE(n);
        const auto x = random_values(n, rng);
        const auto y = random_values(n, rng);
        const double a = -0.731;

        SUBCASE("elementwise kernels are bit-identical") {
            std::vector<double> o1(n), o2(n);
            ref.add_scaled(x.data(), a, y.data(), o1.data(), n);
            avx->add_scaled(x.data(), a, y.data(), o2.data(), n);
            CHECK(o1 == o2);
            ref.sub(x.data(), y.data(), o1.data(), n);
            avx->sub(x.data(), y.data(), o2.data(), n);
            CHECK(o1 == o2);
            std::vector<double> z1 = y, z2 = y;
            ref.axpy(a, x.data(), z1.data(), n);
            avx->axpy(a, x.data(), z2.data(), n);
            CHECK(z1 == z2);
            std::vector<double> lo(n, -3.0), hi(n, 4.0);
            ref.clamp(x.data(), lo.data(), hi.data(), o1.data(), n);
            avx->clamp(x.data(), lo.data(), hi.data(), o2.data(), n);
            CHECK(o1 == o2);
            CHECK(ref.max_abs_diff(x.data(), y.data(), n) == avx->max_abs_diff(x.data(), y.data(), n));
        }

        SUBCASE("reductions agree up to summation order") {
            double mag_dot = 0.0, mag_x = 0.0, mag_d = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mag_dot += std::abs(x[i] * y[i]);
                mag_x += x[i] * x[i];
                mag_d += (x[i] - y[i]) * (x[i] - y[i]);
            }
            CHECK(std::abs(ref.dot(x.data(), y.data(), n) - avx->dot(x.data(), y.data(), n)) <=
                  reduction_tol(n, mag_dot));
            CHECK(std::abs(ref.norm_sq(x.data(), n) - avx->norm_sq(x.data(), n)) <= reduction_tol(n, mag_x));
            CHECK(std::abs(ref.dist_sq(x.data(), y.data(), n) - avx->dist_sq(x.data(), y.data(), n)) <=
                  reduction_tol(n, mag_d));
        }
    }
}

TEST_CASE("clamp handles equal bounds and infinities the same way on both backends") {
    const simd::KernelTable* avx = simd::avx2_kernels();
    if (avx == nullptr || !simd::cpu_supports_avx2()) return;
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> x{-inf, inf, 0.25, -7.0, 3.0, 0.0, 1e300, -1e-300, 2.0};
    const std::vector<double> lo{0.0, 0.0, 0.25, -inf, 3.0, -1.0, -inf, 0.0, 2.0};
    const std::vector<double> hi{1.0, 1.0, 0.25, inf, 3.0, 1.0, inf, 0.0, 2.0};
    std::vector<double> o1(x.size()), o2(x.size());
    simd::scalar_kernels().clamp(x.data(), lo.data(), hi.data(), o1.data(), x.size());
    avx->clamp(x.data(), lo.data(), hi.data(), o2.data(), x.size());
    CHECK(o1 == o2);
}

TEST_CASE("solver results agree across backends") {
    if (simd::avx2_kernels() == nullptr || !simd::cpu_supports_avx2()) return;
    const auto gen = bench::make_random_rankdef(12, 20, 4, 7);
    const GeometricSchedule sched(1.0, 0.5, 0.5);
    StopPolicy stop;
    stop.epsilon_min = 1e-3;
    const MethodConstants mc = gprm_constants(gen.problem, sched, 0.5, 0.5);
    SolverTrace a, b;
    {
        simd::ScopedBackend guard(simd::Backend::Scalar);
        a = run_gprm(gen.problem, sched, mc, gen.default_start, stop);
    }
    {
        simd::ScopedBackend guard(simd::Backend::Avx2);
        b = run_gprm(gen.problem, sched, mc, gen.default_start, stop);
    }
    REQUIRE(a.outer_records.size() == b.outer_records.size());
    CHECK(distance(a.final_point, b.final_point) < 1e-8);
}
