#include "regopt/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace regopt::simd {

#ifndef REGOPT_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(REGOPT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend initial_backend() {
    if (const char* env = std::getenv("REGOPT_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_supports_avx2()) return Backend::Avx2;
    }
    return cpu_supports_avx2() ? Backend::Avx2 : Backend::Scalar;
}

const KernelTable* table_for(Backend b) {
    return b == Backend::Avx2 ? avx2_kernels() : &scalar_kernels();
}

struct State {
    std::atomic<Backend> backend;
    std::atomic<const KernelTable*> table;
    State() {
        const Backend b = initial_backend();
        backend.store(b);
        table.store(table_for(b));
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend active_backend() { return state().backend.load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !cpu_supports_avx2()) {
        throw std::invalid_argument("AVX2 kernels are not available on this host");
    }
    state().backend.store(b);
    state().table.store(table_for(b));
}

const KernelTable& kernels() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace regopt::simd
