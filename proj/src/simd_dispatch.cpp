#include "proxnet/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace proxnet::simd {
namespace {

Backend initial_backend() noexcept {
    if (const char* env = std::getenv("PROXNET_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && supported(Backend::avx2)) return Backend::avx2;
        if (v == "neon" && supported(Backend::neon)) return Backend::neon;
    }
    return detect();
}

std::atomic<Backend>& active() {
    static std::atomic<Backend> backend{initial_backend()};
    return backend;
}

}  // namespace

bool supported(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detect() noexcept {
    if (supported(Backend::avx2)) return Backend::avx2;
    if (supported(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Backend active_backend() noexcept { return active().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!supported(b)) throw std::invalid_argument("SIMD backend not supported on this CPU: " + std::string(name(b)));
    active().store(b, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Backend b) {
    if (!supported(b)) throw std::invalid_argument("SIMD backend not supported on this CPU: " + std::string(name(b)));
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return avx2_kernels();
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return neon_kernels();
#endif
        default:
            return scalar_kernels();
    }
}

const KernelTable& kernels() noexcept {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return avx2_kernels();
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return neon_kernels();
#endif
        default:
            return scalar_kernels();
    }
}

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "unknown";
}

}  // namespace proxnet::simd
