#pragma once

// Data-parallel inner loops used by the prox, graph and eigen code.
//
// Every kernel has a scalar reference implementation. Vector variants are
// compiled per ISA and selected once at runtime from CPU features; the
// PROXNET_SIMD environment variable (scalar|avx2|neon) overrides the choice.
//
// Elementwise kernels (axpy, clamp, rotate, scale) are bitwise identical across
// backends. Reductions (dot, sq_dist, weighted_sq_dist) use a different
// summation order per backend and agree to rounding only.

#include <cstddef>
#include <span>
#include <string_view>

namespace proxnet::simd {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum (a_i - b_i)^2
    double (*sq_dist)(const double* a, const double* b, std::size_t n);
    /// sum w_i (a_i - b_i)^2
    double (*weighted_sq_dist)(const double* a, const double* b, const double* w, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// out = min(max(x, lo), hi)
    void (*clamp)(const double* x, const double* lo, const double* hi, double* out, std::size_t n);
    /// (a, b) <- (c a - s b, s a + c b)
    void (*rotate)(double* a, double* b, double c, double s, std::size_t n);
    /// x *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels();
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels();
#endif

bool supported(Backend b) noexcept;
/// Best backend the running CPU supports.
Backend detect() noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument when the CPU lacks the backend.
void set_backend(Backend b);
const KernelTable& kernels() noexcept;
const KernelTable& kernels_for(Backend b);

std::string_view name(Backend b) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}
inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    return kernels().sq_dist(a.data(), b.data(), a.size());
}
inline double weighted_sq_dist(std::span<const double> a, std::span<const double> b,
                               std::span<const double> w) {
    return kernels().weighted_sq_dist(a.data(), b.data(), w.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}
inline void clamp(std::span<const double> x, std::span<const double> lo, std::span<const double> hi,
                  std::span<double> out) {
    kernels().clamp(x.data(), lo.data(), hi.data(), out.data(), x.size());
}
inline void rotate(std::span<double> a, std::span<double> b, double c, double s) {
    kernels().rotate(a.data(), b.data(), c, s, a.size());
}
inline void scale(double alpha, std::span<double> x) { kernels().scale(alpha, x.data(), x.size()); }

}  // namespace proxnet::simd
