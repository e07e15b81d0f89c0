#include "proxnet/simd.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace proxnet::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double weighted_sq_dist(const double* a, const double* b, const double* w, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + i), vmulq_f64(d, d)));
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += w[i] * (d * d);
    }
    return total;
}

// vmulq/vaddq kept separate: vfmaq would change rounding against the scalar path.
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void clamp(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vx = vld1q_f64(x + i);
        const float64x2_t vlo = vld1q_f64(lo + i);
        const float64x2_t vhi = vld1q_f64(hi + i);
        const float64x2_t m = vbslq_f64(vcgtq_f64(vx, vlo), vx, vlo);
        vst1q_f64(out + i, vbslq_f64(vcltq_f64(m, vhi), m, vhi));
    }
    for (; i < n; ++i) {
        const double m = x[i] > lo[i] ? x[i] : lo[i];
        out[i] = m < hi[i] ? m : hi[i];
    }
}

void rotate(double* a, double* b, double c, double s, std::size_t n) {
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t va = vld1q_f64(a + i);
        const float64x2_t vb = vld1q_f64(b + i);
        vst1q_f64(a + i, vsubq_f64(vmulq_f64(vc, va), vmulq_f64(vs, vb)));
        vst1q_f64(b + i, vaddq_f64(vmulq_f64(vs, va), vmulq_f64(vc, vb)));
    }
    for (; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        a[i] = c * ai - s * bi;
        b[i] = s * ai + c * bi;
    }
}

void scale(double alpha, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] = alpha * x[i];
}

}  // namespace

const KernelTable& neon_kernels() {
    static const KernelTable table{dot, sq_dist, weighted_sq_dist, axpy, clamp, rotate, scale};
    return table;
}

}  // namespace proxnet::simd

#endif
