// Times each SIMD kernel per backend: bench_kernels [length] [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <random>
#include <vector>

#include "proxnet/simd.hpp"

namespace simd = proxnet::simd;

namespace {

template <class F>
double ns_per_element(F&& f, std::size_t n, std::size_t reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < reps; ++r) f();
    const double ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count();
    return ns / static_cast<double>(n * reps);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4096;
    const std::size_t reps = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> a(n), b(n), w(n), lo(n, -0.5), hi(n, 0.5), out(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = u(gen);
        b[i] = u(gen);
        w[i] = 1.0 + u(gen) * 0.5;
    }

    std::printf("%-8s %10s %10s %10s %10s %10s %10s %10s\n", "backend", "dot", "sq_dist", "wsq_dist", "axpy", "clamp",
                "rotate", "scale");
    volatile double sink = 0;
    for (auto backend : {simd::Backend::scalar, simd::Backend::avx2, simd::Backend::neon}) {
        if (!simd::supported(backend)) continue;
        const auto& k = simd::kernels_for(backend);
        const double t[] = {
            ns_per_element([&] { sink = sink + k.dot(a.data(), b.data(), n); }, n, reps),
            ns_per_element([&] { sink = sink + k.sq_dist(a.data(), b.data(), n); }, n, reps),
            ns_per_element([&] { sink = sink + k.weighted_sq_dist(a.data(), b.data(), w.data(), n); }, n, reps),
            ns_per_element([&] { k.axpy(1e-9, a.data(), b.data(), n); }, n, reps),
            ns_per_element([&] { k.clamp(a.data(), lo.data(), hi.data(), out.data(), n); }, n, reps),
            ns_per_element([&] { k.rotate(a.data(), b.data(), 1.0, 0.0, n); }, n, reps),
            ns_per_element([&] { k.scale(1.0, a.data(), n); }, n, reps),
        };
        std::printf("%-8s", std::string(simd::name(backend)).c_str());
        for (double v : t) std::printf(" %10.3f", v);
        std::printf("   ns/element\n");
    }
    return 0;
}
