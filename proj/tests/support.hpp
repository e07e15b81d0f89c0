#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "proxnet/certify.hpp"
#include "proxnet/dynamics.hpp"
#include "proxnet/graph.hpp"
#include "proxnet/matrix.hpp"
#include "proxnet/prox.hpp"

namespace testing {

using namespace proxnet;

inline Matrix ref_p() { return {{0.5, 0.5, 0, 0}, {0.4, 0.5, 0.1, 0}, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}}; }
inline Vector ref_q() { return {0.186, 0.214, 0.055, 0.03}; }

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
    }
    Vector vector(std::size_t n, double lo, double hi) {
        Vector v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

/// Row-stochastic, self-loops >= min_loop, strongly connected through a random
/// Hamiltonian cycle plus random extra edges.
inline Matrix random_adjacency(Rng& rng, std::size_t n, double min_loop = 0.1) {
    if (n == 1) return Matrix{{1.0}};
    Matrix p(n, n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::size_t k = 0; k < n; ++k) p(perm[k], perm[(k + 1) % n]) = rng.uniform(0.1, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rng.uniform() < 0.3) p(i, j) = rng.uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += p(i, j);
        const double loop = rng.uniform(min_loop, 0.9);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) p(i, j) *= (1.0 - loop) / off;
        p(i, i) = loop;
    }
    return p;
}

/// Symmetric doubly stochastic with every eigenvalue >= 0: (I + W) / 2 for a
/// symmetric stochastic W built from Metropolis weights on a random connected graph.
inline Matrix random_lazy_symmetric(Rng& rng, std::size_t n) {
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = rng.index(0, i - 1);
        edge[i][j] = edge[j][i] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.3) edge[i][j] = edge[j][i] = true;
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += edge[i][j];
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!edge[i][j]) continue;
            w(i, j) = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
            off += w(i, j);
        }
        w(i, i) = 1.0 - off;
    }
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = 0.5 * w(i, j) + (i == j ? 0.5 : 0.0);
    return p;
}

inline Matrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) s(i, j) = s(j, i) = rng.uniform(-scale, scale);
    return s;
}

/// Number of eigenvalues of symmetric s strictly below sigma, from the inertia
/// of s - sigma I (Sylvester) via an LDL^T factorization with symmetric pivoting.
inline std::size_t count_below(const Matrix& s, double sigma) {
    const std::size_t n = s.rows();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = s(i, j) - (i == j ? sigma : 0.0);
    std::size_t negative = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][i]) > std::abs(a[piv][piv])) piv = i;
        std::swap(a[k], a[piv]);
        for (auto& row : a) std::swap(row[k], row[piv]);
        double d = a[k][k];
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++negative;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a[i][k] / d;
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= l * a[k][j];
        }
    }
    return negative;
}

/// k-th smallest eigenvalue (0-based) of symmetric s by bisection on the inertia count.
inline double bisect_eigenvalue(const Matrix& s, std::size_t k, double tol = 1e-13) {
    double bound = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < s.cols(); ++j) r += std::abs(s(i, j));
        bound = std::max(bound, r);
    }
    double lo = -bound - 1.0, hi = bound + 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(s, mid) > k) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Left Perron vector: pi^T P = pi^T with unit sum, by power iteration.
inline Vector stationary(const Matrix& p) {
    const std::size_t n = p.rows();
    Vector pi(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 200000; ++it) {
        Vector next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * p(i, j);
        double delta = 0;
        for (std::size_t j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - pi[j]));
        pi = next;
        if (delta < 1e-17) break;
    }
    return pi;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace testing
