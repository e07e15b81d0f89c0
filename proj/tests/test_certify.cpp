#include <doctest.h>

#include "proxnet/certify.hpp"
#include "proxnet/errors.hpp"
#include "support.hpp"

using namespace proxnet;
using testing::Rng;

namespace {

// (2 eta - 1) Q + (1 - eta)(P^T Q + Q P) - P^T Q P, computed by plain loops.
Matrix lmi_expanded(const Matrix& q, const Matrix& p, double eta) {
    const std::size_t n = p.rows();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double ptq = 0, qp = 0, ptqp = 0;
            for (std::size_t k = 0; k < n; ++k) {
                ptq += p(k, i) * q(k, j);
                qp += q(i, k) * p(k, j);
                for (std::size_t l = 0; l < n; ++l) ptqp += p(k, i) * q(k, l) * p(l, j);
            }
            m(i, j) = (2 * eta - 1) * q(i, j) + (1 - eta) * (ptq + qp) - ptqp;
        }
    return symmetrized(m);
}


}  // namespace

TEST_CASE("Jacobi on small known matrices") {
    const auto e = jacobi_eigen(Matrix{{2, 1}, {1, 2}});
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
    CHECK(e.vectors(0, 0) > 0);
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(std::sqrt(0.5)));

    const auto d = jacobi_eigen(Matrix::diagonal(Vector{3, -1, 2}));
    CHECK(d.values == Vector{-1, 2, 3});

    const auto one = symmetric_min_eig(Matrix{{-4.5}});
    CHECK(one.value == -4.5);
    CHECK(one.vector == Vector{1.0});
}

TEST_CASE("Jacobi agrees with the inertia bisection oracle") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = t < 150 ? 4 : rng.index(1, 12);
        const Matrix s = testing::random_symmetric(rng, n, rng.uniform(0.1, 10));
        const auto e = jacobi_eigen(s);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e.values[k] - testing::bisect_eigenvalue(s, k)) <= 1e-10);
        for (std::size_t k = 0; k < n; ++k) {
            const auto v = e.vectors.row(k);
            const Vector sv = s * v;
            double res = 0, norm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                res = std::max(res, std::abs(sv[i] - e.values[k] * v[i]));
                norm += v[i] * v[i];
            }
            CHECK(res <= 1e-10 * std::max(1.0, s.frobenius()));
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                double dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += e.vectors(a, i) * e.vectors(b, i);
                CHECK(std::abs(dot) <= 1e-10);
            }
    }
}

TEST_CASE("Jacobi input checks") {
    CHECK_THROWS_AS(jacobi_eigen(Matrix(2, 3)), StructuralError);
    CHECK_THROWS_AS(jacobi_eigen(Matrix{{1, 2}, {0, 1}}), StructuralError);
}

TEST_CASE("LMI residual matches the expanded form and is exactly symmetric") {
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = rng.index(1, 8);
        const Matrix p = testing::random_adjacency(rng, n);
        const Matrix q = Matrix::diagonal(rng.vector(n, 0.01, 2));
        const double eta = rng.uniform(0.05, 0.95);
        const Matrix m = lmi_residual(q, p, eta);
        CHECK(m.asymmetry() == 0.0);
        CHECK(max_abs_diff(m, lmi_expanded(q, p, eta)) <= 1e-12);
        CHECK(std::abs(symmetric_min_eig(m).value - testing::bisect_eigenvalue(m, 0)) <= 1e-10);
    }
}

TEST_CASE("LMI residual vanishes exactly for the identity graph") {
    Rng rng(43);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = rng.index(1, 7);
        const Matrix q = symmetrized(testing::random_symmetric(rng, n));
        const Matrix m = lmi_residual(q, Matrix::identity(n), rng.uniform(0.01, 0.99));
        for (double v : m.data()) CHECK(v == 0.0);
    }
}

TEST_CASE("LMI residual rejects eta outside (0, 1)") {
    const Matrix p = testing::ref_p();
    const Matrix q = Matrix::identity(4);
    CHECK_THROWS_AS(lmi_residual(q, p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lmi_residual(q, p, 1.0), std::invalid_argument);
}

TEST_CASE("feasibility is invariant under positive scaling of Q") {
    Rng rng(47);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = rng.index(2, 6);
        const Matrix p = testing::random_adjacency(rng, n);
        const Matrix q = Matrix::diagonal(rng.vector(n, 0.01, 1));
        const double eta = rng.uniform(0.3, 0.9), c = std::exp(rng.uniform(-5, 5));
        const auto a = check_feasible(q, p, eta, 1e-9);
        const auto b = check_feasible(c * q, p, eta, 1e-9 * c);
        CHECK(a.feasible == b.feasible);
        CHECK(b.min_eigenvalue == doctest::Approx(c * a.min_eigenvalue).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("symmetric lazy doubly stochastic graphs are certified by the identity at eta 1/2") {
    // M(I) = E (2 eta I - E) with E = I - P, PSD when the spectrum of P lies in [0, 1].
    Rng rng(53);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = rng.index(1, 9);
        const Matrix p = testing::random_lazy_symmetric(rng, n);
        CHECK(check_feasible(Matrix::identity(n), p, 0.5, 1e-12).feasible);
    }
}

TEST_CASE("weight matrix validation") {
    CHECK_THROWS_AS(WeightMatrix(Matrix{{1, 0.5}, {0.4, 1}}), ValidationError);
    CHECK_THROWS_AS(WeightMatrix(Matrix{{1, 2}, {2, 1}}), ValidationError);
    CHECK_THROWS_AS(WeightMatrix::diagonal(Vector{1, 0}), ValidationError);
    const WeightMatrix w = WeightMatrix::diagonal(Vector{0.5, 2});
    CHECK(w.diagonal_only());
    CHECK(w.lambda_min() == 0.5);
    CHECK(w.lambda_max() == 2);
    CHECK(w.scaled(2).diag() == Vector{1, 4});
    const WeightMatrix full(Matrix{{2, 1}, {1, 2}});
    CHECK_FALSE(full.diagonal_only());
    CHECK(full.lambda_min() == doctest::Approx(1));
}

TEST_CASE("reference weights: the certificate sign is decided by the stationary distribution") {
    const Matrix p = testing::ref_p();
    const Vector pi = testing::stationary(p);
    // By hand: pi_4 = pi_3 / 3, pi_3 = 0.15 pi_2, pi_1 = 0.9 pi_2, so pi = (0.9, 1, 0.15, 0.05) / 2.1.
    const Vector expected{0.9 / 2.1, 1.0 / 2.1, 0.15 / 2.1, 0.05 / 2.1};
    for (std::size_t i = 0; i < 4; ++i) CHECK(pi[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    const Matrix qpi = Matrix::diagonal(pi);
    CHECK(testing::bisect_eigenvalue(lmi_residual(qpi, p, 0.5), 0) < -1e-3);
    CHECK(testing::bisect_eigenvalue(lmi_residual(qpi, p, 0.6), 0) > -1e-12);

    // The published weights are close to diag(pi) but do not pass at eta = 1/2.
    const auto cert = check_feasible(Matrix::diagonal(testing::ref_q()), p, 0.5, 1e-9);
    CHECK(cert.q_positive_definite);
    CHECK_FALSE(cert.feasible);
    CHECK(std::abs(cert.min_eigenvalue -
                   testing::bisect_eigenvalue(lmi_residual(Matrix::diagonal(testing::ref_q()), p, 0.5), 0)) <= 1e-10);
}

TEST_CASE("diagonal synthesis on the four-robot graph") {
    const AdjacencyMatrix p(testing::ref_p());
    const Vector pi = testing::stationary(p.matrix());

    SUBCASE("eta 0.5 has no diagonal certificate") {
        const auto r = solve_diagonal_q(p, 0.5);
        CHECK_FALSE(r.feasible);
        CHECK_FALSE(r.q.has_value());
        CHECK(r.best_lambda_min < -5.29e-3);
        CHECK(r.best_diagonal.size() == 4);
    }
    SUBCASE("eta 0.6 recovers the stationary distribution") {
        const auto r = solve_diagonal_q(p, 0.6);
        REQUIRE(r.feasible);
        const Vector q = r.q->diag();
        CHECK(*std::max_element(q.begin(), q.end()) == doctest::Approx(0.25));
        for (std::size_t i = 0; i < 4; ++i) CHECK(q[i] / q[1] == doctest::Approx(pi[i] / pi[1]).epsilon(1e-6));
        CHECK(check_feasible(*r.q, p, 0.6, 1e-9).feasible);
    }
}

TEST_CASE("solver result is independent of thread count") {
    Rng rng(59);
    for (int t = 0; t < 3; ++t) {
        const AdjacencyMatrix p(testing::random_lazy_symmetric(rng, 5));
        LmiSolveOptions one;
        one.threads = 1;
        one.seed = 99;
        one.iterations = 500;
        LmiSolveOptions many = one;
        many.threads = 4;
        const auto a = solve_diagonal_q(p, 0.5, one);
        const auto b = solve_diagonal_q(p, 0.5, many);
        CHECK(a.feasible == b.feasible);
        CHECK(a.restart == b.restart);
        CHECK(a.best_diagonal == b.best_diagonal);
        if (a.feasible) CHECK(*a.q == *b.q);
    }
}

TEST_CASE("solver and checker agree whenever the solver succeeds") {
    Rng rng(61);
    int successes = 0;
    for (int t = 0; t < 12; ++t) {
        const std::size_t n = rng.index(2, 6);
        const AdjacencyMatrix p(testing::random_adjacency(rng, n, 0.3));
        const double eta = rng.uniform(0.5, 0.95);
        LmiSolveOptions opts;
        opts.iterations = 800;
        opts.restarts = 8;
        opts.seed = static_cast<std::uint64_t>(t);
        const auto r = solve_diagonal_q(p, eta, opts);
        if (!r.feasible) continue;
        ++successes;
        CHECK(check_feasible(*r.q, p, eta, 1e-9).feasible);
    }
    CHECK(successes > 0);
}
