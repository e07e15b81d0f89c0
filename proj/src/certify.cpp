#include "proxnet/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "proxnet/errors.hpp"
#include "proxnet/simd.hpp"

namespace proxnet {

WeightMatrix::WeightMatrix(Matrix entries) : q_(std::move(entries)) {
    if (!q_.square() || q_.rows() == 0) throw StructuralError("weight matrix must be square and non-empty");
    if (!q_.all_finite()) throw StructuralError("weight matrix has non-finite entries");
    std::vector<std::string> violations;
    if (q_.asymmetry() > 1e-12) violations.push_back("weight matrix is not symmetric");
    diagonal_only_ = q_.is_diagonal();
    if (diagonal_only_) {
        const Vector d = q_.diag();
        lambda_min_ = *std::min_element(d.begin(), d.end());
        lambda_max_ = *std::max_element(d.begin(), d.end());
    } else if (violations.empty()) {
        const auto eig = jacobi_eigen(q_);
        lambda_min_ = eig.values.front();
        lambda_max_ = eig.values.back();
    }
    if (violations.empty() && !(lambda_min_ > 0.0)) violations.push_back("weight matrix is not positive definite");
    if (!violations.empty()) throw ValidationError("invalid weight matrix", std::move(violations));
}

WeightMatrix WeightMatrix::diagonal(std::span<const double> d) { return WeightMatrix(Matrix::diagonal(d)); }

WeightMatrix WeightMatrix::scaled(double c) const { return WeightMatrix(c * q_); }

EigenDecomposition jacobi_eigen(const Matrix& s) {
    if (!s.square() || s.rows() == 0) throw StructuralError("jacobi_eigen: matrix must be square and non-empty");
    if (!s.all_finite()) throw StructuralError("jacobi_eigen: non-finite entries");
    if (s.asymmetry() > 1e-9 * std::max(1.0, s.frobenius())) throw StructuralError("jacobi_eigen: matrix is not symmetric");

    const std::size_t n = s.rows();
    Matrix a = symmetrized(s);
    Matrix vt = Matrix::identity(n);
    const double threshold = kJacobiOffTol * std::max(1.0, a.frobenius());

    auto off_mass = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += a(i, j) * a(i, j);
        return std::sqrt(acc);
    };

    std::size_t sweeps = 0;
    while (off_mass() >= threshold) {
        if (sweeps == kJacobiMaxSweeps) {
            throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(kJacobiMaxSweeps) + " sweeps");
        }
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                simd::rotate(a.row(p), a.row(q), c, sn);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(r, p) = a(p, r);
                    a(r, q) = a(q, r);
                }
                simd::rotate(vt.row(p), vt.row(q), c, sn);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    out.sweeps = sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        auto src = vt.row(order[k]);
        auto dst = out.vectors.row(k);
        std::copy(src.begin(), src.end(), dst.begin());
        const auto lead = std::find_if(dst.begin(), dst.end(), [](double v) { return std::abs(v) > 1e-12; });
        if (lead != dst.end() && *lead < 0.0) simd::scale(-1.0, dst);
    }
    return out;
}

EigenPair symmetric_min_eig(const Matrix& s) {
    auto eig = jacobi_eigen(s);
    auto v = eig.vectors.row(0);
    return {eig.values.front(), Vector(v.begin(), v.end())};
}

Matrix lmi_residual(const Matrix& q, const Matrix& p, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("lmi_residual: eta must lie in (0, 1)");
    if (!p.square() || !q.square() || p.rows() != q.rows()) {
        throw StructuralError("lmi_residual: Q and P must be square of the same size");
    }
    const Matrix e = Matrix::identity(p.rows()) - p;
    const Matrix etq = e.transposed() * q;
    const Matrix qe = q * e;
    return symmetrized(eta * (etq + qe) - etq * e);
}

FeasibilityCertificate check_feasible(const Matrix& q, const Matrix& p, double eta, double tol) {
    FeasibilityCertificate cert;
    cert.eta = eta;
    cert.q = q;
    cert.min_eigenvalue = symmetric_min_eig(lmi_residual(q, p, eta)).value;
    cert.q_positive_definite = q.asymmetry() <= 1e-12 && symmetric_min_eig(q).value > 0.0;
    cert.feasible = cert.q_positive_definite && cert.min_eigenvalue >= -tol;
    return cert;
}

namespace {

/// Euclidean projection onto {y : y_i >= floor, sum y = 1}.
void project_floored_simplex(Vector& v, double floor) {
    const std::size_t n = v.size();
    const double radius = 1.0 - static_cast<double>(n) * floor;
    Vector u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] - floor;
    Vector sorted = u;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) shift = candidate;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = floor + std::max(u[i] - shift, 0.0);
}

struct RestartOutcome {
    bool feasible = false;
    Vector q;
    double best_lambda = -std::numeric_limits<double>::infinity();
    Vector best_q;
};

class DiagonalSearch {
  public:
    DiagonalSearch(const Matrix& p, double eta, const LmiSolveOptions& opt) : p_(p), eta_(eta), opt_(opt) {
        const std::size_t n = p.rows();
        e_ = Matrix::identity(n) - p;
        // Null space of E^T = null space of E E^T.
        const auto eig = jacobi_eigen(e_ * e_.transposed());
        const double cut = 1e-10 * std::max(1.0, std::abs(eig.values.back()));
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(eig.values[k]) <= cut) {
                auto row = eig.vectors.row(k);
                null_basis_.emplace_back(row.begin(), row.end());
            }
        }
    }

    double lambda_of(const Vector& q, Vector* eigvec) const {
        auto pair = symmetric_min_eig(lmi_residual(Matrix::diagonal(q), p_, eta_));
        if (eigvec) *eigvec = std::move(pair.vector);
        return pair.value;
    }

    RestartOutcome run(std::size_t restart) const {
        const std::size_t n = p_.rows();
        Vector q(n, 1.0 / static_cast<double>(n));
        if (restart > 0) {
            std::mt19937_64 rng(opt_.seed + 0x9E3779B97F4A7C15ULL * (restart + 1));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            double total = 0.0;
            for (double& v : q) total += (v = unit(rng) + 1e-3);
            for (double& v : q) v /= total;
        }
        project_floored_simplex(q, opt_.floor);

        RestartOutcome out;
        auto consider = [&](const Vector& cand, double lam) {
            if (lam > out.best_lambda) {
                out.best_lambda = lam;
                out.best_q = cand;
            }
            const double qmin = *std::min_element(cand.begin(), cand.end());
            if (lam >= -opt_.accept_tol && qmin >= opt_.floor) {
                out.feasible = true;
                out.q = cand;
                return true;
            }
            return false;
        };

        Vector v;
        Vector grad(n);
        for (std::size_t k = 1; k <= opt_.iterations; ++k) {
            const double lam = lambda_of(q, &v);
            if (consider(q, lam)) {
                // Accepted iterates sit near the null space but not on it; keep the projection if it is no worse.
                if (auto polished = polish(q)) {
                    const double plam = lambda_of(*polished, nullptr);
                    const double pmin = *std::min_element(polished->begin(), polished->end());
                    if (plam >= lam && pmin >= opt_.floor) {
                        out.q = *polished;
                        out.best_q = *polished;
                        out.best_lambda = plam;
                    }
                }
                return out;
            }
            const Vector ev = e_ * v;
            for (std::size_t d = 0; d < n; ++d) grad[d] = 2.0 * eta_ * v[d] * ev[d] - ev[d] * ev[d];
            simd::axpy(opt_.step / std::sqrt(static_cast<double>(k)), grad, q);
            project_floored_simplex(q, opt_.floor);
        }

        if (auto polished = polish(out.best_q)) consider(*polished, lambda_of(*polished, nullptr));
        return out;
    }

  private:
    std::optional<Vector> polish(const Vector& q) const {
        if (null_basis_.empty()) return std::nullopt;
        Vector proj(q.size(), 0.0);
        for (const auto& b : null_basis_) simd::axpy(simd::dot(b, q), b, proj);
        const double total = std::accumulate(proj.begin(), proj.end(), 0.0);
        if (!(total > 0.0)) return std::nullopt;
        for (double& v : proj) v /= total;
        return proj;
    }

    const Matrix& p_;
    double eta_;
    const LmiSolveOptions& opt_;
    Matrix e_;
    std::vector<Vector> null_basis_;
};

}  // namespace

LmiSolveResult solve_diagonal_q(const AdjacencyMatrix& p, double eta, const LmiSolveOptions& options) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("solve_diagonal_q: eta must lie in (0, 1)");
    const std::size_t n = p.size();
    if (options.floor * static_cast<double>(n) >= 1.0) throw std::invalid_argument("solve_diagonal_q: floor too large");

    const DiagonalSearch search(p.matrix(), eta, options);
    const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
    std::vector<RestartOutcome> outcomes(restarts);
    std::vector<char> done(restarts, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_success{restarts};

    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= restarts || r > first_success.load()) return;
            outcomes[r] = search.run(r);
            done[r] = 1;
            if (outcomes[r].feasible) {
                std::size_t cur = first_success.load();
                while (r < cur && !first_success.compare_exchange_weak(cur, r)) {
                }
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, restarts));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    LmiSolveResult result;
    result.eta = eta;
    result.seed = options.seed;
    result.best_lambda_min = -std::numeric_limits<double>::infinity();
    const std::size_t winner = first_success.load();
    const std::size_t last = std::min(winner, restarts - 1);
    // Restarts up to the winner always run, so this summary is thread-count independent.
    for (std::size_t r = 0; r <= last; ++r) {
        if (!done[r]) continue;
        if (outcomes[r].best_lambda > result.best_lambda_min) {
            result.best_lambda_min = outcomes[r].best_lambda;
            result.best_diagonal = outcomes[r].best_q;
        }
    }
    if (winner < restarts) {
        Vector q = outcomes[winner].q;
        const double qmax = *std::max_element(q.begin(), q.end());
        simd::scale(options.target_max / qmax, q);
        result.feasible = true;
        result.restart = winner;
        result.q = WeightMatrix::diagonal(q);
        result.best_diagonal = outcomes[winner].q;
        result.best_lambda_min = search.lambda_of(outcomes[winner].q, nullptr);
    }
    return result;
}

}  // namespace proxnet
