#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "proxnet/graph.hpp"
#include "proxnet/matrix.hpp"

namespace proxnet {

/// Symmetric positive definite weight matrix Q~ (usually diagonal).
class WeightMatrix {
  public:
    /// Throws ValidationError unless symmetric within 1e-12 and positive definite.
    explicit WeightMatrix(Matrix entries);
    static WeightMatrix diagonal(std::span<const double> d);

    std::size_t size() const noexcept { return q_.rows(); }
    const Matrix& matrix() const noexcept { return q_; }
    bool diagonal_only() const noexcept { return diagonal_only_; }
    Vector diag() const { return q_.diag(); }
    double lambda_min() const noexcept { return lambda_min_; }
    double lambda_max() const noexcept { return lambda_max_; }
    WeightMatrix scaled(double c) const;

    friend bool operator==(const WeightMatrix& a, const WeightMatrix& b) { return a.q_ == b.q_; }

  private:
    Matrix q_;
    bool diagonal_only_ = false;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
};

struct EigenDecomposition {
    Vector values;   ///< ascending
    Matrix vectors;  ///< row k is the unit eigenvector of values[k]
    std::size_t sweeps = 0;
};

inline constexpr double kJacobiOffTol = 1e-13;
inline constexpr std::size_t kJacobiMaxSweeps = 100;

/// Cyclic Jacobi rotations on (S + S^T)/2 until the off-diagonal Frobenius mass
/// drops below 1e-13 * max(1, ||S||_F). Eigenvectors are sign-normalized so their
/// first non-negligible component is positive.
/// Throws StructuralError if S is not square/finite or asymmetric beyond 1e-9,
/// ConvergenceError past the sweep cap.
EigenDecomposition jacobi_eigen(const Matrix& s);

struct EigenPair {
    double value = 0.0;
    Vector vector;
};

EigenPair symmetric_min_eig(const Matrix& s);

/// M(Q) = (2 eta - 1) Q + (1 - eta)(P^T Q + Q P) - P^T Q P, symmetrized.
/// The LMI holds iff M(Q) is positive semidefinite. Evaluated as
/// eta (E^T Q + Q E) - E^T Q E with E = I - P, which is algebraically the same
/// and vanishes exactly when P = I. Throws std::invalid_argument unless 0 < eta < 1.
Matrix lmi_residual(const Matrix& q, const Matrix& p, double eta);
inline Matrix lmi_residual(const WeightMatrix& q, const AdjacencyMatrix& p, double eta) {
    return lmi_residual(q.matrix(), p.matrix(), eta);
}

struct FeasibilityCertificate {
    double eta = 0.0;
    double min_eigenvalue = 0.0;
    bool q_positive_definite = false;
    bool feasible = false;
    Matrix q;
};

/// feasible iff lambda_min(M(Q)) >= -tol and Q is symmetric positive definite.
FeasibilityCertificate check_feasible(const Matrix& q, const Matrix& p, double eta, double tol);
inline FeasibilityCertificate check_feasible(const WeightMatrix& q, const AdjacencyMatrix& p, double eta,
                                             double tol) {
    return check_feasible(q.matrix(), p.matrix(), eta, tol);
}

inline constexpr double kDefaultEta = 0.5;

struct LmiSolveOptions {
    std::size_t restarts = 32;
    std::size_t iterations = 5000;
    double step = 0.1;  ///< step at iteration k is step / sqrt(k)
    std::uint64_t seed = 0;
    double floor = 1e-6;        ///< minimum diagonal entry while searching
    double accept_tol = 1e-12;  ///< lambda_min(M) >= -accept_tol counts as feasible
    double target_max = 0.25;   ///< largest diagonal entry of the returned Q
    unsigned threads = 0;       ///< 0 = hardware concurrency
};

struct LmiSolveResult {
    bool feasible = false;
    std::optional<WeightMatrix> q;  ///< set when feasible, rescaled to target_max
    /// Best trace-one diagonal seen and its lambda_min(M) (the infeasibility report).
    Vector best_diagonal;
    double best_lambda_min = 0.0;
    std::size_t restart = 0;  ///< index of the restart that produced q
    double eta = 0.0;
    std::uint64_t seed = 0;
};

/// Searches diagonal Q with trace 1 maximizing lambda_min(M(Q)) by projected
/// subgradient ascent with random restarts, finishing each restart by projecting
/// onto the null space of E^T (every feasible Q has Q 1 in it, because M(Q) 1 =
/// eta E^T Q 1 and 1^T M(Q) 1 = 0). The lowest-indexed successful restart wins,
/// independent of thread count.
LmiSolveResult solve_diagonal_q(const AdjacencyMatrix& p, double eta, const LmiSolveOptions& options = {});

}  // namespace proxnet
