#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proxnet/errors.hpp"
#include "proxnet/matrix.hpp"

namespace proxnet {

inline constexpr double kDefaultRowTol = 1e-9;

/// Checks nonnegativity, unit row sums, strictly positive self-loops and strong
/// connectivity of the support digraph (edge j -> i iff a_ij > 0).
/// Throws StructuralError for non-square or non-finite input.
ValidationReport validate_adjacency(const Matrix& p, double row_tol = kDefaultRowTol);

/// Strongly connected components of the digraph with an edge i -> j whenever
/// adjacency(i, j) > 0 (Tarjan). Each component lists its vertex indices in
/// ascending order; components are ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Matrix& adjacency);

/// Row-stochastic communication matrix with self-loops over a strongly
/// connected graph. Only constructible from a matrix that validates.
class AdjacencyMatrix {
  public:
    /// Throws ValidationError carrying the violated checks.
    explicit AdjacencyMatrix(Matrix p, double row_tol = kDefaultRowTol);

    std::size_t size() const noexcept { return p_.rows(); }
    const Matrix& matrix() const noexcept { return p_; }
    double operator()(std::size_t i, std::size_t j) const { return p_(i, j); }

  private:
    Matrix p_;
};

/// min_i a_ii
double min_self_loop(const AdjacencyMatrix& p);

/// m (x) I_n: block (i, j) equals m_ij * I_n. Throws StructuralError for n == 0
/// or a non-square m.
Matrix kron_lift(const Matrix& m, std::size_t n);

/// Applies (p (x) I_n) to a stacked vector without forming the lift:
/// out block i = sum_j p_ij x_j.
Vector mix_blocks(const Matrix& p, std::span<const double> x, std::size_t n);

}  // namespace proxnet
