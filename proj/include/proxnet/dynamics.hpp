#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proxnet/certify.hpp"
#include "proxnet/graph.hpp"
#include "proxnet/prox.hpp"

namespace proxnet {

/// A network game: communication matrix, per-agent costs on R^n, and the
/// certifying weight Q~ (collective weight Q~ (x) I_n).
class GameInstance {
  public:
    /// Throws StructuralError on size mismatches and ValidationError when Q~ is
    /// diagonal but costs[i].weight differs from Q~_ii * 1.
    GameInstance(AdjacencyMatrix p, std::size_t dim, std::vector<AgentCost> costs, WeightMatrix q,
                 double eta = kDefaultEta);

    /// Same as the constructor, but overwrites every cost weight with Q~_ii * 1.
    static GameInstance with_weights(AdjacencyMatrix p, std::size_t dim, std::vector<AgentCost> costs,
                                     WeightMatrix q, double eta = kDefaultEta);

    const AdjacencyMatrix& adjacency() const noexcept { return p_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t agents() const noexcept { return costs_.size(); }
    const std::vector<AgentCost>& costs() const noexcept { return costs_; }
    const WeightMatrix& weights() const noexcept { return q_; }
    double eta() const noexcept { return eta_; }

    /// Copy with each agent's constraint replaced.
    GameInstance with_constraints(std::vector<ConvexSet> sets) const;

  private:
    AdjacencyMatrix p_;
    std::size_t dim_;
    std::vector<AgentCost> costs_;
    WeightMatrix q_;
    double eta_;
};

/// sqrt(v^T (Q~ (x) I_n) v) for a stacked vector v of N blocks of size n.
double q_norm(const WeightMatrix& q, std::span<const double> v, std::size_t n);
/// ||a - b|| in the Q~ (x) I_n norm.
double q_distance(const WeightMatrix& q, const CollectiveState& a, const CollectiveState& b);

/// x+ = prox_f^Q((P (x) I_n) x)
CollectiveState picard_step(const GameInstance& game, const CollectiveState& x);

/// ||picard_step(x) - x|| in the Q~ norm; zero exactly at network equilibria.
double nwe_residual(const GameInstance& game, const CollectiveState& x);

struct Trajectory {
    std::vector<std::size_t> steps;        ///< iteration index of each stored state
    std::vector<CollectiveState> states;
    std::vector<double> residuals;         ///< residuals[k] belongs to the step that produced states[k + 1]
    std::vector<std::size_t> modes;        ///< mode applied at each stored step (0-based)
    bool converged = false;
    std::size_t iterations = 0;
    bool initial_projected = false;        ///< x0 was outside the constraints and got projected
};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::size_t kDefaultMaxIter = 100'000;

struct IterateOptions {
    double tol = kDefaultTol;
    std::size_t max_iter = kDefaultMaxIter;
    std::size_t stride = 1;  ///< keep every stride-th state (the last one is always kept)
};

/// Picard iteration of prox o A until the Q~-norm step falls below tol.
Trajectory iterate(const GameInstance& game, const CollectiveState& x0, const IterateOptions& options = {});

/// Explicit projected update
///   x+ = proj_X[x - eps (Q gamma (x - x*) + (D (x) I_n)(x - A x))],  D = diag(1 - a_ii),
/// with gamma and Q applied per agent. Throws std::invalid_argument for eps < 0.
CollectiveState fb_step(const GameInstance& game, const CollectiveState& x, double epsilon);

/// Projects every block of x onto its agent's constraint.
CollectiveState project_blocks(const GameInstance& game, const CollectiveState& x);
bool feasible(const GameInstance& game, const CollectiveState& x, double tol = 0.0);

}  // namespace proxnet
