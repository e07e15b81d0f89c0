#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "proxnet/matrix.hpp"

namespace proxnet {

/// Axis-aligned box [lower, upper]. A zero-width side is allowed (singletons).
class Box {
  public:
    Box() = default;
    /// Throws StructuralError when sizes differ, bounds are non-finite or lower > upper.
    static Box from_bounds(Vector lower, Vector upper);
    /// Throws StructuralError on negative half-widths.
    static Box centered(std::span<const double> center, std::span<const double> half_width);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    Vector center() const;
    Vector half_width() const;
    double volume() const;

    bool contains(std::span<const double> x, double tol = 0.0) const;
    /// Strict interior membership.
    bool interior_contains(std::span<const double> x) const;
    /// True when the interiors overlap.
    bool overlaps(const Box& other) const;
    bool subset_of(const Box& other, double tol = 0.0) const;

    friend bool operator==(const Box&, const Box&) = default;

  private:
    Vector lower_;
    Vector upper_;
};

struct Ball {
    Vector center;
    double radius = 0.0;

    friend bool operator==(const Ball&, const Ball&) = default;
};

/// The part of `outer` kept after carving out `obstacle`; projections use `resolved`,
/// a box inside outer that does not meet the obstacle interior.
struct SubBox {
    Box outer;
    Box obstacle;
    Box resolved;

    friend bool operator==(const SubBox&, const SubBox&) = default;
};

using ConvexSet = std::variant<Box, Ball, SubBox>;

std::size_t dimension(const ConvexSet& set);
bool contains(const ConvexSet& set, std::span<const double> x, double tol = 0.0);

/// Euclidean projection.
Vector project(const ConvexSet& set, std::span<const double> x);
void project_into(const ConvexSet& set, std::span<const double> x, std::span<double> out);

/// Local cost (gamma/2)||y - target||_Q^2 + indicator(constraint), with the
/// coupling term 1/2 ||y - z||_Q^2 added by the prox. Q = diag(weight).
struct AgentCost {
    double gamma = 0.0;
    Vector target;
    ConvexSet constraint;
    Vector weight;

    std::size_t dimension() const noexcept { return target.size(); }
    /// Throws StructuralError on inconsistent sizes, gamma < 0 or non-positive weights.
    void validate() const;
    bool scalar_weight() const;
};

/// (gamma/2)||y - x*||_Q^2 + 1/2||y - z||_Q^2, +inf outside the constraint (tol 1e-12).
double prox_objective(const AgentCost& cost, std::span<const double> z, std::span<const double> y);

/// argmin_y (gamma/2)||y - x*||_Q^2 + indicator_X(y) + 1/2||y - z||_Q^2.
///
/// Closed form project(X, (gamma x* + z) / (1 + gamma)), valid when Q is a
/// multiple of the identity (any set) or X is a box (any positive diagonal Q).
/// Other combinations throw UnsupportedConfiguration; use prox_numerical_oracle.
Vector prox_agent(const AgentCost& cost, std::span<const double> z);
void prox_agent_into(const AgentCost& cost, std::span<const double> z, std::span<double> out);

inline constexpr double kOracleTol = 1e-10;
inline constexpr std::size_t kOracleMaxIter = 1'000'000;

/// Projected gradient descent on the prox objective with step 1/L,
/// L = (1 + gamma) max_d Q_dd, stopped when successive iterates are closer than tol.
/// Throws ConvergenceError past max_iter.
Vector prox_numerical_oracle(const AgentCost& cost, std::span<const double> z, double tol = kOracleTol,
                             std::size_t max_iter = kOracleMaxIter);

/// Stacked agent states x = [x^1; ...; x^N], each of dimension n.
class CollectiveState {
  public:
    CollectiveState() = default;
    CollectiveState(std::size_t agents, std::size_t dim, double fill = 0.0);
    CollectiveState(std::size_t agents, std::size_t dim, Vector values);
    static CollectiveState from_blocks(const std::vector<Vector>& blocks);

    std::size_t agents() const noexcept { return agents_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<double> block(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
    std::span<const double> block(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const CollectiveState&, const CollectiveState&) = default;

  private:
    std::size_t agents_ = 0;
    std::size_t dim_ = 0;
    Vector values_;
};

/// Blockwise prox_agent. Blocks are independent of each other.
CollectiveState prox_collective(std::span<const AgentCost> costs, const CollectiveState& z);

}  // namespace proxnet
