#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "proxnet/dynamics.hpp"

namespace proxnet {

struct ObstacleSet {
    std::vector<Box> boxes;

    /// Throws ValidationError for boxes with a non-positive half-width.
    void validate() const;
    /// True when x lies in the open interior of some obstacle.
    bool blocks(std::span<const double> x) const;
};

struct BuiltConstraint {
    ConvexSet set;
    bool degenerate = false;  ///< no admissible sub-box; set is the singleton {pos}
};

/// Motion constraint of a robot at `pos`: the box of edge r centred at pos. For
/// every obstacle that box meets (nearest first), the box is replaced by the
/// largest of the axis-aligned slabs beside the obstacle (left, right, below,
/// above; ties keep that order) among those that still contain pos.
/// Throws InvalidState if pos is inside an obstacle.
BuiltConstraint build_constraint(std::span<const double> pos, double r, const ObstacleSet& obstacles);

struct RobotScenario {
    Matrix p;
    Vector q_diag;
    std::vector<Vector> initial;
    std::vector<Vector> targets;
    Vector gamma;
    double r = 5.0;
    double epsilon = 1.0;
    ObstacleSet obstacles;
    std::size_t steps = 2000;
    double stop_tol = 1e-9;
    double eta = kDefaultEta;

    std::size_t robots() const noexcept { return initial.size(); }
    /// Throws StructuralError or ValidationError with every violated field.
    void validate() const;

    /// The four-robot exploration setup, optionally with one rectangular obstacle
    /// placed across the robots' paths.
    static RobotScenario four_robots(bool with_obstacle = false);
    static Box reference_obstacle();
};

struct ExplorationResult {
    Trajectory trajectory;                ///< every step; residuals are Euclidean step lengths
    std::vector<std::vector<Box>> boxes;  ///< boxes[k][i]: robot i's constraint at step k
    std::vector<bool> stalled;            ///< robot hit a degenerate constraint at some step
    bool converged = false;
    double final_displacement = 0.0;
    /// Picard fixed-point residual of the final state under the final constraints.
    double final_nwe_residual = 0.0;
};

/// Each step rebuilds every robot's constraint around its position and applies
/// fb_step, until the collective step is below stop_tol or `steps` run out.
ExplorationResult run_exploration(const RobotScenario& scenario);

}  // namespace proxnet
