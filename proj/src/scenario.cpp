#include "proxnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "proxnet/errors.hpp"
#include "proxnet/simd.hpp"

namespace proxnet {
namespace {

double distance_to_box(std::span<const double> x, const Box& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double gap = std::max({b.lower()[d] - x[d], 0.0, x[d] - b.upper()[d]});
        acc += gap * gap;
    }
    return std::sqrt(acc);
}

/// Slabs of `box` on either side of `obstacle` along each axis, in the order
/// axis 0 low, axis 0 high, axis 1 low, axis 1 high, ...
std::vector<Box> side_slabs(const Box& box, const Box& obstacle) {
    std::vector<Box> out;
    for (std::size_t d = 0; d < box.dimension(); ++d) {
        Vector lo = box.lower(), hi = box.upper();
        hi[d] = std::min(hi[d], obstacle.lower()[d]);
        if (lo[d] <= hi[d]) out.push_back(Box::from_bounds(lo, hi));
        lo = box.lower();
        hi = box.upper();
        lo[d] = std::max(lo[d], obstacle.upper()[d]);
        if (lo[d] <= hi[d]) out.push_back(Box::from_bounds(lo, hi));
    }
    return out;
}

}  // namespace

void ObstacleSet::validate() const {
    std::vector<std::string> violations;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        for (double h : boxes[k].half_width()) {
            if (!(h > 0.0)) {
                violations.push_back("obstacle " + std::to_string(k + 1) + " has a non-positive half-width");
                break;
            }
        }
    }
    if (!violations.empty()) throw ValidationError("invalid obstacles", std::move(violations));
}

bool ObstacleSet::blocks(std::span<const double> x) const {
    return std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.interior_contains(x); });
}

BuiltConstraint build_constraint(std::span<const double> pos, double r, const ObstacleSet& obstacles) {
    if (!(r > 0.0)) throw std::invalid_argument("build_constraint: edge length must be positive");
    if (obstacles.blocks(pos)) throw InvalidState("build_constraint: position lies inside an obstacle");

    const Vector half(pos.size(), 0.5 * r);
    const Box full = Box::centered(pos, half);

    std::vector<std::size_t> hits;
    for (std::size_t k = 0; k < obstacles.boxes.size(); ++k)
        if (full.overlaps(obstacles.boxes[k])) hits.push_back(k);
    if (hits.empty()) return {full, false};

    std::stable_sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
        return distance_to_box(pos, obstacles.boxes[a]) < distance_to_box(pos, obstacles.boxes[b]);
    });

    Box current = full;
    for (std::size_t k : hits) {
        const Box& obstacle = obstacles.boxes[k];
        if (!current.overlaps(obstacle)) continue;
        const Box* best = nullptr;
        double best_volume = -1.0;
        const auto slabs = side_slabs(current, obstacle);
        for (const auto& slab : slabs) {
            if (!slab.contains(pos)) continue;
            const double v = slab.volume();
            if (v > best_volume) {
                best_volume = v;
                best = &slab;
            }
        }
        if (best == nullptr) {
            const Vector p(pos.begin(), pos.end());
            return {SubBox{full, obstacles.boxes[hits.front()], Box::from_bounds(p, p)}, true};
        }
        current = *best;
    }
    return {SubBox{full, obstacles.boxes[hits.front()], current}, false};
}

void RobotScenario::validate() const {
    const std::size_t n = robots();
    if (n == 0) throw StructuralError("scenario: no robots");
    if (targets.size() != n || gamma.size() != n || q_diag.size() != n || p.rows() != n) {
        throw StructuralError("scenario: positions, targets, gamma, Q~ and P must all describe " + std::to_string(n) +
                              " robots");
    }
    std::vector<std::string> violations;
    const std::size_t dim = initial.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        if (initial[i].size() != dim || targets[i].size() != dim) {
            throw StructuralError("scenario: robot " + std::to_string(i + 1) + " has inconsistent dimension");
        }
        for (std::size_t d = 0; d < dim; ++d) {
            if (!std::isfinite(targets[i][d])) violations.push_back("target of robot " + std::to_string(i + 1) + " is not finite");
            if (!std::isfinite(initial[i][d])) violations.push_back("position of robot " + std::to_string(i + 1) + " is not finite");
        }
        if (!(gamma[i] >= 0.0)) violations.push_back("gamma of robot " + std::to_string(i + 1) + " is negative");
        if (obstacles.blocks(initial[i])) violations.push_back("robot " + std::to_string(i + 1) + " starts inside an obstacle");
    }
    if (!(r > 0.0)) violations.push_back("box edge r must be positive");
    if (!(epsilon > 0.0)) violations.push_back("step size epsilon must be positive");
    for (const auto& b : obstacles.boxes)
        if (b.dimension() != dim) throw StructuralError("scenario: obstacle dimension differs from robot dimension");
    obstacles.validate();
    const auto graph = validate_adjacency(p);
    violations.insert(violations.end(), graph.violations.begin(), graph.violations.end());
    if (!violations.empty()) throw ValidationError("invalid scenario", std::move(violations));
}

Box RobotScenario::reference_obstacle() { return Box::from_bounds({35.0, 35.0}, {65.0, 45.0}); }

RobotScenario RobotScenario::four_robots(bool with_obstacle) {
    RobotScenario s;
    s.p = Matrix{{0.5, 0.5, 0.0, 0.0}, {0.4, 0.5, 0.1, 0.0}, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}};
    s.q_diag = {0.186, 0.214, 0.055, 0.03};
    s.initial = {{5.0, 0.0}, {20.0, 0.0}, {50.0, 0.0}, {10.0, 0.0}};
    s.targets = {{100.0, 100.0}, {60.0, 100.0}, {0.0, 50.0}, {100.0, 50.0}};
    s.gamma = Vector(4, 2.5);
    s.r = 5.0;
    s.epsilon = 1.0;
    s.steps = 2000;
    if (with_obstacle) s.obstacles.boxes.push_back(reference_obstacle());
    return s;
}

ExplorationResult run_exploration(const RobotScenario& scn) {
    scn.validate();
    const std::size_t n = scn.robots();
    const std::size_t dim = scn.initial.front().size();

    std::vector<AgentCost> costs(n);
    for (std::size_t i = 0; i < n; ++i) {
        costs[i].gamma = scn.gamma[i];
        costs[i].target = scn.targets[i];
        costs[i].constraint = Box::centered(scn.initial[i], Vector(dim, 0.5 * scn.r));
    }
    const GameInstance base = GameInstance::with_weights(AdjacencyMatrix(scn.p), dim, std::move(costs),
                                                         WeightMatrix::diagonal(scn.q_diag), scn.eta);

    auto constraints_at = [&](const CollectiveState& x, ExplorationResult& res) {
        std::vector<ConvexSet> sets;
        std::vector<Box> boxes;
        sets.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto built = build_constraint(x.block(i), scn.r, scn.obstacles);
            if (built.degenerate) res.stalled[i] = true;
            boxes.push_back(std::holds_alternative<Box>(built.set) ? std::get<Box>(built.set)
                                                                   : std::get<SubBox>(built.set).resolved);
            sets.push_back(std::move(built.set));
        }
        res.boxes.push_back(std::move(boxes));
        return base.with_constraints(std::move(sets));
    };

    ExplorationResult res;
    res.stalled.assign(n, false);
    CollectiveState x = CollectiveState::from_blocks(scn.initial);
    res.trajectory.steps.push_back(0);
    res.trajectory.states.push_back(x);
    res.trajectory.modes.push_back(0);

    for (std::size_t k = 1; k <= scn.steps; ++k) {
        const GameInstance game = constraints_at(x, res);
        CollectiveState next = fb_step(game, x, scn.epsilon);
        const double moved = std::sqrt(simd::sq_dist(next.values(), x.values()));
        x = std::move(next);
        res.trajectory.steps.push_back(k);
        res.trajectory.states.push_back(x);
        res.trajectory.residuals.push_back(moved);
        res.trajectory.modes.push_back(0);
        res.trajectory.iterations = k;
        res.final_displacement = moved;
        if (moved < scn.stop_tol) {
            res.converged = true;
            break;
        }
    }
    res.trajectory.converged = res.converged;

    ExplorationResult scratch;
    scratch.stalled.assign(n, false);
    res.final_nwe_residual = nwe_residual(constraints_at(x, scratch), x);
    return res;
}

}  // namespace proxnet
