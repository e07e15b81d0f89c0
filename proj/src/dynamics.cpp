#include "proxnet/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "proxnet/errors.hpp"
#include "proxnet/simd.hpp"

namespace proxnet {
namespace {

void check_state(const GameInstance& game, const CollectiveState& x) {
    if (x.agents() != game.agents() || x.dim() != game.dim()) {
        throw StructuralError("state has " + std::to_string(x.agents()) + " blocks of dimension " +
                              std::to_string(x.dim()) + ", game expects " + std::to_string(game.agents()) + " of " +
                              std::to_string(game.dim()));
    }
}

}  // namespace

GameInstance::GameInstance(AdjacencyMatrix p, std::size_t dim, std::vector<AgentCost> costs, WeightMatrix q,
                           double eta)
    : p_(std::move(p)), dim_(dim), costs_(std::move(costs)), q_(std::move(q)), eta_(eta) {
    if (dim_ == 0) throw StructuralError("game: state dimension must be positive");
    if (costs_.size() != p_.size() || q_.size() != p_.size()) {
        throw StructuralError("game: P, Q~ and the cost list must describe the same number of agents");
    }
    if (!(eta_ > 0.0 && eta_ < 1.0)) throw std::invalid_argument("game: eta must lie in (0, 1)");
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < costs_.size(); ++i) {
        costs_[i].validate();
        if (costs_[i].dimension() != dim_) throw StructuralError("game: cost " + std::to_string(i) + " has wrong dimension");
        if (q_.diagonal_only()) {
            for (double w : costs_[i].weight) {
                if (w != q_.matrix()(i, i)) {
                    violations.push_back("agent " + std::to_string(i + 1) + " weight differs from Q~ diagonal entry");
                    break;
                }
            }
        }
    }
    if (!violations.empty()) throw ValidationError("inconsistent game weights", std::move(violations));
}

GameInstance GameInstance::with_weights(AdjacencyMatrix p, std::size_t dim, std::vector<AgentCost> costs,
                                        WeightMatrix q, double eta) {
    if (!q.diagonal_only()) throw StructuralError("game: per-agent weights need a diagonal Q~");
    if (q.size() != costs.size()) throw StructuralError("game: Q~ size does not match the cost list");
    for (std::size_t i = 0; i < costs.size(); ++i) costs[i].weight.assign(dim, q.matrix()(i, i));
    return GameInstance(std::move(p), dim, std::move(costs), std::move(q), eta);
}

GameInstance GameInstance::with_constraints(std::vector<ConvexSet> sets) const {
    if (sets.size() != costs_.size()) throw StructuralError("game: constraint count does not match agents");
    GameInstance copy = *this;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (proxnet::dimension(sets[i]) != dim_) throw StructuralError("game: constraint has wrong dimension");
        copy.costs_[i].constraint = std::move(sets[i]);
    }
    return copy;
}

double q_norm(const WeightMatrix& q, std::span<const double> v, std::size_t n) {
    const std::size_t agents = q.size();
    if (n == 0 || v.size() != agents * n) throw StructuralError("q_norm: vector does not match Q~ (x) I_n");
    const Matrix& m = q.matrix();
    double acc = 0.0;
    if (q.diagonal_only()) {
        for (std::size_t i = 0; i < agents; ++i) {
            const auto b = v.subspan(i * n, n);
            acc += m(i, i) * simd::dot(b, b);
        }
    } else {
        for (std::size_t i = 0; i < agents; ++i)
            for (std::size_t j = 0; j < agents; ++j)
                if (m(i, j) != 0.0) acc += m(i, j) * simd::dot(v.subspan(i * n, n), v.subspan(j * n, n));
    }
    return std::sqrt(std::max(acc, 0.0));
}

double q_distance(const WeightMatrix& q, const CollectiveState& a, const CollectiveState& b) {
    if (a.agents() != b.agents() || a.dim() != b.dim()) throw StructuralError("q_distance: state shapes differ");
    Vector diff(a.values().begin(), a.values().end());
    simd::axpy(-1.0, b.values(), diff);
    return q_norm(q, diff, a.dim());
}

CollectiveState picard_step(const GameInstance& game, const CollectiveState& x) {
    check_state(game, x);
    const CollectiveState mixed(x.agents(), x.dim(), mix_blocks(game.adjacency().matrix(), x.values(), x.dim()));
    return prox_collective(game.costs(), mixed);
}

double nwe_residual(const GameInstance& game, const CollectiveState& x) {
    return q_distance(game.weights(), picard_step(game, x), x);
}

CollectiveState project_blocks(const GameInstance& game, const CollectiveState& x) {
    check_state(game, x);
    CollectiveState out(x.agents(), x.dim());
    for (std::size_t i = 0; i < x.agents(); ++i) project_into(game.costs()[i].constraint, x.block(i), out.block(i));
    return out;
}

bool feasible(const GameInstance& game, const CollectiveState& x, double tol) {
    check_state(game, x);
    for (std::size_t i = 0; i < x.agents(); ++i)
        if (!contains(game.costs()[i].constraint, x.block(i), tol)) return false;
    return true;
}

Trajectory iterate(const GameInstance& game, const CollectiveState& x0, const IterateOptions& options) {
    check_state(game, x0);
    const std::size_t stride = std::max<std::size_t>(options.stride, 1);
    Trajectory traj;
    CollectiveState x = x0;
    if (!feasible(game, x0)) {
        x = project_blocks(game, x0);
        traj.initial_projected = true;
    }
    traj.steps.push_back(0);
    traj.states.push_back(x);
    traj.modes.push_back(0);

    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        CollectiveState next = picard_step(game, x);
        const double r = q_distance(game.weights(), next, x);
        x = std::move(next);
        traj.iterations = k;
        const bool done = r < options.tol;
        if (done || k % stride == 0 || k == options.max_iter) {
            traj.steps.push_back(k);
            traj.states.push_back(x);
            traj.residuals.push_back(r);
            traj.modes.push_back(0);
        }
        if (done) {
            traj.converged = true;
            break;
        }
    }
    return traj;
}

CollectiveState fb_step(const GameInstance& game, const CollectiveState& x, double epsilon) {
    check_state(game, x);
    if (!(epsilon >= 0.0)) throw std::invalid_argument("fb_step: epsilon must be nonnegative");
    const Matrix& p = game.adjacency().matrix();
    const std::size_t n = x.dim();
    const Vector mixed = mix_blocks(p, x.values(), n);

    CollectiveState out(x.agents(), n);
    Vector y(n);
    for (std::size_t i = 0; i < x.agents(); ++i) {
        const AgentCost& cost = game.costs()[i];
        const double d = 1.0 - p(i, i);
        const auto xi = x.block(i);
        for (std::size_t k = 0; k < n; ++k) {
            const double forward = cost.weight[k] * (cost.gamma * (xi[k] - cost.target[k])) +
                                   d * (xi[k] - mixed[i * n + k]);
            y[k] = xi[k] - epsilon * forward;
        }
        project_into(cost.constraint, y, out.block(i));
    }
    return out;
}

}  // namespace proxnet
