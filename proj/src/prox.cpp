#include "proxnet/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proxnet/errors.hpp"
#include "proxnet/simd.hpp"

namespace proxnet {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw StructuralError(std::string(what) + ": dimension " + std::to_string(got) + ", expected " +
                              std::to_string(expected));
    }
}

void project_ball(const Ball& b, std::span<const double> x, std::span<double> out) {
    const double dist = std::sqrt(simd::sq_dist(x, b.center));
    if (dist <= b.radius) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    const double s = b.radius / dist;
    for (std::size_t d = 0; d < x.size(); ++d) out[d] = b.center[d] + s * (x[d] - b.center[d]);
}

}  // namespace

Box Box::from_bounds(Vector lower, Vector upper) {
    if (lower.size() != upper.size()) throw StructuralError("box bounds have different dimensions");
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) throw StructuralError("box bounds must be finite");
        if (lower[d] > upper[d]) {
            throw StructuralError("box lower bound exceeds upper bound in coordinate " + std::to_string(d));
        }
    }
    Box b;
    b.lower_ = std::move(lower);
    b.upper_ = std::move(upper);
    return b;
}

Box Box::centered(std::span<const double> center, std::span<const double> half_width) {
    require_dim(center.size(), half_width.size(), "box half-width");
    Vector lo(center.size()), hi(center.size());
    for (std::size_t d = 0; d < center.size(); ++d) {
        if (!(half_width[d] >= 0.0)) throw StructuralError("box half-width must be nonnegative");
        lo[d] = center[d] - half_width[d];
        hi[d] = center[d] + half_width[d];
    }
    return from_bounds(std::move(lo), std::move(hi));
}

Vector Box::center() const {
    Vector c(dimension());
    for (std::size_t d = 0; d < c.size(); ++d) c[d] = 0.5 * (lower_[d] + upper_[d]);
    return c;
}

Vector Box::half_width() const {
    Vector h(dimension());
    for (std::size_t d = 0; d < h.size(); ++d) h[d] = 0.5 * (upper_[d] - lower_[d]);
    return h;
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dimension(); ++d) v *= upper_[d] - lower_[d];
    return v;
}

bool Box::contains(std::span<const double> x, double tol) const {
    if (x.size() != dimension()) return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (x[d] < lower_[d] - tol || x[d] > upper_[d] + tol) return false;
    return true;
}

bool Box::interior_contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (!(x[d] > lower_[d] && x[d] < upper_[d])) return false;
    return true;
}

bool Box::overlaps(const Box& other) const {
    if (other.dimension() != dimension()) return false;
    for (std::size_t d = 0; d < dimension(); ++d)
        if (!(lower_[d] < other.upper_[d] && other.lower_[d] < upper_[d])) return false;
    return true;
}

bool Box::subset_of(const Box& other, double tol) const {
    if (other.dimension() != dimension()) return false;
    for (std::size_t d = 0; d < dimension(); ++d)
        if (lower_[d] < other.lower_[d] - tol || upper_[d] > other.upper_[d] + tol) return false;
    return true;
}

std::size_t dimension(const ConvexSet& set) {
    return std::visit(overloaded{[](const Box& b) { return b.dimension(); },
                                 [](const Ball& b) { return b.center.size(); },
                                 [](const SubBox& s) { return s.resolved.dimension(); }},
                      set);
}

bool contains(const ConvexSet& set, std::span<const double> x, double tol) {
    return std::visit(overloaded{[&](const Box& b) { return b.contains(x, tol); },
                                 [&](const Ball& b) {
                                     return x.size() == b.center.size() &&
                                            std::sqrt(simd::sq_dist(x, b.center)) <= b.radius + tol;
                                 },
                                 [&](const SubBox& s) { return s.resolved.contains(x, tol); }},
                      set);
}

void project_into(const ConvexSet& set, std::span<const double> x, std::span<double> out) {
    require_dim(dimension(set), x.size(), "project");
    require_dim(x.size(), out.size(), "project output");
    std::visit(overloaded{[&](const Box& b) { simd::clamp(x, b.lower(), b.upper(), out); },
                          [&](const Ball& b) { project_ball(b, x, out); },
                          [&](const SubBox& s) { simd::clamp(x, s.resolved.lower(), s.resolved.upper(), out); }},
               set);
}

Vector project(const ConvexSet& set, std::span<const double> x) {
    Vector out(x.size());
    project_into(set, x, out);
    return out;
}

void AgentCost::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw StructuralError("agent cost: gamma must be finite and >= 0");
    if (target.empty()) throw StructuralError("agent cost: empty target");
    require_dim(target.size(), weight.size(), "agent cost weight");
    require_dim(target.size(), proxnet::dimension(constraint), "agent cost constraint");
    for (double w : weight)
        if (!(w > 0.0) || !std::isfinite(w)) throw StructuralError("agent cost: weight entries must be positive");
    for (double t : target)
        if (!std::isfinite(t)) throw StructuralError("agent cost: target must be finite");
}

bool AgentCost::scalar_weight() const {
    return std::all_of(weight.begin(), weight.end(), [&](double w) { return w == weight.front(); });
}

double prox_objective(const AgentCost& cost, std::span<const double> z, std::span<const double> y) {
    if (!contains(cost.constraint, y, 1e-12)) return std::numeric_limits<double>::infinity();
    return 0.5 * cost.gamma * simd::weighted_sq_dist(y, cost.target, cost.weight) +
           0.5 * simd::weighted_sq_dist(y, z, cost.weight);
}

void prox_agent_into(const AgentCost& cost, std::span<const double> z, std::span<double> out) {
    const std::size_t n = cost.dimension();
    require_dim(n, z.size(), "prox_agent input");
    require_dim(n, out.size(), "prox_agent output");
    const bool box_like = !std::holds_alternative<Ball>(cost.constraint);
    if (!cost.scalar_weight() && !box_like) {
        throw UnsupportedConfiguration(
            "prox_agent: non-scalar weight with a ball constraint has no closed form; use prox_numerical_oracle");
    }
    // With Q diagonal the objective separates per coordinate and the weight cancels;
    // the unconstrained minimizer is the gamma-weighted average of target and z.
    const double denom = 1.0 + cost.gamma;
    Vector v(n);
    for (std::size_t d = 0; d < n; ++d) v[d] = (cost.gamma * cost.target[d] + z[d]) / denom;
    project_into(cost.constraint, v, out);
}

Vector prox_agent(const AgentCost& cost, std::span<const double> z) {
    Vector out(cost.dimension());
    prox_agent_into(cost, z, out);
    return out;
}

Vector prox_numerical_oracle(const AgentCost& cost, std::span<const double> z, double tol, std::size_t max_iter) {
    const std::size_t n = cost.dimension();
    require_dim(n, z.size(), "prox_numerical_oracle input");
    const double lipschitz = (1.0 + cost.gamma) * *std::max_element(cost.weight.begin(), cost.weight.end());
    const double step = 1.0 / lipschitz;

    Vector y = project(cost.constraint, z);
    Vector trial(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t d = 0; d < n; ++d) {
            const double grad = cost.weight[d] * (cost.gamma * (y[d] - cost.target[d]) + (y[d] - z[d]));
            trial[d] = y[d] - step * grad;
        }
        project_into(cost.constraint, trial, trial);
        const double moved = std::sqrt(simd::sq_dist(trial, y));
        y.swap(trial);
        if (moved < tol) return y;
    }
    throw ConvergenceError("prox_numerical_oracle: no convergence within " + std::to_string(max_iter) + " steps");
}

CollectiveState::CollectiveState(std::size_t agents, std::size_t dim, double fill)
    : agents_(agents), dim_(dim), values_(agents * dim, fill) {}

CollectiveState::CollectiveState(std::size_t agents, std::size_t dim, Vector values)
    : agents_(agents), dim_(dim), values_(std::move(values)) {
    if (values_.size() != agents * dim) throw StructuralError("collective state: value count does not match shape");
}

CollectiveState CollectiveState::from_blocks(const std::vector<Vector>& blocks) {
    if (blocks.empty()) throw StructuralError("collective state: no blocks");
    CollectiveState s(blocks.size(), blocks.front().size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        require_dim(s.dim_, blocks[i].size(), "collective state block");
        std::copy(blocks[i].begin(), blocks[i].end(), s.block(i).begin());
    }
    return s;
}

CollectiveState prox_collective(std::span<const AgentCost> costs, const CollectiveState& z) {
    if (costs.size() != z.agents()) {
        throw StructuralError("prox_collective: " + std::to_string(costs.size()) + " costs for " +
                              std::to_string(z.agents()) + " blocks");
    }
    CollectiveState out(z.agents(), z.dim());
    for (std::size_t i = 0; i < costs.size(); ++i) prox_agent_into(costs[i], z.block(i), out.block(i));
    return out;
}

}  // namespace proxnet
