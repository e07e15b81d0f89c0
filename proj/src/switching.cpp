#include "proxnet/switching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "proxnet/errors.hpp"

namespace proxnet {

SwitchMode::SwitchMode(AdjacencyMatrix p, WeightMatrix q, double eta, double kappa, double feasibility_tol)
    : p_(std::move(p)), q_(std::move(q)), eta_(eta), kappa_(kappa) {
    if (!(eta_ > 0.0 && eta_ < 1.0)) throw std::invalid_argument("switch mode: eta must lie in (0, 1)");
    if (!(kappa_ > 0.0) || !std::isfinite(kappa_)) throw std::invalid_argument("switch mode: kappa must be positive");
    if (q_.size() != p_.size()) throw StructuralError("switch mode: Q~ and P sizes differ");
    if (!q_.diagonal_only()) throw ValidationError("switch mode rejected", {"Q~ must be diagonal"});
    cert_ = check_feasible(q_, p_, eta_, feasibility_tol);
    if (!cert_.feasible) {
        throw ValidationError("switch mode rejected",
                              {"LMI not satisfied: lambda_min = " + std::to_string(cert_.min_eigenvalue)});
    }
}

double SwitchMode::phi() const noexcept { return phi_from_kappa(alpha(), kappa_); }

double phi_from_kappa(double alpha, double kappa) {
    const double r = kappa * kappa / alpha;
    return std::sqrt(r / (1.0 + r));
}

double kappa_from_phi(double alpha, double phi) {
    if (phi >= 1.0) return std::numeric_limits<double>::infinity();
    const double phi2 = phi * phi;
    return std::sqrt(alpha * phi2 / (1.0 - phi2));
}

double dwell_lower_bound(std::span<const DwellParams> modes) {
    if (modes.empty()) throw InvalidMode("dwell_lower_bound: no modes");
    double log_phi = 0.0;
    double log_arg = -static_cast<double>(modes.size()) * std::log(2.0);
    bool any_zero = false;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const auto& m = modes[j];
        if (!(m.phi >= 0.0 && m.phi < 1.0)) {
            throw InvalidMode("dwell_lower_bound: phi of mode " + std::to_string(j + 1) + " must lie in [0, 1)");
        }
        if (!(m.lambda_ratio > 0.0 && m.lambda_ratio <= 1.0)) {
            throw InvalidMode("dwell_lower_bound: eigenvalue ratio of mode " + std::to_string(j + 1) +
                              " must lie in (0, 1]");
        }
        if (m.phi == 0.0) any_zero = true;
        else log_phi += std::log(m.phi);
        log_arg += std::log(m.lambda_ratio);
    }
    if (any_zero) return 0.0;
    return log_arg / log_phi;
}

double dwell_lower_bound(std::span<const SwitchMode> modes) {
    std::vector<DwellParams> params;
    params.reserve(modes.size());
    for (const auto& m : modes) params.push_back({m.phi(), m.lambda_min() / m.lambda_max()});
    return dwell_lower_bound(params);
}

std::size_t SwitchingSignal::horizon() const {
    std::size_t total = 0;
    for (const auto& s : segments) total += s.duration;
    return total;
}

std::size_t SwitchingSignal::mode_at(std::size_t k) const {
    const std::size_t period = horizon();
    if (period == 0) throw std::logic_error("switching signal has zero horizon");
    std::size_t t = k % period;
    for (const auto& s : segments) {
        if (t < s.duration) return s.mode;
        t -= s.duration;
    }
    return segments.back().mode;
}

ValidationReport validate_signal(const SwitchingSignal& signal, std::size_t mode_count) {
    ValidationReport report;
    if (signal.segments.empty()) report.fail("signal has no segments");
    std::vector<bool> seen(mode_count, false);
    for (std::size_t i = 0; i < signal.segments.size(); ++i) {
        const auto& s = signal.segments[i];
        if (s.mode >= mode_count) {
            report.fail("segment " + std::to_string(i + 1) + " uses mode " + std::to_string(s.mode + 1) + " of " +
                        std::to_string(mode_count));
        } else {
            seen[s.mode] = true;
        }
        if (!(s.duration > signal.tau)) {
            report.fail("segment " + std::to_string(i + 1) + " lasts " + std::to_string(s.duration) +
                        " steps, dwell time requires more than " + std::to_string(signal.tau));
        }
    }
    if (signal.exhaustive) {
        for (std::size_t m = 0; m < mode_count; ++m)
            if (!seen[m]) report.fail("mode " + std::to_string(m + 1) + " never occurs");
    }
    return report;
}

SwitchedGame::SwitchedGame(std::vector<SwitchMode> modes, std::size_t dim, std::vector<AgentCost> costs)
    : modes_(std::move(modes)) {
    if (modes_.empty()) throw StructuralError("switched game: no modes");
    games_.reserve(modes_.size());
    for (const auto& m : modes_) games_.push_back(GameInstance::with_weights(m.adjacency(), dim, costs, m.weights(), m.eta()));
}

double pnwe_residual(const SwitchedGame& game, const CollectiveState& x) {
    double worst = 0.0;
    for (std::size_t m = 0; m < game.mode_count(); ++m) worst = std::max(worst, nwe_residual(game.game(m), x));
    return worst;
}

Trajectory switched_iterate(const SwitchedGame& game, const SwitchingSignal& signal, const CollectiveState& x0,
                            const IterateOptions& options) {
    auto report = validate_signal(signal, game.mode_count());
    if (!report.is_valid) throw ValidationError("invalid switching signal", std::move(report.violations));
    const std::size_t stride = std::max<std::size_t>(options.stride, 1);

    Trajectory traj;
    CollectiveState x = x0;
    if (!feasible(game.game(0), x0)) {
        x = project_blocks(game.game(0), x0);
        traj.initial_projected = true;
    }
    traj.steps.push_back(0);
    traj.states.push_back(x);
    traj.modes.push_back(signal.mode_at(0));
    if (pnwe_residual(game, x) < options.tol) {
        traj.converged = true;
        return traj;
    }

    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        x = picard_step(game.game(signal.mode_at(k - 1)), x);
        const double r = pnwe_residual(game, x);
        traj.iterations = k;
        const bool done = r < options.tol;
        if (done || k % stride == 0 || k == options.max_iter) {
            traj.steps.push_back(k);
            traj.states.push_back(x);
            traj.residuals.push_back(r);
            traj.modes.push_back(signal.mode_at(k));
        }
        if (done) {
            traj.converged = true;
            break;
        }
    }
    return traj;
}

ContractionReport contraction_diagnostic(const SwitchMode& mode, std::span<const CollectiveState> segment,
                                         const CollectiveState& reference, std::optional<double> phi, double slack) {
    ContractionReport rep;
    rep.phi = phi.value_or(mode.phi());
    if (segment.empty()) {
        rep.vacuous = true;
        return rep;
    }
    for (const auto& x : segment) rep.distances.push_back(q_distance(mode.weights(), x, reference));
    const double d0 = rep.distances.front();
    if (!(d0 > 0.0)) {
        rep.vacuous = true;
        return rep;
    }
    for (std::size_t k = 0; k < rep.distances.size(); ++k) {
        const double ratio = rep.distances[k] / d0;
        const double env = 2.0 * std::pow(rep.phi, static_cast<double>(k));
        rep.ratios.push_back(ratio);
        rep.envelope.push_back(env);
        if (ratio > env + slack) rep.violations.push_back(k);
        if (k > 0) {
            rep.required_phi = std::max(rep.required_phi, std::pow(ratio / 2.0, 1.0 / static_cast<double>(k)));
            if (rep.distances[k - 1] > 0.0) {
                rep.per_step_factor = std::max(rep.per_step_factor, rep.distances[k] / rep.distances[k - 1]);
            }
        }
    }
    rep.calibrated_kappa = kappa_from_phi(mode.alpha(), rep.required_phi);
    rep.kappa_from_step_factor = kappa_from_phi(mode.alpha(), rep.per_step_factor);
    return rep;
}

}  // namespace proxnet
