#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "proxnet/dynamics.hpp"

namespace proxnet {

inline constexpr double kModeFeasibilityTol = 1e-9;

/// One communication mode: P_i, diagonal Q~_i certifying P_i at eta_i, and the
/// linear-regularity constant kappa_i (assumed, not derivable).
class SwitchMode {
  public:
    /// Throws ValidationError if Q~ is not diagonal or the LMI check fails at
    /// feasibility_tol; std::invalid_argument for kappa <= 0 or eta outside (0, 1).
    SwitchMode(AdjacencyMatrix p, WeightMatrix q, double eta, double kappa = 1.0,
               double feasibility_tol = kModeFeasibilityTol);

    const AdjacencyMatrix& adjacency() const noexcept { return p_; }
    const WeightMatrix& weights() const noexcept { return q_; }
    double eta() const noexcept { return eta_; }
    double kappa() const noexcept { return kappa_; }
    const FeasibilityCertificate& certificate() const noexcept { return cert_; }

    /// (1 - eta) / eta
    double alpha() const noexcept { return (1.0 - eta_) / eta_; }
    /// sqrt(kappa^2 / alpha / (1 + kappa^2 / alpha)), in [0, 1)
    double phi() const noexcept;
    double lambda_min() const noexcept { return q_.lambda_min(); }
    double lambda_max() const noexcept { return q_.lambda_max(); }

  private:
    AdjacencyMatrix p_;
    WeightMatrix q_;
    double eta_;
    double kappa_;
    FeasibilityCertificate cert_;
};

/// phi as a function of (alpha, kappa), and its inverse.
double phi_from_kappa(double alpha, double kappa);
double kappa_from_phi(double alpha, double phi);

struct DwellParams {
    double phi = 0.0;
    double lambda_ratio = 1.0;  ///< lambda_min / lambda_max of the mode's Q~
};

/// tau_min = ln(2^-M prod_j ratio_j) / ln(prod_j phi_j). Returns 0 when some
/// phi_j is 0. Throws InvalidMode for phi_j outside [0, 1) or a ratio outside (0, 1].
double dwell_lower_bound(std::span<const DwellParams> modes);
double dwell_lower_bound(std::span<const SwitchMode> modes);

struct Segment {
    std::size_t mode = 0;  ///< 0-based mode index
    std::size_t duration = 0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-constant schedule, repeated cyclically past its horizon.
struct SwitchingSignal {
    std::vector<Segment> segments;
    std::size_t tau = 0;
    bool exhaustive = false;  ///< every mode must occur within one period

    std::size_t horizon() const;
    /// Mode active at step k. Throws std::logic_error on an empty or zero-length signal.
    std::size_t mode_at(std::size_t k) const;

    friend bool operator==(const SwitchingSignal&, const SwitchingSignal&) = default;
};

/// Every duration must strictly exceed tau; indices must be < mode_count.
ValidationReport validate_signal(const SwitchingSignal& signal, std::size_t mode_count);

/// Agents with fixed costs whose communication switches among modes.
class SwitchedGame {
  public:
    /// Cost weights are replaced per mode by that mode's Q~_ii.
    SwitchedGame(std::vector<SwitchMode> modes, std::size_t dim, std::vector<AgentCost> costs);

    std::size_t mode_count() const noexcept { return modes_.size(); }
    const std::vector<SwitchMode>& modes() const noexcept { return modes_; }
    const SwitchMode& mode(std::size_t m) const { return modes_.at(m); }
    const GameInstance& game(std::size_t m) const { return games_.at(m); }
    std::size_t dim() const noexcept { return games_.front().dim(); }
    std::size_t agents() const noexcept { return games_.front().agents(); }

  private:
    std::vector<SwitchMode> modes_;
    std::vector<GameInstance> games_;
};

/// max_i ||T_i x - x||_{Q~_i}, with T_i the Picard map of mode i. Zero exactly
/// on the intersection of all modes' fixed-point sets.
double pnwe_residual(const SwitchedGame& game, const CollectiveState& x);

/// x(k+1) = T_{sigma(k)} x(k) until pnwe_residual < tol or max_iter steps.
/// residuals hold the PNWE residual after each step. Throws ValidationError if
/// the signal does not validate.
Trajectory switched_iterate(const SwitchedGame& game, const SwitchingSignal& signal, const CollectiveState& x0,
                            const IterateOptions& options = {});

struct ContractionReport {
    bool vacuous = false;
    double phi = 0.0;
    std::vector<double> distances;  ///< ||x(n + k) - reference||_{Q~_i}
    std::vector<double> ratios;     ///< distances[k] / distances[0]
    std::vector<double> envelope;   ///< 2 phi^k
    std::vector<std::size_t> violations;
    /// Smallest phi for which ratio_k <= 2 phi^k holds at every recorded k.
    double required_phi = 0.0;
    double calibrated_kappa = 0.0;
    /// Largest one-step ratio distances[k + 1] / distances[k].
    double per_step_factor = 0.0;
    double kappa_from_step_factor = 0.0;
};

/// Checks d(x(n + k)) <= 2 phi^k d(x(n)) along a segment run under one mode,
/// measuring distance to `reference` (a point of the equilibrium set). phi
/// defaults to the mode's own value.
ContractionReport contraction_diagnostic(const SwitchMode& mode, std::span<const CollectiveState> segment,
                                         const CollectiveState& reference, std::optional<double> phi = std::nullopt,
                                         double slack = 1e-12);

}  // namespace proxnet
