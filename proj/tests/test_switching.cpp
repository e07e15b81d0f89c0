#include <doctest.h>

#include "proxnet/errors.hpp"
#include "proxnet/switching.hpp"
#include "support.hpp"

using namespace proxnet;
using testing::Rng;

namespace {


std::vector<AgentCost> common_target_costs(std::size_t agents, const Vector& target, const Box& box) {
    std::vector<AgentCost> costs;
    for (std::size_t i = 0; i < agents; ++i) costs.push_back({0.5 + 0.25 * static_cast<double>(i), target, box, {}});
    return costs;
}

// Four-robot graph certified by its stationary distribution at eta 0.6, and a lazy ring
// certified by the identity at eta 0.5.
std::vector<SwitchMode> two_modes() {
    const Matrix ring{{0.5, 0.25, 0, 0.25}, {0.25, 0.5, 0.25, 0}, {0, 0.25, 0.5, 0.25}, {0.25, 0, 0.25, 0.5}};
    std::vector<SwitchMode> modes;
    modes.emplace_back(AdjacencyMatrix(testing::ref_p()), WeightMatrix::diagonal(testing::stationary(testing::ref_p())), 0.6);
    modes.emplace_back(AdjacencyMatrix(ring), WeightMatrix::diagonal(Vector(4, 1.0)), 0.5);
    return modes;
}

}  // namespace

TEST_CASE("phi and kappa are inverse maps") {
    Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        const double alpha = rng.uniform(0.01, 10), kappa = rng.uniform(0.01, 10);
        const double phi = phi_from_kappa(alpha, kappa);
        CHECK(phi >= 0.0);
        CHECK(phi < 1.0);
        CHECK(kappa_from_phi(alpha, phi) == doctest::Approx(kappa).epsilon(1e-10));
    }
    // alpha = 1, kappa = 1: sqrt(1 / 2)
    CHECK(phi_from_kappa(1.0, 1.0) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("dwell bound examples") {
    const DwellParams half[] = {{0.5, 1.0}, {0.5, 1.0}};
    CHECK(dwell_lower_bound(half) == doctest::Approx(1.0).epsilon(1e-15));

    // Independent 40-digit evaluation: 6.069775952172719806814505...
    const DwellParams three[] = {{0.9, 0.5}, {0.8, 0.25}, {0.7, 1.0}};
    CHECK(std::abs(dwell_lower_bound(three) - 6.0697759521727198) <= 1e-12);

    const DwellParams zero[] = {{0.0, 0.5}, {0.8, 0.25}};
    CHECK(dwell_lower_bound(zero) == 0.0);
}

TEST_CASE("dwell bound rejects invalid modes") {
    const DwellParams one[] = {{1.0, 0.5}};
    CHECK_THROWS_AS(dwell_lower_bound(one), InvalidMode);
    const DwellParams neg[] = {{-0.1, 0.5}};
    CHECK_THROWS_AS(dwell_lower_bound(neg), InvalidMode);
    const DwellParams ratio[] = {{0.5, 1.5}};
    CHECK_THROWS_AS(dwell_lower_bound(ratio), InvalidMode);
    const DwellParams zero_ratio[] = {{0.5, 0.0}};
    CHECK_THROWS_AS(dwell_lower_bound(zero_ratio), InvalidMode);
}

TEST_CASE("two-mode dwell bound equals the closed form") {
    Rng rng(103);
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
        const double p1 = rng.uniform(0.01, 0.999), p2 = rng.uniform(0.01, 0.999);
        const double lmin1 = rng.uniform(0.01, 1), lmax1 = lmin1 + rng.uniform(0, 5);
        const double lmin2 = rng.uniform(0.01, 1), lmax2 = lmin2 + rng.uniform(0, 5);
        const DwellParams modes[] = {{p1, lmin1 / lmax1}, {p2, lmin2 / lmax2}};
        const double closed = std::log(lmin1 * lmin2 / (4.0 * lmax2 * lmax1)) / std::log(p2 * p1);
        worst = std::max(worst, std::abs(dwell_lower_bound(modes) - closed) / std::max(1.0, std::abs(closed)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("dwell bound is invariant under uniform weight scaling") {
    const auto modes = two_modes();
    const double base = dwell_lower_bound(std::span<const SwitchMode>(modes));
    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
        std::vector<SwitchMode> scaled;
        for (const auto& m : modes) scaled.emplace_back(m.adjacency(), m.weights().scaled(c), m.eta(), m.kappa(), 1e-9 * c);
        CHECK(dwell_lower_bound(std::span<const SwitchMode>(scaled)) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("switch modes require diagonal certified weights") {
    CHECK_THROWS_AS(SwitchMode(AdjacencyMatrix(testing::ref_p()), WeightMatrix::diagonal(testing::ref_q()), 0.5),
                    ValidationError);
    CHECK_THROWS_AS(SwitchMode(AdjacencyMatrix(Matrix{{0.5, 0.5}, {0.5, 0.5}}), WeightMatrix(Matrix{{2, 1}, {1, 2}}), 0.5),
                    ValidationError);
    const SwitchMode ok(AdjacencyMatrix(Matrix{{0.5, 0.5}, {0.5, 0.5}}), WeightMatrix::diagonal(Vector{1, 1}), 0.5, 2.0);
    CHECK(ok.alpha() == 1.0);
    CHECK(ok.phi() == doctest::Approx(std::sqrt(4.0 / 5.0)));
}

TEST_CASE("signal validation") {
    SwitchingSignal s{{{0, 5}, {1, 5}}, 4, false};
    CHECK(validate_signal(s, 2).is_valid);
    s = {{{0, 4}}, 4, false};
    CHECK_FALSE(validate_signal(s, 1).is_valid);
    s = {{{0, 10}, {0, 10}}, 4, true};
    CHECK_FALSE(validate_signal(s, 2).is_valid);
    s = {{{2, 10}}, 4, false};
    CHECK_FALSE(validate_signal(s, 2).is_valid);
    s = {{}, 0, false};
    CHECK_FALSE(validate_signal(s, 1).is_valid);
}

TEST_CASE("signal repeats cyclically") {
    const SwitchingSignal s{{{0, 3}, {1, 2}}, 1, false};
    CHECK(s.horizon() == 5);
    const std::size_t expected[] = {0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 0};
    for (std::size_t k = 0; k < std::size(expected); ++k) CHECK(s.mode_at(k) == expected[k]);
}

TEST_CASE("single mode switching reproduces the time-invariant iteration") {
    const Box box = Box::from_bounds({-10, -10}, {10, 10});
    std::vector<AgentCost> costs{{1.0, {1, 2}, box, {}}, {2.0, {-3, 0}, box, {}}};
    const AdjacencyMatrix p(Matrix{{0.5, 0.5}, {0.5, 0.5}});
    const WeightMatrix q = WeightMatrix::diagonal(Vector{1, 1});
    std::vector<SwitchMode> modes;
    modes.emplace_back(p, q, 0.5);
    const SwitchedGame sg(modes, 2, costs);
    const auto game = GameInstance::with_weights(p, 2, costs, q);
    const CollectiveState x0(2, 2, Vector{4, 4, -4, -4});
    const auto a = iterate(game, x0);
    const auto b = switched_iterate(sg, {{{0, 7}}, 3, false}, x0);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    // Same iterates; the stop rules (step length vs. fixed-point residual of the new state) may end one step apart.
    const std::size_t common = std::min(a.states.size(), b.states.size());
    for (std::size_t k = 0; k < common; ++k) CHECK(a.states[k] == b.states[k]);
    CHECK(std::max(a.iterations, b.iterations) - std::min(a.iterations, b.iterations) <= 1);
}

TEST_CASE("common target is a persistent equilibrium") {
    const auto modes = two_modes();
    const Box box = Box::from_bounds({-10, -10}, {10, 10});
    const SwitchedGame sg(modes, 2, common_target_costs(4, {3, -2}, box));
    CollectiveState consensus(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        consensus.block(i)[0] = 3;
        consensus.block(i)[1] = -2;
    }
    CHECK(pnwe_residual(sg, consensus) <= 1e-12);

    // Distinct targets: the equilibrium of mode 1 is not fixed by mode 2.
    std::vector<AgentCost> costs;
    for (std::size_t i = 0; i < 4; ++i) costs.push_back({1.0, {double(i), -double(i)}, box, {}});
    const SwitchedGame distinct(modes, 2, costs);
    const auto eq1 = iterate(distinct.game(0), CollectiveState(4, 2), {1e-13, 100000, 100000});
    CHECK(nwe_residual(distinct.game(0), eq1.states.back()) < 1e-12);
    CHECK(pnwe_residual(distinct, eq1.states.back()) > 1e-6);
}

TEST_CASE("switched iteration converges under a dwell-time signal") {
    const auto modes = two_modes();
    const double bound = dwell_lower_bound(std::span<const SwitchMode>(modes));
    const std::size_t tau = static_cast<std::size_t>(std::ceil(bound));
    const Box box = Box::from_bounds({-10, -10}, {10, 10});
    const SwitchedGame sg(modes, 2, common_target_costs(4, {3, -2}, box));
    const CollectiveState x0 = CollectiveState::from_blocks({{-9, 9}, {9, 9}, {-9, -9}, {9, -9}});
    const SwitchingSignal sig{{{0, tau + 1}, {1, tau + 3}}, tau, true};
    const auto traj = switched_iterate(sg, sig, x0, {1e-10, 10000, 1});
    REQUIRE(traj.converged);
    CHECK(pnwe_residual(sg, traj.states.back()) < 1e-10);
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) CHECK(traj.modes[k] == sig.mode_at(traj.steps[k]));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(traj.states.back().block(i)[0] == doctest::Approx(3.0).epsilon(1e-8));
        CHECK(traj.states.back().block(i)[1] == doctest::Approx(-2.0).epsilon(1e-8));
    }
    const SwitchingSignal bad{{{0, tau}, {1, tau + 3}}, tau, false};
    CHECK_THROWS_AS(switched_iterate(sg, bad, x0), ValidationError);
}

TEST_CASE("contraction diagnostic") {
    const auto modes = two_modes();
    const Box box = Box::from_bounds({-10, -10}, {10, 10});
    const SwitchedGame sg(modes, 2, common_target_costs(4, {3, -2}, box));
    const CollectiveState target = CollectiveState::from_blocks({{3, -2}, {3, -2}, {3, -2}, {3, -2}});

    SUBCASE("segment at the fixed point is vacuous") {
        const std::vector<CollectiveState> seg(5, target);
        const auto rep = contraction_diagnostic(modes[0], seg, target);
        CHECK(rep.vacuous);
        CHECK(rep.violations.empty());
    }
    SUBCASE("a loose envelope holds on every converging segment") {
        const auto traj = iterate(sg.game(1), CollectiveState::from_blocks({{-9, 9}, {9, 9}, {-9, -9}, {9, -9}}),
                                  {1e-12, 10000, 1});
        const auto rep = contraction_diagnostic(modes[1], traj.states, target, 0.99);
        CHECK_FALSE(rep.vacuous);
        CHECK(rep.violations.empty());
        CHECK(rep.ratios.front() == 1.0);
    }
    SUBCASE("calibration on the two-agent scalar game") {
        const Box line = Box::from_bounds({-100}, {100});
        std::vector<AgentCost> costs{{1.0, {1.0}, line, {}}, {1.0, {1.0}, line, {}}};
        std::vector<SwitchMode> one;
        one.emplace_back(AdjacencyMatrix(Matrix{{0.5, 0.5}, {0.5, 0.5}}), WeightMatrix::diagonal(Vector{1, 1}), 0.5);
        const SwitchedGame g(one, 1, costs);
        const CollectiveState fixed(2, 1, Vector{1, 1});
        const auto traj = iterate(g.game(0), CollectiveState(2, 1, Vector{5, -7}), {1e-12, 1000, 1});
        const auto rep = contraction_diagnostic(one[0], traj.states, fixed);
        // Brute force over the recorded segment.
        double factor = 0.0;
        for (std::size_t k = 1; k < traj.states.size(); ++k) {
            const double prev = q_distance(one[0].weights(), traj.states[k - 1], fixed);
            if (prev > 0) factor = std::max(factor, q_distance(one[0].weights(), traj.states[k], fixed) / prev);
        }
        CHECK(rep.per_step_factor == doctest::Approx(factor).epsilon(1e-12));
        CHECK(rep.kappa_from_step_factor == doctest::Approx(kappa_from_phi(1.0, factor)).epsilon(1e-12));
        // Each step halves the distance: x+ = (x* + mean) / 2 with mean preserved by P.
        CHECK(factor == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("distance to the common fixed point does not grow within a segment") {
    Rng rng(107);
    const auto modes = two_modes();
    const Box box = Box::from_bounds({-10, -10}, {10, 10});
    const Vector target{1, -1};
    const SwitchedGame sg(modes, 2, common_target_costs(4, target, box));
    const CollectiveState xbar = CollectiveState::from_blocks({target, target, target, target});
    const std::size_t tau = static_cast<std::size_t>(std::ceil(dwell_lower_bound(std::span<const SwitchMode>(modes))));
    for (int t = 0; t < 30; ++t) {
        const SwitchingSignal sig{{{0, tau + rng.index(1, 6)}, {1, tau + rng.index(1, 6)}, {0, tau + rng.index(1, 6)}},
                                  tau, true};
        const auto traj = switched_iterate(sg, sig, CollectiveState(4, 2, rng.vector(8, -10, 10)), {1e-12, 2000, 1});
        for (std::size_t k = 1; k < traj.states.size(); ++k) {
            const std::size_t mode = sig.mode_at(k - 1);
            if (k >= 2 && sig.mode_at(k - 2) != mode) continue;  // compare only steps inside one segment
            const WeightMatrix& q = sg.mode(mode).weights();
            CHECK(q_distance(q, traj.states[k], xbar) <= q_distance(q, traj.states[k - 1], xbar) + 1e-10);
        }
    }
}
