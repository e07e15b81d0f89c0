#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxnet/errors.hpp"
#include "proxnet/matrix.hpp"
#include "proxnet/prox.hpp"
#include "proxnet/scenario.hpp"
#include "proxnet/switching.hpp"

namespace proxnet {

// One JSON document drives every subcommand. Sections:
//
//   graph       {"P": [[...], ...]}                                   required
//   weights     {"Q": [q_1, ..., q_N]}                                diagonal of Q~
//   agents      {"dim": n, "list": [{"gamma", "target", "initial", "constraint"}]}
//                constraint: {"box": {"center", "half_width"}} | {"ball": {"center", "radius"}}
//   signal      {"tau", "exhaustive", "modes": [{"P", "Q", "eta", "kappa"}], "segments": [[mode, duration], ...]}
//                mode indices are 1-based in the file
//   scenario    {"initial", "targets", "gamma", "r", "epsilon", "steps", "obstacles": [{"lower", "upper"}]}
//   solver      {"eta", "tol", "max_iter", "stride", "seed"}
//   certificate {"eta", "lambda_min", "feasible", "seed"}                written by solve-lmi
//
// Unknown keys are rejected with their JSON pointer path.

struct AgentSpec {
    double gamma = 0.0;
    Vector target;
    Vector initial;
    ConvexSet constraint;

    friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct AgentsSection {
    std::size_t dim = 0;
    std::vector<AgentSpec> list;

    friend bool operator==(const AgentsSection&, const AgentsSection&) = default;
};

struct ModeSpec {
    Matrix p;
    Vector q;
    double eta = kDefaultEta;
    double kappa = 1.0;

    friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

struct SignalSection {
    std::vector<ModeSpec> modes;
    SwitchingSignal signal;

    friend bool operator==(const SignalSection&, const SignalSection&) = default;
};

struct ScenarioSection {
    std::vector<Vector> initial;
    std::vector<Vector> targets;
    Vector gamma;
    double r = 5.0;
    double epsilon = 1.0;
    std::size_t steps = 2000;
    std::vector<Box> obstacles;

    friend bool operator==(const ScenarioSection&, const ScenarioSection&) = default;
};

struct SolverSection {
    double eta = kDefaultEta;
    double tol = kDefaultTol;
    std::size_t max_iter = kDefaultMaxIter;
    std::size_t stride = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const SolverSection&, const SolverSection&) = default;
};

struct CertificateSection {
    double eta = 0.0;
    double lambda_min = 0.0;
    bool feasible = false;
    std::uint64_t seed = 0;

    friend bool operator==(const CertificateSection&, const CertificateSection&) = default;
};

struct Config {
    Matrix graph;
    std::optional<Vector> weights;
    std::optional<AgentsSection> agents;
    std::optional<SignalSection> signal;
    std::optional<ScenarioSection> scenario;
    SolverSection solver;
    std::optional<CertificateSection> certificate;

    friend bool operator==(const Config&, const Config&) = default;
};

/// Throws ParseError naming the source and the offending line or JSON path.
Config parse_config_text(std::string_view text, std::string_view source = "<config>");
Config parse_config_file(const std::filesystem::path& path);

/// Serializes to the same document format; parse_config_text(write_config(c)) == c.
std::string write_config(const Config& config);

/// Semantic checks owned by the domain modules (graph validity, positive
/// weights, per-agent dimensions, signal dwell constraints).
ValidationReport validate_config(const Config& config);

/// Domain objects built from a validated config. Each throws ValidationError
/// or StructuralError when its sections are missing or invalid.
AdjacencyMatrix make_adjacency(const Config& config);
WeightMatrix make_weights(const Config& config);
GameInstance make_game(const Config& config);
CollectiveState make_initial_state(const Config& config);
SwitchedGame make_switched_game(const Config& config);
RobotScenario make_scenario(const Config& config, bool with_obstacles);

}  // namespace proxnet
