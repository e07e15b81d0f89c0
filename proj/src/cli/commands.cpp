#include "proxnet/cli.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "proxnet/config.hpp"
#include "proxnet/export.hpp"

namespace proxnet::cli {
namespace {

using json = nlohmann::json;

constexpr std::string_view kModeNames[] = {"validate-graph", "solve-lmi",   "simulate",
                                           "switch-sim",     "dwell-bound", "explore"};

Config load(const RunConfig& run) {
    Config cfg = parse_config_file(run.input);
    if (run.eta) cfg.solver.eta = *run.eta;
    if (run.tol) cfg.solver.tol = *run.tol;
    if (run.max_iter) cfg.solver.max_iter = *run.max_iter;
    if (run.seed) cfg.solver.seed = *run.seed;
    if (run.stride) cfg.solver.stride = *run.stride;
    if (run.tau && cfg.signal) cfg.signal->signal.tau = *run.tau;
    return cfg;
}

IterateOptions iterate_options(const Config& cfg) { return {cfg.solver.tol, cfg.solver.max_iter, cfg.solver.stride}; }

std::vector<Vector> agent_targets(const Config& cfg) {
    std::vector<Vector> t;
    for (const auto& a : cfg.agents->list) t.push_back(a.target);
    return t;
}

std::vector<Vector> final_blocks(const Trajectory& traj) {
    std::vector<Vector> out;
    const auto& x = traj.states.back();
    for (std::size_t i = 0; i < x.agents(); ++i) out.emplace_back(x.block(i).begin(), x.block(i).end());
    return out;
}

void write_json(const std::filesystem::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

// Plots need a planar state; other dimensions silently skip the SVG.
void write_trajectory(const RunConfig& run, const Trajectory& traj, const std::vector<Vector>& targets,
                      const std::vector<Box>& obstacles, std::uint64_t seed, std::ostream& out) {
    export_csv(traj, run.output_dir / "trajectory.csv");
    out << "wrote " << (run.output_dir / "trajectory.csv").string() << "\n";
    if (!traj.states.empty() && traj.states.front().dim() == 2) {
        export_svg(traj, targets, obstacles, run.output_dir / "trajectory.svg", PlotOptions{seed});
        out << "wrote " << (run.output_dir / "trajectory.svg").string() << "\n";
    }
}

int cmd_validate_graph(const RunConfig& run, const Config& cfg, std::ostream& out, std::ostream& err) {
    const ValidationReport report = validate_adjacency(cfg.graph);
    if (!report.is_valid) {
        for (const auto& v : report.violations) err << "graph: " << v << "\n";
        return failed;
    }
    out << "graph valid: " << cfg.graph.rows() << " agents, row-stochastic, self-loops present, strongly connected\n";
    write_json(run.output_dir / "summary.json",
               {{"command", "validate-graph"}, {"valid", true}, {"agents", cfg.graph.rows()}, {"seed", cfg.solver.seed}});
    return ok;
}

int cmd_solve_lmi(const RunConfig& run, Config cfg, std::ostream& out, std::ostream& err) {
    const AdjacencyMatrix p = make_adjacency(cfg);
    LmiSolveOptions opts;
    opts.seed = cfg.solver.seed;
    const LmiSolveResult res = solve_diagonal_q(p, cfg.solver.eta, opts);
    if (!res.feasible) {
        err << "no diagonal Q certifies the graph at eta = " << cfg.solver.eta
            << "; best lambda_min = " << res.best_lambda_min << " (seed " << res.seed << ")\n";
        return failed;
    }
    const auto cert = check_feasible(*res.q, p, res.eta, 1e-9);
    cfg.weights = res.q->diag();
    cfg.certificate = CertificateSection{res.eta, cert.min_eigenvalue, cert.feasible, res.seed};
    write_file_atomic(run.output_dir / "lmi_record.json", write_config(cfg));
    write_json(run.output_dir / "summary.json", {{"command", "solve-lmi"},
                                                 {"feasible", true},
                                                 {"eta", res.eta},
                                                 {"lambda_min", cert.min_eigenvalue},
                                                 {"Q", *cfg.weights},
                                                 {"restart", res.restart},
                                                 {"seed", res.seed}});
    out << "feasible at eta = " << res.eta << ", lambda_min = " << cert.min_eigenvalue << "\nQ =";
    for (double q : *cfg.weights) out << " " << q;
    out << "\nwrote " << (run.output_dir / "lmi_record.json").string() << "\n";
    return ok;
}

int cmd_simulate(const RunConfig& run, const Config& cfg, std::ostream& out) {
    const GameInstance game = make_game(cfg);
    const Trajectory traj = iterate(game, make_initial_state(cfg), iterate_options(cfg));
    const double nwe = nwe_residual(game, traj.states.back());
    write_trajectory(run, traj, agent_targets(cfg), {}, cfg.solver.seed, out);
    write_json(run.output_dir / "summary.json", {{"command", "simulate"},
                                                 {"converged", traj.converged},
                                                 {"iterations", traj.iterations},
                                                 {"initial_projected", traj.initial_projected},
                                                 {"nwe_residual", nwe},
                                                 {"final", final_blocks(traj)},
                                                 {"seed", cfg.solver.seed}});
    out << (traj.converged ? "converged" : "did not converge") << " after " << traj.iterations
        << " iterations, NWE residual " << nwe << "\n";
    return ok;
}

int cmd_switch_sim(const RunConfig& run, const Config& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.signal) throw ValidationError("missing section", {"signal: section is required"});
    const ValidationReport report = validate_signal(cfg.signal->signal, cfg.signal->modes.size());
    if (!report.is_valid) {
        for (const auto& v : report.violations) err << "signal: " << v << "\n";
        return failed;
    }
    const SwitchedGame game = make_switched_game(cfg);
    const double bound = dwell_lower_bound(std::span<const SwitchMode>(game.modes()));
    if (static_cast<double>(cfg.signal->signal.tau) < bound - 1e-9) {
        err << "warning: tau = " << cfg.signal->signal.tau << " is below the dwell-time bound " << bound << "\n";
    }
    const Trajectory traj = switched_iterate(game, cfg.signal->signal, make_initial_state(cfg), iterate_options(cfg));
    write_trajectory(run, traj, agent_targets(cfg), {}, cfg.solver.seed, out);
    write_json(run.output_dir / "summary.json", {{"command", "switch-sim"},
                                                 {"converged", traj.converged},
                                                 {"iterations", traj.iterations},
                                                 {"tau", cfg.signal->signal.tau},
                                                 {"dwell_bound", bound},
                                                 {"pnwe_residual", pnwe_residual(game, traj.states.back())},
                                                 {"final", final_blocks(traj)},
                                                 {"seed", cfg.solver.seed}});
    out << (traj.converged ? "converged" : "did not converge") << " after " << traj.iterations << " iterations\n";
    return ok;
}

int cmd_dwell_bound(const RunConfig& run, const Config& cfg, std::ostream& out) {
    if (!cfg.signal) throw ValidationError("missing section", {"signal: section is required"});
    std::vector<SwitchMode> modes;
    for (const auto& m : cfg.signal->modes)
        modes.emplace_back(AdjacencyMatrix(m.p), WeightMatrix::diagonal(m.q), m.eta, m.kappa);
    const double bound = dwell_lower_bound(std::span<const SwitchMode>(modes));
    json per_mode = json::array();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        per_mode.push_back({{"mode", i + 1},
                            {"phi", m.phi()},
                            {"lambda_ratio", m.lambda_min() / m.lambda_max()},
                            {"lambda_min_lmi", m.certificate().min_eigenvalue}});
        out << "mode " << i + 1 << ": phi = " << m.phi() << ", lambda ratio = " << m.lambda_min() / m.lambda_max()
            << "\n";
    }
    out << "dwell-time lower bound: " << bound << " (use tau >= "
        << static_cast<std::size_t>(std::ceil(bound - 1e-9)) << "; segment durations must exceed tau)\n";
    write_json(run.output_dir / "summary.json",
               {{"command", "dwell-bound"}, {"bound", bound}, {"modes", per_mode}, {"seed", cfg.solver.seed}});
    return ok;
}

int cmd_explore(const RunConfig& run, const Config& cfg, std::ostream& out) {
    const RobotScenario scn = make_scenario(cfg, run.obstacles);
    const ExplorationResult res = run_exploration(scn);
    write_trajectory(run, res.trajectory, scn.targets, scn.obstacles.boxes, cfg.solver.seed, out);
    std::vector<bool> stalled(res.stalled.begin(), res.stalled.end());
    write_json(run.output_dir / "summary.json", {{"command", "explore"},
                                                 {"obstacles", run.obstacles},
                                                 {"converged", res.converged},
                                                 {"iterations", res.trajectory.iterations},
                                                 {"final_displacement", res.final_displacement},
                                                 {"nwe_residual", res.final_nwe_residual},
                                                 {"stalled", stalled},
                                                 {"final", final_blocks(res.trajectory)},
                                                 {"seed", cfg.solver.seed}});
    out << (res.converged ? "converged" : "did not converge") << " after " << res.trajectory.iterations
        << " steps, final displacement " << res.final_displacement << "\n";
    return ok;
}

void print_violations(const std::vector<std::string>& violations, std::ostream& err) {
    for (const auto& v : violations) err << "  " << v << "\n";
}

}  // namespace

std::optional<Mode> parse_mode(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kModeNames); ++i)
        if (kModeNames[i] == name) return static_cast<Mode>(i);
    return std::nullopt;
}

std::string_view mode_name(Mode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

std::optional<std::string> check_run_config(const RunConfig& run) {
    if (!std::filesystem::is_regular_file(run.input)) return "input file not found: " + run.input.string();
    if (run.eta && !(*run.eta > 0.0 && *run.eta < 1.0)) return "--eta must lie in (0, 1)";
    if (run.tol && !(*run.tol > 0.0 && std::isfinite(*run.tol))) return "--tol must be positive";
    if (run.max_iter && *run.max_iter == 0) return "--max-iter must be positive";
    if (run.stride && *run.stride == 0) return "--stride must be positive";
    return std::nullopt;
}

int run(const RunConfig& run, std::ostream& out, std::ostream& err) {
    if (auto problem = check_run_config(run)) {
        err << "error: " << *problem << "\n";
        return usage;
    }
    try {
        const Config cfg = load(run);
        std::filesystem::create_directories(run.output_dir);
        switch (run.mode) {
            case Mode::validate_graph:
                return cmd_validate_graph(run, cfg, out, err);
            case Mode::solve_lmi:
                return cmd_solve_lmi(run, cfg, out, err);
            case Mode::simulate:
                return cmd_simulate(run, cfg, out);
            case Mode::switch_sim:
                return cmd_switch_sim(run, cfg, out, err);
            case Mode::dwell_bound:
                return cmd_dwell_bound(run, cfg, out);
            case Mode::explore:
                return cmd_explore(run, cfg, out);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const ValidationError& e) {
        err << "validation failed: " << e.what() << "\n";
        print_violations(e.violations(), err);
        return failed;
    } catch (const StructuralError& e) {
        err << "invalid input: " << e.what() << "\n";
        return failed;
    } catch (const InvalidMode& e) {
        err << "invalid mode: " << e.what() << "\n";
        return failed;
    } catch (const InvalidState& e) {
        err << "invalid state: " << e.what() << "\n";
        return failed;
    } catch (const UnsupportedConfiguration& e) {
        err << "unsupported: " << e.what() << "\n";
        return failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return runtime;
    }
    return runtime;
}

}  // namespace proxnet::cli
