#include <iostream>

#include <CLI11.hpp>

#include "proxnet/cli.hpp"

using proxnet::cli::Mode;
using proxnet::cli::RunConfig;

namespace {

CLI::App* add_mode(CLI::App& app, RunConfig& run, Mode mode, const std::string& help) {
    CLI::App* sub = app.add_subcommand(std::string(proxnet::cli::mode_name(mode)), help);
    sub->add_option("config", run.input, "JSON config file")->required();
    sub->add_option("-o,--out", run.output_dir, "Output directory")->capture_default_str();
    sub->callback([&run, mode] { run.mode = mode; });
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proximal dynamics for network equilibrium seeking"};
    app.require_subcommand(1);
    RunConfig run;

    add_mode(app, run, Mode::validate_graph, "Check that P is row-stochastic, has self-loops and is strongly connected");

    auto* lmi = add_mode(app, run, Mode::solve_lmi, "Search for a diagonal Q certifying convergence");
    lmi->add_option("--eta", run.eta, "Averagedness parameter in (0, 1)");
    lmi->add_option("--seed", run.seed, "Seed for the restart sampler");

    auto* sim = add_mode(app, run, Mode::simulate, "Run the time-invariant proximal dynamics");
    for (auto* sub : {sim}) {
        sub->add_option("--tol", run.tol, "Stopping tolerance");
        sub->add_option("--max-iter", run.max_iter, "Iteration cap");
        sub->add_option("--stride", run.stride, "Store every k-th state");
    }

    auto* sw = add_mode(app, run, Mode::switch_sim, "Run the dwell-time switched dynamics");
    sw->add_option("--tau", run.tau, "Dwell time; every segment must last longer");
    sw->add_option("--tol", run.tol, "Stopping tolerance");
    sw->add_option("--max-iter", run.max_iter, "Iteration cap");
    sw->add_option("--stride", run.stride, "Store every k-th state");

    add_mode(app, run, Mode::dwell_bound, "Compute the dwell-time lower bound of the configured modes");

    auto* ex = add_mode(app, run, Mode::explore, "Run the multi-robot exploration scenario");
    ex->add_flag("--obstacles", run.obstacles, "Enable the scenario's obstacles");
    ex->add_option("--tol", run.tol, "Stopping tolerance on the step length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : proxnet::cli::usage;
    }
    return proxnet::cli::run(run, std::cout, std::cerr);
}
