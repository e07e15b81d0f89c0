#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace proxnet::cli {

enum class Mode { validate_graph, solve_lmi, simulate, switch_sim, dwell_bound, explore };

std::optional<Mode> parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

enum ExitCode : int { ok = 0, failed = 1, usage = 2, runtime = 3 };

struct RunConfig {
    Mode mode = Mode::validate_graph;
    std::filesystem::path input;
    std::filesystem::path output_dir = ".";
    std::optional<double> eta;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> tau;
    std::optional<std::size_t> stride;
    bool obstacles = false;
};

/// Empty when the overrides are in range and the input exists.
std::optional<std::string> check_run_config(const RunConfig& run);

/// Runs one subcommand. Output files land in output_dir only when the command
/// succeeds; every file is written atomically.
int run(const RunConfig& run, std::ostream& out, std::ostream& err);

}  // namespace proxnet::cli
