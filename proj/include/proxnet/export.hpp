#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxnet/dynamics.hpp"

namespace proxnet {

/// Header `step,agent,dim0,...,dim{n-1},residual,mode`, one row per agent per
/// stored step ordered by (step, agent). Agents and modes are 1-based. Numbers
/// use 12 significant digits; the residual of step 0 is empty.
std::string format_csv(const Trajectory& trajectory);
void export_csv(const Trajectory& trajectory, const std::filesystem::path& path);

struct PlotOptions {
    std::optional<std::uint64_t> seed;
    double width_px = 800.0;
};

/// Planar plot: one polyline per agent, targets as concentric dashed circles,
/// obstacles as gray rectangles, viewport fitted with a 5% margin.
/// Throws UnsupportedConfiguration unless the states are 2-dimensional.
std::string format_svg(const Trajectory& trajectory, const std::vector<Vector>& targets,
                       const std::vector<Box>& obstacles, const PlotOptions& options = {});
void export_svg(const Trajectory& trajectory, const std::vector<Vector>& targets, const std::vector<Box>& obstacles,
                const std::filesystem::path& path, const PlotOptions& options = {});

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace proxnet
