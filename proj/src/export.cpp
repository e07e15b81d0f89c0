#include "proxnet/export.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "proxnet/errors.hpp"

namespace proxnet {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_csv(const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().dim();
    std::string out = "step,agent";
    for (std::size_t d = 0; d < n; ++d) out += ",dim" + std::to_string(d);
    out += ",residual,mode\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const CollectiveState& x = traj.states[k];
        const std::string residual = k == 0 ? "" : num(traj.residuals[k - 1]);
        const std::size_t mode = k < traj.modes.size() ? traj.modes[k] + 1 : 1;
        for (std::size_t i = 0; i < x.agents(); ++i) {
            out += std::to_string(traj.steps[k]) + "," + std::to_string(i + 1);
            for (double v : x.block(i)) out += "," + num(v);
            out += "," + residual + "," + std::to_string(mode) + "\n";
        }
    }
    return out;
}

void export_csv(const Trajectory& traj, const std::filesystem::path& path) {
    write_file_atomic(path, format_csv(traj));
}

std::string format_svg(const Trajectory& traj, const std::vector<Vector>& targets, const std::vector<Box>& obstacles,
                       const PlotOptions& opts) {
    if (traj.states.empty()) throw UnsupportedConfiguration("svg: trajectory is empty");
    if (traj.states.front().dim() != 2) throw UnsupportedConfiguration("svg: only planar (dim 2) states can be plotted");
    for (const auto& t : targets)
        if (t.size() != 2) throw UnsupportedConfiguration("svg: targets must be planar");
    for (const auto& b : obstacles)
        if (b.dimension() != 2) throw UnsupportedConfiguration("svg: obstacles must be planar");

    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    auto grow = [&](double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    };
    for (const auto& s : traj.states)
        for (std::size_t i = 0; i < s.agents(); ++i) grow(s.block(i)[0], s.block(i)[1]);
    for (const auto& t : targets) grow(t[0], t[1]);
    for (const auto& b : obstacles) {
        grow(b.lower()[0], b.lower()[1]);
        grow(b.upper()[0], b.upper()[1]);
    }
    double span = std::max(x1 - x0, y1 - y0);
    if (!(span > 0.0)) span = 1.0;
    const double margin = 0.05 * span;
    x0 -= margin;
    y0 -= margin;
    const double wx = (x1 - x0) + margin, wy = (y1 - y0) + margin;
    const double scale = opts.width_px / wx;
    const double height = wy * scale;
    auto px = [&](double x) { return fixed((x - x0) * scale); };
    auto py = [&](double y) { return fixed(height - (y - y0) * scale); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(opts.width_px) + "\" height=\"" +
           fixed(height) + "\" viewBox=\"0 0 " + fixed(opts.width_px) + " " + fixed(height) + "\">\n";
    out += "<desc>seed=" + (opts.seed ? std::to_string(*opts.seed) : std::string("none")) +
           " steps=" + std::to_string(traj.steps.back()) + "</desc>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& b : obstacles) {
        out += "<rect x=\"" + px(b.lower()[0]) + "\" y=\"" + py(b.upper()[1]) + "\" width=\"" +
               fixed((b.upper()[0] - b.lower()[0]) * scale) + "\" height=\"" +
               fixed((b.upper()[1] - b.lower()[1]) * scale) + "\" fill=\"#999999\" stroke=\"#555555\"/>\n";
    }
    const std::size_t agents = traj.states.front().agents();
    for (std::size_t i = 0; i < agents; ++i) {
        const char* color = kPalette[i % kPalette.size()];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            const auto b = traj.states[k].block(i);
            if (k) out += ' ';
            out += px(b[0]) + "," + py(b[1]);
        }
        out += "\"/>\n";
        if (i < targets.size()) {
            for (double r : {4.0, 8.0}) {
                out += "<circle cx=\"" + px(targets[i][0]) + "\" cy=\"" + py(targets[i][1]) + "\" r=\"" + fixed(r) +
                       "\" fill=\"none\" stroke=\"" + color + "\" stroke-dasharray=\"3,2\"/>\n";
            }
        }
    }
    out += "</svg>\n";
    return out;
}

void export_svg(const Trajectory& traj, const std::vector<Vector>& targets, const std::vector<Box>& obstacles,
                const std::filesystem::path& path, const PlotOptions& opts) {
    write_file_atomic(path, format_svg(traj, targets, obstacles, opts));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace proxnet
