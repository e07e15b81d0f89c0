#include "proxnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "proxnet/simd.hpp"

namespace proxnet {
namespace {

void require_square_finite(const Matrix& p) {
    if (!p.square()) {
        throw StructuralError("adjacency matrix must be square, got " + std::to_string(p.rows()) + "x" +
                              std::to_string(p.cols()));
    }
    if (p.rows() == 0) throw StructuralError("adjacency matrix is empty");
    if (!p.all_finite()) throw StructuralError("adjacency matrix has non-finite entries");
}

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(const Matrix& adjacency) {
    const std::size_t n = adjacency.rows();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();

    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    // Iterative Tarjan: frames of (vertex, next neighbour to examine).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            bool descended = false;
            while (next < n) {
                const std::size_t w = next++;
                if (w == v || !(adjacency(v, w) > 0.0)) continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;

            const std::size_t done = v;
            if (low[done] == index[done]) {
                std::vector<std::size_t> comp;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
            frames.pop_back();
            if (!frames.empty()) {
                const std::size_t parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

ValidationReport validate_adjacency(const Matrix& p, double row_tol) {
    require_square_finite(p);
    const std::size_t n = p.rows();
    ValidationReport report;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) < 0.0) {
                std::ostringstream msg;
                msg << "negative entry a(" << i + 1 << "," << j + 1 << ") = " << p(i, j);
                report.fail(msg.str());
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double v : p.row(i)) sum += v;
        if (std::abs(sum - 1.0) > row_tol) {
            std::ostringstream msg;
            msg << "row " << i + 1 << " sums to " << sum << ", not 1";
            report.fail(msg.str());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p(i, i) > 0.0)) {
            std::ostringstream msg;
            msg << "self-loop a(" << i + 1 << "," << i + 1 << ") = " << p(i, i) << " is not strictly positive";
            report.fail(msg.str());
        }
    }
    // Agent i listens to j when a_ij > 0; the direction does not change whether
    // the graph is strongly connected, so the support is used as is.
    const auto components = strongly_connected_components(p);
    if (components.size() != 1) {
        report.fail("graph is not strongly connected (" + std::to_string(components.size()) + " components)");
    }
    return report;
}

AdjacencyMatrix::AdjacencyMatrix(Matrix p, double row_tol) : p_(std::move(p)) {
    auto report = validate_adjacency(p_, row_tol);
    if (!report.is_valid) throw ValidationError("invalid adjacency matrix", std::move(report.violations));
}

double min_self_loop(const AdjacencyMatrix& p) {
    const Vector d = p.matrix().diag();
    return *std::min_element(d.begin(), d.end());
}

Matrix kron_lift(const Matrix& m, std::size_t n) {
    if (n == 0) throw StructuralError("kron_lift: block dimension must be positive");
    if (!m.square()) throw StructuralError("kron_lift: matrix must be square");
    const std::size_t big = m.rows() * n;
    Matrix out(big, big);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (std::size_t d = 0; d < n; ++d) out(i * n + d, j * n + d) = m(i, j);
    return out;
}

Vector mix_blocks(const Matrix& p, std::span<const double> x, std::size_t n) {
    if (!p.square() || n == 0 || x.size() != p.rows() * n) {
        throw StructuralError("mix_blocks: expected " + std::to_string(p.rows()) + " blocks of dimension " +
                              std::to_string(n) + ", got vector of size " + std::to_string(x.size()));
    }
    Vector out(x.size(), 0.0);
    for (std::size_t i = 0; i < p.rows(); ++i) {
        std::span<double> dst(out.data() + i * n, n);
        for (std::size_t j = 0; j < p.cols(); ++j) {
            const double w = p(i, j);
            if (w != 0.0) simd::axpy(w, x.subspan(j * n, n), dst);
        }
    }
    return out;
}

}  // namespace proxnet
