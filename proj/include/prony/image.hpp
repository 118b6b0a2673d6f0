#pragma once

#include <cstddef>
#include <vector>

namespace prony {

/// Real samples of a periodized measurement on the P^d grid {p/P}.
/// Pixels are stored lexicographically, first coordinate slowest; for d=2 that
/// is row-major with rows indexed by p_1.
struct ImageGrid {
    int d = 2;
    int P = 0;
    std::vector<double> pixels;

    ImageGrid() = default;
    ImageGrid(int dim, int pixels_per_dim);

    std::size_t size() const noexcept { return pixels.size(); }
    double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * P + col]; }
    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * P + col]; }
};

}  // namespace prony
