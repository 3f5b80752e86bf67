#pragma once

#include <vector>

namespace nqe::interp {

// Ordered interior quantiles of a one-dimensional distribution on [lo, hi].
// Construction clamps locations to strictly increasing order with a minimum
// relative spacing of kMinSpacing*(hi-lo); degenerate inputs from a
// near-collapsed softmax bin therefore still yield a usable grid.
struct QuantileGrid {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> levels;     // strictly increasing, inside (0,1)
    std::vector<double> locations;  // strictly increasing, inside (lo,hi)

    static constexpr double kMinSpacing = 1e-12;

    QuantileGrid() = default;
    QuantileGrid(double lo_, double hi_, std::vector<double> levels_,
                 std::vector<double> locations_);

    int size() const { return static_cast<int>(levels.size()); }

    // Equally spaced levels i/n_bin, i = 1..n_bin-1.
    static std::vector<double> uniform_levels(int n_bin);
};

} // namespace nqe::interp
