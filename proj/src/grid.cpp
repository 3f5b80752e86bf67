#include "nqe/grid.hpp"

#include <cmath>

#include "nqe/errors.hpp"

namespace nqe::interp {

QuantileGrid::QuantileGrid(double lo_, double hi_, std::vector<double> levels_,
                           std::vector<double> locations_)
    : lo(lo_), hi(hi_), levels(std::move(levels_)), locations(std::move(locations_)) {
    const int m = static_cast<int>(levels.size());
    if (m < 2) throw DegenerateGrid("QuantileGrid: need at least 2 interior quantiles");
    if (locations.size() != levels.size())
        throw ShapeMismatch("QuantileGrid: levels/locations size mismatch");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("QuantileGrid: bad support");
    for (int i = 0; i < m; ++i) {
        if (!(levels[i] > 0.0 && levels[i] < 1.0))
            throw DomainError("QuantileGrid: level outside (0,1)");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw DomainError("QuantileGrid: levels not increasing");
        if (!std::isfinite(locations[i])) throw DomainError("QuantileGrid: non-finite location");
    }

    const double eps = kMinSpacing * (hi - lo);
    if ((m + 1) * eps >= hi - lo)
        throw DegenerateGrid("QuantileGrid: support too narrow for quantile count");
    // Forward clamp to enforce minimum spacing, then backward clamp so the
    // last quantile stays inside the support.
    double floor_x = lo + eps;
    for (int i = 0; i < m; ++i) {
        if (locations[i] < floor_x) locations[i] = floor_x;
        floor_x = locations[i] + eps;
    }
    double ceil_x = hi - eps;
    for (int i = m - 1; i >= 0; --i) {
        if (locations[i] > ceil_x) locations[i] = ceil_x;
        ceil_x = locations[i] - eps;
    }
}

std::vector<double> QuantileGrid::uniform_levels(int n_bin) {
    std::vector<double> out(n_bin - 1);
    for (int i = 1; i < n_bin; ++i) out[i - 1] = static_cast<double>(i) / n_bin;
    return out;
}

} // namespace nqe::interp
