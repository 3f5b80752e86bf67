#pragma once

#include <functional>
#include <vector>

namespace nqe::numerics {

struct OdeSpec {
    int dimension = 0;
    // rhs(state, t, out_derivative)
    std::function<void(const double*, double, double*)> rhs;
    double t0 = 0.0;
    double t1 = 1.0;
    double step = 1e-3;
};

// Classical fixed-step RK4. Returns the state at each requested sample time;
// sample times must land on step boundaries to within 1e-9 relative.
// Throws NonFiniteState if the trajectory leaves double range.
std::vector<std::vector<double>> integrate_ode(const OdeSpec& spec,
                                               const std::vector<double>& y0,
                                               const std::vector<double>& sample_times);

} // namespace nqe::numerics
