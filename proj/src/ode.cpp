#include "nqe/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nqe/errors.hpp"

namespace nqe::numerics {

std::vector<std::vector<double>> integrate_ode(const OdeSpec& spec,
                                               const std::vector<double>& y0,
                                               const std::vector<double>& sample_times) {
    const int d = spec.dimension;
    if (d <= 0 || static_cast<int>(y0.size()) != d)
        throw ShapeMismatch("integrate_ode: state dimension mismatch");
    if (!(spec.step > 0.0)) throw DomainError("integrate_ode: step must be positive");

    const double span = spec.t1 - spec.t0;
    const long n_steps = std::lround(span / spec.step);
    if (n_steps < 1 || std::fabs(n_steps * spec.step - span) > 1e-9 * std::fabs(span))
        throw DomainError("integrate_ode: step does not divide the time span");
    const double h = span / static_cast<double>(n_steps);

    // Map each sample time to its step index.
    std::vector<long> sample_idx(sample_times.size());
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double pos = (sample_times[i] - spec.t0) / h;
        const long idx = std::lround(pos);
        if (idx < 0 || idx > n_steps || std::fabs(pos - idx) > 1e-9 * std::max(1.0, std::fabs(pos)))
            throw DomainError("integrate_ode: sample time off the step lattice");
        sample_idx[i] = idx;
    }

    std::vector<std::vector<double>> out(sample_times.size());
    std::vector<double> y = y0;
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);

    auto capture = [&](long step_index) {
        for (std::size_t i = 0; i < sample_idx.size(); ++i)
            if (sample_idx[i] == step_index) out[i] = y;
    };

    capture(0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = spec.t0 + h * static_cast<double>(s);
        spec.rhs(y.data(), t, k1.data());
        for (int i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        spec.rhs(tmp.data(), t + 0.5 * h, k2.data());
        for (int i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        spec.rhs(tmp.data(), t + 0.5 * h, k3.data());
        for (int i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
        spec.rhs(tmp.data(), t + h, k4.data());
        for (int i = 0; i < d; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(y[i])) throw NonFiniteState("integrate_ode: non-finite state");
        }
        capture(s + 1);
    }
    return out;
}

} // namespace nqe::numerics
