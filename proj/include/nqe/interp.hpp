#pragma once

#include <cstdint>
#include <vector>

#include "nqe/grid.hpp"

// Reconstruction of a full 1-dim distribution (CDF/PDF/quantile function and
// mode structure) from a finite quantile set. Interior bins carry monotone
// cubic Hermite CDF segments; bins identified as decaying tails or as gaps
// between modes carry Gaussian-form exponential segments instead.

namespace nqe::interp {

struct InterpConfig {
    double p_tl = 0.6;             // boundary derivative clip floor, in units of d1
    double edge_tail_ratio = 0.6;  // edge bin gets a tail if avg pdf < ratio * neighbor's
    double split_threshold = 0.01; // double-tail acceptance bound on the mismatch ratio
    bool exponential_tails = true; // false: plain monotone cubic everywhere
};

// One-sided exponential segment measured from its anchor node:
//   pdf(t) = p0 * exp(a*t^2 + c*t),  t in [0, h],  integral over [0,h] = mass.
struct TailCoef {
    double p0 = 0.0, c = 0.0, a = 0.0, h = 0.0, mass = 0.0;

    TailCoef() = default;
    TailCoef(double p0_, double c_, double a_, double h_, double mass_)
        : p0(p0_), c(c_), a(a_), h(h_), mass(mass_) {}

    double pdf(double t) const;
    double cdf(double t) const;  // integral from 0 to t
    void finalize();             // precompute antiderivative constants

private:
    int branch_ = 0;  // 0 series, 1 dawson (a>0), 2 erfcx (a<0), 3 pure exp
    double pref_ = 0.0, u_ = 0.0, base_ = 0.0, sq_ = 0.0;
};

struct TailSolveResult {
    double a_coef = 0.0;
    double slope = 0.0;      // c actually used (may differ from dp0/p0 on fallback)
    bool slope_refit = false;
};

// Solve the curvature parameter so that the segment integrates to `mass`
// while matching pdf value p0 and pdf derivative dp0 at the anchor. If no
// representable curvature can hold the mass, the derivative condition is
// dropped: a=0 and the slope is re-solved. Throws NormalizationFailure when
// the mass is infeasible even at the bracket maximum.
TailSolveResult tail_bin_normalize(double p0, double dp0, double h, double mass);

struct LocalCdf {
    int mode_index = 0;
    double u_local = 0.0;
    double mode_mass = 1.0;
};

class Interpolant1D {
public:
    enum class BinKind : std::uint8_t { hermite, tail_lo, tail_hi, split };

    struct Bin {
        BinKind kind = BinKind::hermite;
        TailCoef fwd;   // anchored at the left node, extends right
        TailCoef bwd;   // anchored at the right node, extends left
        double split_x = 0.0;  // mode boundary (split bins only)
    };

    double lo() const { return nx_.front(); }
    double hi() const { return nx_.back(); }

    double cdf(double x) const;
    double pdf(double x) const;
    double ppf(double u) const;  // DomainError for u outside (0,1)
    LocalCdf local_cdf(double x) const;

    int mode_count() const { return static_cast<int>(mode_bounds_x_.size()) + 1; }
    double mode_mass(int mode) const;
    double mode_lo(int mode) const;
    double mode_hi(int mode) const;
    // local_ppf: quantile within a mode (u in (0,1) relative to the mode mass)
    double local_ppf(int mode, double u) const;

    const std::vector<int>& split_bins() const { return split_bins_; }
    const std::vector<double>& mode_boundaries() const { return mode_bounds_x_; }
    const std::vector<double>& node_x() const { return nx_; }
    const std::vector<double>& node_cdf() const { return ny_; }
    const std::vector<double>& node_pdf() const { return nd_; }
    const Bin& bin(int k) const { return bins_[k]; }
    int bin_count() const { return static_cast<int>(bins_.size()); }

private:
    friend Interpolant1D build_interpolant(const QuantileGrid&, const InterpConfig&);

    std::vector<double> nx_, ny_, nd_;  // nodes: location, cdf, pdf
    std::vector<Bin> bins_;
    std::vector<int> split_bins_;
    std::vector<double> mode_bounds_x_, mode_bounds_cdf_;

    int find_bin(double x) const;
    double cdf_in_bin(int k, double x) const;
    double pdf_in_bin(int k, double x) const;
    double invert_in_bin(int k, double u) const;
};

Interpolant1D build_interpolant(const QuantileGrid& grid, const InterpConfig& cfg = {});

} // namespace nqe::interp
