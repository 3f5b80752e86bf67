#include "nqe/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nqe/errors.hpp"
#include "nqe/special.hpp"

namespace nqe::interp {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInf = std::numeric_limits<double>::infinity();

// moments[k] = int_0^t tau^k exp(c tau) dtau, k = 0..kmax.
void exp_moments(double c, double t, double* m, int kmax) {
    const double ct = c * t;
    if (std::fabs(ct) <= 0.5) {
        double tp = t;  // t^(k+1)
        for (int k = 0; k <= kmax; ++k) {
            double pw = 1.0;  // (ct)^j / j!
            double sum = 1.0 / (k + 1.0);
            for (int j = 1; j < 40; ++j) {
                pw *= ct / j;
                const double add = pw / (k + j + 1.0);
                sum += add;
                if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
            }
            m[k] = tp * sum;
            tp *= t;
        }
        return;
    }
    const double e = std::exp(ct);
    m[0] = std::expm1(ct) / c;
    double tp = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        tp *= t;
        m[k] = (tp * e - k * m[k - 1]) / c;
    }
}

// int_0^t p0 exp(a tau^2 + c tau) dtau, evaluated on the numerically stable
// branch; returns +inf when the value exceeds double range.
double tail_integral(double p0, double c, double a, double t) {
    if (!(t > 0.0)) return 0.0;
    const double q = std::fabs(a) * t * t;
    if (q <= 0.02) {
        double m[11];
        exp_moments(c, t, m, 10);
        double coef = 1.0, sum = 0.0;
        for (int i = 0; i <= 5; ++i) {
            if (i > 0) coef *= a / i;
            sum += coef * m[2 * i];
        }
        return p0 * sum;
    }
    if (a > 0.0) {
        const double sa = std::sqrt(a);
        const double u = c / (2.0 * sa);
        const double v = sa * t;
        const double expo = v * v + c * t;
        if (expo > 700.0) return kInf;
        return p0 / sa * (std::exp(expo) * numerics::dawson(v + u) - numerics::dawson(u));
    }
    const double sb = std::sqrt(-a);
    const double u = -c / (2.0 * sb);
    const double w = u + sb * t;
    const double pref = p0 * kSqrtPi / (2.0 * sb);
    const double expo = a * t * t + c * t;  // equals u^2 - w^2
    const double g = std::exp(std::min(expo, 700.0));
    if (expo > 700.0) return kInf;
    if (u >= 0.0) return pref * (numerics::erfcx(u) - g * numerics::erfcx(w));
    if (w <= 0.0) return pref * (g * numerics::erfcx(-w) - numerics::erfcx(-u));
    const double u2 = u * u;
    if (u2 > 700.0) return kInf;
    return pref * (2.0 * std::exp(u2) - g * numerics::erfcx(w) - numerics::erfcx(-u));
}

} // namespace

// ---------------------------------------------------------------------------
// TailCoef

void TailCoef::finalize() {
    const double q = std::fabs(a) * h * h;
    if (a == 0.0) {
        branch_ = 3;
    } else if (q <= 0.02) {
        branch_ = 0;
    } else if (a > 0.0) {
        branch_ = 1;
        sq_ = std::sqrt(a);
        u_ = c / (2.0 * sq_);
        pref_ = p0 / sq_;
        base_ = numerics::dawson(u_);
    } else {
        branch_ = 2;
        sq_ = std::sqrt(-a);
        u_ = -c / (2.0 * sq_);
        pref_ = p0 * kSqrtPi / (2.0 * sq_);
        base_ = numerics::erfcx(u_ >= 0.0 ? u_ : -u_);
    }
}

double TailCoef::pdf(double t) const { return p0 * std::exp(a * t * t + c * t); }

double TailCoef::cdf(double t) const {
    if (!(t > 0.0)) return 0.0;
    if (t > h) t = h;
    if (branch_ == 1) {
        if (a * t * t <= 0.02) return tail_integral(p0, c, a, t);
        const double v = sq_ * t;
        const double expo = v * v + c * t;
        if (expo > 700.0) return kInf;
        return pref_ * (std::exp(expo) * numerics::dawson(v + u_) - base_);
    }
    if (branch_ == 2) {
        if (-a * t * t <= 0.02) return tail_integral(p0, c, a, t);
        const double w = u_ + sq_ * t;
        const double g = std::exp(a * t * t + c * t);
        if (u_ >= 0.0) return pref_ * (base_ - g * numerics::erfcx(w));
        if (w <= 0.0) return pref_ * (g * numerics::erfcx(-w) - base_);
        return pref_ * (2.0 * std::exp(u_ * u_) - g * numerics::erfcx(w) - base_);
    }
    return tail_integral(p0, c, a, t);
}

// ---------------------------------------------------------------------------
// normalization solve

namespace {

// Slope of a pure-exponential segment p0*exp(c t) holding `mass` on [0,h].
double solve_exp_slope(double p0, double h, double mass) {
    const double r_hi = std::asinh(2.0 * p0 * h / mass + 2.0);
    auto eval_c = [&](double r) {
        const double cc = -std::sinh(r) / h;
        double m0[1];
        exp_moments(cc, h, m0, 0);
        return p0 * m0[0];
    };
    if (eval_c(r_hi) > mass)
        throw NormalizationFailure("solve_exp_slope: mass too small for exponential segment");
    double rlo = 0.0, rhi = r_hi;
    for (int it = 0; it < 200 && rhi - rlo > 1e-15; ++it) {
        const double rm = 0.5 * (rlo + rhi);
        (eval_c(rm) >= mass ? rlo : rhi) = rm;
    }
    return -std::sinh(0.5 * (rlo + rhi)) / h;
}

} // namespace

TailSolveResult tail_bin_normalize(double p0, double dp0, double h, double mass) {
    if (!(p0 > 0.0) || !(h > 0.0) || !(mass > 0.0) || !std::isfinite(dp0))
        throw DomainError("tail_bin_normalize: bad arguments");
    const double c = dp0 / p0;
    const double s_max = std::asinh(1e4);  // |a| <= 1e4 / h^2
    const double inv_h2 = 1.0 / (h * h);
    auto eval = [&](double s) { return tail_integral(p0, c, std::sinh(s) * inv_h2, h); };

    const double lo_val = eval(-s_max);
    if (mass < lo_val) {
        // Even the strongest admissible decay holds more than `mass`: drop the
        // derivative condition, set a = 0 and re-solve the slope instead.
        return {0.0, solve_exp_slope(p0, h, mass), true};
    }

    double slo = -s_max, shi = s_max;
    if (eval(shi) < mass)
        throw NormalizationFailure("tail_bin_normalize: mass infeasible within curvature bracket");
    for (int it = 0; it < 200 && shi - slo > 1e-15; ++it) {
        const double sm = 0.5 * (slo + shi);
        const double v = eval(sm);
        if (v >= mass) shi = sm; else slo = sm;
    }
    const double a = std::sinh(0.5 * (slo + shi)) * inv_h2;
    const double resid = tail_integral(p0, c, a, h) - mass;
    if (!(std::fabs(resid) <= 1e-9 * mass))
        throw NormalizationFailure("tail_bin_normalize: residual above tolerance");
    return {a, c, false};
}

namespace {

// Fit a decaying segment: keep the derivative condition only when it yields a
// non-rising shape (a <= 0); a positive curvature root would turn the density
// back up toward the open end, so the slope is re-solved with a = 0 instead.
TailCoef fit_decaying_tail(double p0, double dp0, double h, double mass) {
    TailCoef t;
    t.p0 = p0;
    t.h = h;
    t.mass = mass;
    const double c = dp0 / p0;
    if (tail_integral(p0, c, 0.0, h) < mass) {
        t.a = 0.0;
        t.c = solve_exp_slope(p0, h, mass);
    } else {
        const auto sol = tail_bin_normalize(p0, dp0, h, mass);
        t.a = sol.a_coef;
        t.c = sol.slope;
    }
    t.finalize();
    return t;
}

} // namespace

// ---------------------------------------------------------------------------
// Hermite helpers

namespace {

inline double hermite_cdf(double y0, double y1, double yd0, double yd1, double hk, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * hk * yd0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * hk * yd1;
}

inline double hermite_pdf(double y0, double y1, double yd0, double yd1, double hk, double t) {
    const double t2 = t * t;
    return (6.0 * t2 - 6.0 * t) * (y0 - y1) / hk + (3.0 * t2 - 4.0 * t + 1.0) * yd0 +
           (3.0 * t2 - 2.0 * t) * yd1;
}

// pdf derivative of the bin's formal cubic at its left / right node.
inline double cubic_pdf_slope_left(double d, double yd0, double yd1, double hk) {
    return (6.0 * d - 4.0 * yd0 - 2.0 * yd1) / hk;
}
inline double cubic_pdf_slope_right(double d, double yd0, double yd1, double hk) {
    return (-6.0 * d + 2.0 * yd0 + 4.0 * yd1) / hk;
}

} // namespace

// ---------------------------------------------------------------------------
// queries

int Interpolant1D::find_bin(double x) const {
    const int nb = bin_count();
    int k = static_cast<int>(std::upper_bound(nx_.begin(), nx_.end(), x) - nx_.begin()) - 1;
    return std::clamp(k, 0, nb - 1);
}

double Interpolant1D::cdf_in_bin(int k, double x) const {
    const Bin& b = bins_[k];
    const double x0 = nx_[k], x1 = nx_[k + 1];
    const double hk = x1 - x0;
    double v;
    switch (b.kind) {
        case BinKind::hermite:
            v = hermite_cdf(ny_[k], ny_[k + 1], nd_[k], nd_[k + 1], hk, (x - x0) / hk);
            break;
        case BinKind::tail_lo:
            v = ny_[k + 1] - b.bwd.cdf(x1 - x);
            break;
        case BinKind::tail_hi:
            v = ny_[k] + b.fwd.cdf(x - x0);
            break;
        case BinKind::split:
            v = ny_[k] + b.fwd.cdf(x - x0) + (b.bwd.mass - b.bwd.cdf(x1 - x));
            break;
        default:
            v = ny_[k];
    }
    return std::clamp(v, ny_[k], ny_[k + 1]);
}

double Interpolant1D::pdf_in_bin(int k, double x) const {
    const Bin& b = bins_[k];
    const double x0 = nx_[k], x1 = nx_[k + 1];
    const double hk = x1 - x0;
    switch (b.kind) {
        case BinKind::hermite:
            return hermite_pdf(ny_[k], ny_[k + 1], nd_[k], nd_[k + 1], hk, (x - x0) / hk);
        case BinKind::tail_lo:
            return b.bwd.pdf(x1 - x);
        case BinKind::tail_hi:
            return b.fwd.pdf(x - x0);
        case BinKind::split:
            return b.fwd.pdf(x - x0) + b.bwd.pdf(x1 - x);
    }
    return 0.0;
}

double Interpolant1D::cdf(double x) const {
    if (x <= lo()) return 0.0;
    if (x >= hi()) return 1.0;
    return cdf_in_bin(find_bin(x), x);
}

double Interpolant1D::pdf(double x) const {
    if (x <= lo() || x >= hi()) return 0.0;
    return pdf_in_bin(find_bin(x), x);
}

double Interpolant1D::invert_in_bin(int k, double u) const {
    double xlo = nx_[k], xhi = nx_[k + 1];
    const double xtol = 1e-13 * (hi() - lo());
    const double y0 = ny_[k], y1 = ny_[k + 1];
    double x = xlo + (xhi - xlo) * (u - y0) / (y1 - y0);
    for (int it = 0; it < 200; ++it) {
        const double f = cdf_in_bin(k, x) - u;
        if (f > 0.0) xhi = x; else xlo = x;
        if (xhi - xlo <= xtol) break;
        const double p = pdf_in_bin(k, x);
        double xn = p > 0.0 ? x - f / p : 0.5 * (xlo + xhi);
        if (!(xn > xlo && xn < xhi)) xn = 0.5 * (xlo + xhi);
        if (std::fabs(xn - x) <= xtol) { x = xn; break; }
        x = xn;
    }
    return std::clamp(x, xlo, xhi);
}

double Interpolant1D::ppf(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("ppf: u outside (0,1)");
    int k = static_cast<int>(std::upper_bound(ny_.begin(), ny_.end(), u) - ny_.begin()) - 1;
    k = std::clamp(k, 0, bin_count() - 1);
    return invert_in_bin(k, u);
}

LocalCdf Interpolant1D::local_cdf(double x) const {
    LocalCdf out;
    // boundary convention: a mode owns [lo, hi)
    const int mode = static_cast<int>(
        std::upper_bound(mode_bounds_x_.begin(), mode_bounds_x_.end(), x) - mode_bounds_x_.begin());
    const double c_lo = mode == 0 ? 0.0 : mode_bounds_cdf_[mode - 1];
    const double c_hi =
        mode == static_cast<int>(mode_bounds_x_.size()) ? 1.0 : mode_bounds_cdf_[mode];
    out.mode_index = mode;
    out.mode_mass = c_hi - c_lo;
    out.u_local = out.mode_mass > 0.0 ? std::clamp((cdf(x) - c_lo) / out.mode_mass, 0.0, 1.0) : 0.0;
    return out;
}

double Interpolant1D::mode_mass(int mode) const {
    const double c_lo = mode == 0 ? 0.0 : mode_bounds_cdf_[mode - 1];
    const double c_hi =
        mode == static_cast<int>(mode_bounds_x_.size()) ? 1.0 : mode_bounds_cdf_[mode];
    return c_hi - c_lo;
}

double Interpolant1D::mode_lo(int mode) const {
    return mode == 0 ? lo() : mode_bounds_x_[mode - 1];
}

double Interpolant1D::mode_hi(int mode) const {
    return mode == static_cast<int>(mode_bounds_x_.size()) ? hi() : mode_bounds_x_[mode];
}

double Interpolant1D::local_ppf(int mode, double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("local_ppf: u outside (0,1)");
    const double c_lo = mode == 0 ? 0.0 : mode_bounds_cdf_[mode - 1];
    const double ug = c_lo + u * mode_mass(mode);
    return ppf(std::clamp(ug, 1e-15, 1.0 - 1e-15));
}

// ---------------------------------------------------------------------------
// build

Interpolant1D build_interpolant(const QuantileGrid& grid, const InterpConfig& cfg) {
    const int m = grid.size();
    if (m < 2) throw DegenerateGrid("build_interpolant: need at least 2 interior quantiles");
    const int nb = m + 1;

    Interpolant1D out;
    out.nx_.resize(nb + 1);
    out.ny_.resize(nb + 1);
    out.nx_[0] = grid.lo;
    out.ny_[0] = 0.0;
    for (int i = 0; i < m; ++i) {
        out.nx_[i + 1] = grid.locations[i];
        out.ny_[i + 1] = grid.levels[i];
    }
    out.nx_[nb] = grid.hi;
    out.ny_[nb] = 1.0;

    std::vector<double> hk(nb), dk(nb);
    for (int k = 0; k < nb; ++k) {
        hk[k] = out.nx_[k + 1] - out.nx_[k];
        dk[k] = (out.ny_[k + 1] - out.ny_[k]) / hk[k];
    }

    const double lo_clip = cfg.exponential_tails ? cfg.p_tl : 0.0;
    // One-sided derivative estimates at a node, using the two bins on one
    // side only; clipped into the monotonicity window of the nearest bin.
    auto oneside_right = [&](int k) {  // bins k, k+1
        if (!(dk[k] > 0.0)) return 0.0;
        const double raw = ((2.0 * hk[k] + hk[k + 1]) * dk[k] - hk[k] * dk[k + 1]) /
                           (hk[k] + hk[k + 1]);
        return std::clamp(raw, lo_clip * dk[k], 3.0 * dk[k]);
    };
    auto oneside_left = [&](int k) {  // bins k-1, k-2
        if (!(dk[k - 1] > 0.0)) return 0.0;
        const double raw =
            ((2.0 * hk[k - 1] + hk[k - 2]) * dk[k - 1] - hk[k - 1] * dk[k - 2]) /
            (hk[k - 1] + hk[k - 2]);
        return std::clamp(raw, lo_clip * dk[k - 1], 3.0 * dk[k - 1]);
    };

    // Node derivatives (= pdf values), all kept inside the Fritsch-Carlson
    // window 0 <= y'/d <= 3 of both adjacent bins. The plain-cubic path uses
    // the classic weighted harmonic mean; the exponential-tail path uses the
    // three-point parabola slope, which stays second-order accurate on the
    // strongly stretched grids that tail bins produce.
    std::vector<double>& yd = out.nd_;
    yd.assign(nb + 1, 0.0);
    for (int k = 1; k < nb; ++k) {
        if (dk[k - 1] * dk[k] <= 0.0) {
            yd[k] = 0.0;
        } else if (cfg.exponential_tails) {
            const double para = (hk[k] * dk[k - 1] + hk[k - 1] * dk[k]) / (hk[k - 1] + hk[k]);
            yd[k] = std::min(para, 3.0 * std::min(dk[k - 1], dk[k]));
        } else {
            const double w1 = 2.0 * hk[k] + hk[k - 1];
            const double w2 = hk[k] + 2.0 * hk[k - 1];
            yd[k] = (w1 + w2) / (w1 / dk[k - 1] + w2 / dk[k]);
        }
    }
    yd[0] = oneside_right(0);
    yd[nb] = oneside_left(nb);

    out.bins_.assign(nb, {});
    if (!cfg.exponential_tails) return out;

    // Edge bins decay into an exponential tail when clearly below the
    // neighboring density; otherwise the support edge is a hard truncation
    // and the polynomial stays. A tail bin leaves the polynomial region, so
    // the adjacent interior node switches to the one-sided scheme.
    const bool tail_lo = dk[0] < cfg.edge_tail_ratio * dk[1];
    const bool tail_hi = dk[nb - 1] < cfg.edge_tail_ratio * dk[nb - 2];
    if (tail_lo) yd[1] = oneside_right(1);
    if (tail_hi) yd[nb - 1] = oneside_left(nb - 1);

    // Speculative double-tail fits for interior bins. The fit assumes the bin
    // leaves the polynomial region, so the anchor nodes take their one-sided
    // derivative values. Only bins whose average density is a (possibly tied)
    // local minimum can separate two modes; the mismatch ratio stays at +inf
    // elsewhere.
    std::vector<double> fsplit(nb, kInf);
    std::vector<TailCoef> fit_l(nb), fit_r(nb);
    std::vector<double> anchor_l(nb, 0.0), anchor_r(nb, 0.0);
    for (int k = 1; k <= nb - 2; ++k) {
        if (!(dk[k] <= dk[k - 1] && dk[k] <= dk[k + 1])) continue;
        const double half = 0.5 * (out.ny_[k + 1] - out.ny_[k]);
        const double pl = k >= 2 ? oneside_left(k) : dk[0];
        const double pr = k + 1 <= nb - 2 ? oneside_right(k + 1) : dk[nb - 1];
        const double sl = cubic_pdf_slope_right(dk[k - 1], yd[k - 1], pl, hk[k - 1]);
        const double sr = cubic_pdf_slope_left(dk[k + 1], pr, yd[k + 2], hk[k + 1]);
        try {
            fit_l[k] = fit_decaying_tail(pl, sl, hk[k], half);
            fit_r[k] = fit_decaying_tail(pr, -sr, hk[k], half);
            anchor_l[k] = pl;
            anchor_r[k] = pr;
            fsplit[k] = std::max(fit_l[k].pdf(hk[k]) / pr, fit_r[k].pdf(hk[k]) / pl);
        } catch (const NormalizationFailure&) {
            fsplit[k] = kInf;
        }
    }
    for (int k = 1; k <= nb - 2; ++k) {
        if (!(fsplit[k] < cfg.split_threshold)) continue;
        const bool min_left = k - 1 < 1 || fsplit[k] < fsplit[k - 1];
        const bool min_right = k + 1 > nb - 2 || fsplit[k] < fsplit[k + 1];
        if (!(min_left && min_right)) continue;
        auto& b = out.bins_[k];
        b.kind = Interpolant1D::BinKind::split;
        b.fwd = fit_l[k];
        b.bwd = fit_r[k];
        yd[k] = anchor_l[k];
        yd[k + 1] = anchor_r[k];
        out.split_bins_.push_back(k);
    }

    // Edge tails are solved last so their anchors match the final node
    // derivatives and the final neighbor segment (cubic or split tail).
    if (tail_lo) {
        auto& b = out.bins_[0];
        b.kind = Interpolant1D::BinKind::tail_lo;
        const double p0 = yd[1];
        const double slope = out.bins_[1].kind == Interpolant1D::BinKind::split
                                 ? out.bins_[1].fwd.p0 * out.bins_[1].fwd.c
                                 : cubic_pdf_slope_left(dk[1], yd[1], yd[2], hk[1]);
        b.bwd = fit_decaying_tail(p0, -slope, hk[0], out.ny_[1]);
    }
    if (tail_hi) {
        auto& b = out.bins_[nb - 1];
        b.kind = Interpolant1D::BinKind::tail_hi;
        const double p0 = yd[nb - 1];
        const double slope =
            out.bins_[nb - 2].kind == Interpolant1D::BinKind::split
                ? -out.bins_[nb - 2].bwd.p0 * out.bins_[nb - 2].bwd.c
                : cubic_pdf_slope_right(dk[nb - 2], yd[nb - 2], yd[nb - 1], hk[nb - 2]);
        b.fwd = fit_decaying_tail(p0, slope, hk[nb - 1], 1.0 - out.ny_[nb - 1]);
    }

    // Mode boundary inside each split bin: minimum of the summed pdf, located
    // by scanning then bisecting the pdf derivative.
    for (int k : out.split_bins_) {
        auto& b = out.bins_[k];
        const double x0 = out.nx_[k], x1 = out.nx_[k + 1], w = x1 - x0;
        auto dpdf = [&](double x) {
            const double ta = x - x0, tb = x1 - x;
            const double pa = b.fwd.pdf(ta), pb = b.bwd.pdf(tb);
            return pa * (2.0 * b.fwd.a * ta + b.fwd.c) - pb * (2.0 * b.bwd.a * tb + b.bwd.c);
        };
        const int n_scan = 128;
        int best = 0;
        double best_pdf = kInf;
        for (int i = 1; i < n_scan; ++i) {
            const double x = x0 + w * i / n_scan;
            const double p = out.pdf_in_bin(k, x);
            if (p < best_pdf) { best_pdf = p; best = i; }
        }
        double xa = x0 + w * std::max(1, best - 1) / n_scan;
        double xb = x0 + w * std::min(n_scan - 1, best + 1) / n_scan;
        double xmid = 0.5 * (xa + xb);
        if (dpdf(xa) < 0.0 && dpdf(xb) > 0.0) {
            for (int it = 0; it < 80 && xb - xa > 1e-12 * w; ++it) {
                xmid = 0.5 * (xa + xb);
                (dpdf(xmid) < 0.0 ? xa : xb) = xmid;
            }
            xmid = 0.5 * (xa + xb);
        }
        b.split_x = xmid;
        out.mode_bounds_x_.push_back(xmid);
    }
    out.mode_bounds_cdf_.resize(out.mode_bounds_x_.size());
    for (std::size_t i = 0; i < out.mode_bounds_x_.size(); ++i)
        out.mode_bounds_cdf_[i] = out.cdf_in_bin(out.split_bins_[i], out.mode_bounds_x_[i]);

    return out;
}

} // namespace nqe::interp
