#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lrcrit/errors.hpp"

namespace lrcrit {

struct scaling_point {
    double N = 0.0;
    double gap = 0.0;
    double sigma = 0.0;  // absolute uncertainty on gap; a DFT half-bin pi/tau in the pipeline
};

struct scaling_fit {
    double z = 0.0;
    double z_err = 0.0;
    double prefactor = 0.0;    // A in gap = A * N^-z
    double residual_rms = 0.0; // log space
    std::vector<scaling_point> points;
};

// Weighted least squares of ln(gap) on ln(N); sigma maps to log space as
// sigma/gap. z is minus the slope; the error is the bare covariance (no
// chi^2 rescaling), mirroring how the fit uncertainties are quoted.
inline scaling_fit fit_exponent(std::vector<scaling_point> pts) {
    if (pts.size() < 3) throw insufficient_points("power-law fit needs >= 3 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].gap > 0.0)) throw invalid_params("power-law fit needs positive gaps");
        if (!(pts[i].N > 0.0)) throw invalid_params("power-law fit needs positive N");
        if (!(pts[i].sigma > 0.0)) throw invalid_params("power-law fit needs sigma > 0");
        if (i > 0 && !(pts[i].N > pts[i - 1].N))
            throw invalid_params("power-law fit needs strictly increasing N");
    }
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        const double x = std::log(p.N);
        const double y = std::log(p.gap);
        const double sl = p.sigma / p.gap;
        const double w = 1.0 / (sl * sl);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    const double det = sw * sxx - sx * sx;
    if (!(det > 0.0)) throw numeric_error("degenerate abscissa in power-law fit");
    const double slope = (sw * sxy - sx * sy) / det;
    const double intercept = (sxx * sy - sx * sxy) / det;

    scaling_fit fit;
    fit.z = -slope;
    fit.z_err = std::sqrt(sw / det);
    fit.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = std::log(p.gap) - (intercept + slope * std::log(p.N));
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(pts.size()));
    fit.points = std::move(pts);
    return fit;
}

struct nu_scan {
    std::vector<double> g_star;  // per-N minimizing coupling
    double g_c = 0.0;
    double nu = 0.0;
};

namespace detail {

template <class F>
double golden_min(F&& f, double a, double b, double tol) {
    constexpr double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// chi^2 of the linear LS for (g_c, a) in g* = g_c + a N^-p at fixed p
inline double profile_chi2(const std::vector<double>& Ns, const std::vector<double>& gs,
                           double p, double* gc_out = nullptr) {
    const std::size_t n = Ns.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::pow(Ns[i], -p);
        sx += x;
        sy += gs[i];
        sxx += x * x;
        sxy += x * gs[i];
    }
    const double det = n * sxx - sx * sx;
    const double a = (n * sxy - sx * sy) / det;
    const double gc = (sy - a * sx) / n;
    if (gc_out) *gc_out = gc;
    double chi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = gs[i] - gc - a * std::pow(Ns[i], -p);
        chi += r * r;
    }
    return chi;
}

}  // namespace detail

// Per-N golden-section minimization of gap(g, N) over [g_lo, g_hi] to `tol`,
// then a fit g*(N) = g_c + a N^(-1/nu) profiled over the exponent.
template <class GapFn>
nu_scan scan_gap_minimum(GapFn&& gap, std::pair<double, double> g_range,
                         const std::vector<int>& Ns, double tol = 1e-6) {
    if (Ns.size() < 3) throw insufficient_points("gap-minimum scan needs >= 3 sizes");
    const auto [lo, hi] = g_range;
    if (!(hi > lo)) throw invalid_params("scan range must have g_hi > g_lo");
    nu_scan scan;
    std::vector<double> Nd;
    for (int N : Ns) {
        const double gs = detail::golden_min([&](double g) { return gap(g, N); }, lo, hi, tol);
        if (gs - lo < 2.0 * tol || hi - gs < 2.0 * tol)
            throw no_bracket_error("gap appears monotone on the scan range");
        scan.g_star.push_back(gs);
        Nd.push_back(static_cast<double>(N));
    }
    // bracket the exponent coarsely, then refine
    double best_p = 0.0;
    double best_chi = 0.0;
    bool first = true;
    for (double p = 0.05; p <= 5.0; p += 0.05) {
        const double chi = detail::profile_chi2(Nd, scan.g_star, p);
        if (first || chi < best_chi) {
            best_chi = chi;
            best_p = p;
            first = false;
        }
    }
    const double p_fit = detail::golden_min(
        [&](double p) { return detail::profile_chi2(Nd, scan.g_star, p); },
        std::max(1e-3, best_p - 0.05), best_p + 0.05, 1e-10);
    detail::profile_chi2(Nd, scan.g_star, p_fit, &scan.g_c);
    scan.nu = 1.0 / p_fit;
    return scan;
}

}
