#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "lrcrit/lrk.hpp"
#include "lrcrit/protocol.hpp"
#include "lrcrit/tfim.hpp"
#include "lrcrit/two_level.hpp"

namespace lrcrit {

namespace detail {

inline double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                                   double b, double fb, double m, double fm, double whole,
                                   double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(a, fa, m, fm, flm);
    const double right = simpson_rule(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw quadrature_error("adaptive quadrature failed to reach tolerance");
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// Seeds the recursion with panels of length <= 1 so an integrand oscillating
// over many periods cannot alias the first whole-interval estimate into
// spurious agreement. Callers integrate in rescaled phase variables, so unit
// panels resolve the oscillation everywhere.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double len = std::abs(b - a);
    const int panels = static_cast<int>(std::min(std::ceil(len), 16384.0));
    const double h = (b - a) / panels;
    const double ptol = tol / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + i * h;
        const double pb = i + 1 == panels ? b : a + (i + 1) * h;
        const double fa = f(pa);
        const double fb = f(pb);
        const double m = 0.5 * (pa + pb);
        const double fm = f(m);
        const double whole = simpson_rule(pa, fa, pb, fb, fm);
        total += adaptive_simpson_rec(f, pa, fa, pb, fb, m, fm, whole, ptol, max_depth);
    }
    return total;
}

// sin(d t)/d with the removable singularity filled in
inline double sin_over(double d, double t) {
    const double x = d * t;
    if (std::abs(x) < 1e-8) return t * (1.0 - x * x / 6.0);
    return std::sin(x) / d;
}

}  // namespace detail

// Generic first-order response of a single driven mode,
//   H(t) = eps sz~ + c_x(t) sx~ + c_y(t) sy~ + c_z(t) sz~,
// observable b . sigma~, initial weight f_z on sz~:
//   value(t) = f_z b_z + 2 f_z Int_0^t ds [ (c_x b_x + c_y b_y) sin(2 eps (t-s))
//                                         + (c_y b_x - c_x b_y) cos(2 eps (t-s)) ].
// c_z never enters at first order ([sz~, sz~] = 0). The integral is evaluated
// in rescaled variables u = eps s with coefficients c/eps, which keeps the
// quadrature well conditioned across the small-eps modes.
inline double single_mode_response(const two_level_mode& mode,
                                   const std::function<double(double)>& c_x,
                                   const std::function<double(double)>& c_y,
                                   const std::function<double(double)>& c_z,
                                   const std::array<double, 3>& b, double f_z, double t,
                                   double tol = 1e-10) {
    (void)c_z;
    if (!(mode.epsilon > 0.0))
        throw degenerate_mode_error("single_mode_response needs eps > 0");
    const double eps = mode.epsilon;
    double integral = 0.0;
    if (t != 0.0 && (b[0] != 0.0 || b[1] != 0.0)) {
        const auto integrand = [&](double u) {
            const double s = u / eps;
            const double phase = 2.0 * (eps * t - u);
            const double cx = c_x(s) / eps;
            const double cy = c_y(s) / eps;
            return (cx * b[0] + cy * b[1]) * std::sin(phase) +
                   (cy * b[0] - cx * b[1]) * std::cos(phase);
        };
        integral = detail::adaptive_simpson(integrand, 0.0, eps * t, tol);
    }
    return f_z * b[2] + 2.0 * f_z * integral;
}

// Closed form of the same integral for a sudden step (c_x, c_y constant after t=0):
//   value = f_z b_z + 2 f_z [ (c_x b_x + c_y b_y) sin^2(eps t)/eps
//                           + (c_y b_x - c_x b_y) sin(2 eps t)/(2 eps) ]
inline double sudden_mode_value(double eps, double c_x, double c_y,
                                const std::array<double, 3>& b, double f_z, double t) {
    const double st = std::sin(eps * t);
    const double s2t = std::sin(2.0 * eps * t);
    return f_z * b[2] +
           2.0 * f_z * ((c_x * b[0] + c_y * b[1]) * st * st / eps +
                        (c_y * b[0] - c_x * b[1]) * s2t / (2.0 * eps));
}

// Cosine drive c_x(t) = c_x cos(2 w_d t). Off resonance the b_x part is
//   2 f_z c_x b_x * (eps/(eps+w_d)) sin((eps+w_d) t) * sin((eps-w_d) t)/(eps-w_d),
// which reduces to the sudden form at w_d = 0 and crosses over to the secular
// branch t sin(2 eps t) when |eps - w_d| < resonance_tol.
inline constexpr double resonance_tol = 1e-9;
inline constexpr double conditioning_tol = 1e-6;

inline double cosine_mode_value(double eps, double c_x, const std::array<double, 3>& b,
                                double f_z, double w_d, double t,
                                double res_width = resonance_tol) {
    if (b[0] == 0.0) return f_z * b[2];
    double dyn;
    if (std::abs(eps - w_d) < res_width) {
        dyn = 0.5 * c_x * t * std::sin(2.0 * eps * t);
    } else {
        dyn = c_x * (eps / (eps + w_d)) * std::sin((eps + w_d) * t) *
              detail::sin_over(eps - w_d, t);
    }
    return f_z * b[2] + 2.0 * f_z * b[0] * dyn;
}

// ---- assembled observables --------------------------------------------------

inline void check_weights(std::size_t modes, std::size_t weights) {
    if (modes != weights)
        throw invalid_params("thermal weights must match the mode list length");
}

// <M_x>(t) = (2/N) sum_k [ f_z b_z + dyn ]; summation in ascending k so runs
// are bit-reproducible regardless of how callers parallelize over N.
inline time_series mx_response_sudden(const tfim_params& p, double dg,
                                      const thermal_weights& w,
                                      const std::vector<double>& times) {
    p.validate();
    const auto modes = tfim_modes(p);
    check_weights(modes.size(), w.size());
    time_series out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    const double scale = 2.0 / p.N;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto& mode = modes[m];
        const auto [c_x, c_z] = tfim_quench_coeffs(p, dg, mode);
        (void)c_z;
        const auto b = mx_coeffs(mode);
        for (std::size_t i = 0; i < times.size(); ++i)
            out.values[i] += scale * sudden_mode_value(mode.epsilon, c_x, 0.0, b, w[m], times[i]);
    }
    out.metadata = {{"model", "tfim"}, {"observable", "mx"}, {"protocol", "sudden"}};
    return out;
}

inline time_series mx_response_thermal(const tfim_params& p, double dg, double temperature,
                                       const std::vector<double>& times) {
    const auto w = thermal_weights_for(tfim_modes(p), temperature);
    auto out = mx_response_sudden(p, dg, w, times);
    out.metadata["temperature"] = std::to_string(temperature);
    return out;
}

inline time_series mx_response_cosine(const tfim_params& p, double dg, double omega_d,
                                      const std::vector<double>& times) {
    p.validate();
    if (!(omega_d >= 0.0)) throw invalid_params("protocol.drive_frequency must be >= 0");
    const auto modes = tfim_modes(p);
    time_series out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    const double scale = 2.0 / p.N;
    int near_resonant = 0;
    const double res_width = resonance_tol * p.J;
    for (const auto& mode : modes) {
        const auto [c_x, c_z] = tfim_quench_coeffs(p, dg, mode);
        (void)c_z;
        const auto b = mx_coeffs(mode);
        const double det = std::abs(mode.epsilon - omega_d);
        if (det >= res_width && det < conditioning_tol * p.J) ++near_resonant;
        for (std::size_t i = 0; i < times.size(); ++i)
            out.values[i] += scale * cosine_mode_value(mode.epsilon, c_x, b, -1.0, omega_d,
                                                       times[i], res_width);
    }
    out.metadata = {{"model", "tfim"}, {"observable", "mx"}, {"protocol", "cosine"}};
    if (near_resonant > 0)
        out.metadata["conditioning_warning"] =
            std::to_string(near_resonant) + " mode(s) within 1e-6 J of resonance";
    return out;
}

inline time_series mzz_response_sudden(const tfim_params& p, double dg,
                                       const std::vector<double>& times) {
    p.validate();
    const auto modes = tfim_modes(p);
    time_series out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    const double scale = 2.0 / p.N;
    for (const auto& mode : modes) {
        const auto [c_x, c_z] = tfim_quench_coeffs(p, dg, mode);
        (void)c_z;
        const auto b = mzz_coeffs(mode);
        for (std::size_t i = 0; i < times.size(); ++i)
            out.values[i] += scale * sudden_mode_value(mode.epsilon, c_x, 0.0, b, -1.0, times[i]);
    }
    out.metadata = {{"model", "tfim"}, {"observable", "mzz"}, {"protocol", "sudden"}};
    return out;
}

// <N_f>(t) = -sum_k N_k; extensive on purpose (no 1/N)
inline time_series nf_response_sudden(const lrk_params& p, double dmu,
                                      const std::vector<double>& times) {
    p.validate();
    const auto modes = lrk_modes(p);
    time_series out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    for (const auto& mode : modes) {
        const auto [c_x, c_z] = lrk_quench_coeffs(p, dmu, mode);
        (void)c_z;
        const auto b = nf_coeffs(mode);
        for (std::size_t i = 0; i < times.size(); ++i)
            out.values[i] += sudden_mode_value(mode.epsilon, c_x, 0.0, b, -1.0, times[i]);
    }
    out.metadata = {{"model", "lrk"}, {"observable", "nf"}, {"protocol", "sudden"}};
    return out;
}

// Continuum limit of the M_x series at T=0 (J=1 units):
//   (1/pi) Int_0^pi dk [ cos2theta + 4 dg sin^2 2theta sin^2(eps t)/eps ]
// to absolute tolerance 1e-8.
inline double mx_thermodynamic_limit(double g0, double dg, double t) {
    if (!(g0 > 0.0)) throw invalid_params("model.g must be > 0 in the continuum limit");
    const auto integrand = [&](double k) {
        const double h_z = 2.0 * (g0 - std::cos(k));
        const double h_x = 2.0 * std::sin(k);
        const double eps = std::hypot(h_z, h_x);
        const double c2 = -h_z / eps;
        const double s2 = -std::abs(h_x) / eps;
        const double st = std::sin(eps * t);
        return c2 + 4.0 * dg * s2 * s2 * st * st / eps;
    };
    return detail::adaptive_simpson(integrand, 0.0, pi, 1e-8 / 15.0) / pi;
}

}
