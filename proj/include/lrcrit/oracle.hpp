#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "lrcrit/lrk.hpp"
#include "lrcrit/protocol.hpp"
#include "lrcrit/response.hpp"
#include "lrcrit/tfim.hpp"
#include "lrcrit/two_level.hpp"

namespace lrcrit {

struct mode_state {
    double r_x, r_y, r_z;
};

// Lab-frame perturbation of one mode: delta h(t) = envelope(t) * (c_x, 0, c_z)
// in the rotated frame, envelope = step or cos(2 w_d t).
struct mode_drive {
    quench_kind kind = quench_kind::sudden;
    double c_x = 0.0;
    double c_z = 0.0;
    double w_d = 0.0;
};

namespace detail {

using vec3 = std::array<double, 3>;

inline vec3 cross(const vec3& a, const vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// rotate r about axis w by angle |w| (Rodrigues)
inline vec3 rotate(const vec3& r, const vec3& w) {
    const double ang = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (ang < 1e-300) return r;
    const vec3 n = {w[0] / ang, w[1] / ang, w[2] / ang};
    const double c = std::cos(ang);
    const double s = std::sin(ang);
    const double nd = n[0] * r[0] + n[1] * r[1] + n[2] * r[2];
    const vec3 nxr = cross(n, r);
    return {r[0] * c + nxr[0] * s + n[0] * nd * (1.0 - c),
            r[1] * c + nxr[1] * s + n[1] * nd * (1.0 - c),
            r[2] * c + nxr[2] * s + n[2] * nd * (1.0 - c)};
}

// Bloch generator at time t: r' = a(t) x r with a = 2 h(t)
inline vec3 bloch_rate(const two_level_mode& mode, const mode_drive& d, double t) {
    const double env = d.kind == quench_kind::sudden ? 1.0 : std::cos(2.0 * d.w_d * t);
    return {2.0 * d.c_x * env, 0.0, 2.0 * (mode.epsilon + d.c_z * env)};
}

// One 4th-order Magnus step over [t, t+h] with two-point Gauss nodes:
//   Omega = (h/2)(a1 + a2) + (sqrt(3) h^2 / 12) a2 x a1
inline vec3 magnus_step(const two_level_mode& mode, const mode_drive& d, const vec3& r,
                        double t, double h) {
    const double off = h * std::numbers::sqrt3 / 6.0;
    const vec3 a1 = bloch_rate(mode, d, t + 0.5 * h - off);
    const vec3 a2 = bloch_rate(mode, d, t + 0.5 * h + off);
    const double c1 = 0.5 * h;
    const double c2 = std::numbers::sqrt3 * h * h / 12.0;
    const vec3 x = cross(a2, a1);
    const vec3 omega = {c1 * (a1[0] + a2[0]) + c2 * x[0], c1 * (a1[1] + a2[1]) + c2 * x[1],
                        c1 * (a1[2] + a2[2]) + c2 * x[2]};
    return rotate(r, omega);
}

}  // namespace detail

// Exact dynamics of one mode from the thermal initial state r(0) = (0, 0, f_z).
// Sudden quenches are evaluated as a single closed-form rotation per sample
// (no accumulation error); cosine drives use Magnus stepping with substep
// doubling until two refinements agree to `tol` in sup norm.
inline std::vector<mode_state> evolve_mode(const two_level_mode& mode, const mode_drive& drive,
                                           double f_z, const std::vector<double>& times,
                                           double tol = 1e-10) {
    if (times.empty()) return {};
    const double dt = times.size() > 1 ? grid_step(times) : 0.0;
    const double eps_max = std::max(
        {mode.epsilon, std::hypot(mode.epsilon + drive.c_z, drive.c_x), 2.0 * drive.w_d});
    if (times.size() > 1 && dt * eps_max > 0.05)
        throw step_size_error("time step too coarse for this mode: need dt <= 0.05/eps_max");

    std::vector<mode_state> out(times.size());
    if (drive.kind == quench_kind::sudden) {
        const detail::vec3 r0 = {0.0, 0.0, f_z};
        const detail::vec3 axis = {2.0 * drive.c_x, 0.0, 2.0 * (mode.epsilon + drive.c_z)};
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            const detail::vec3 w = {axis[0] * t, axis[1] * t, axis[2] * t};
            const auto r = detail::rotate(r0, w);
            out[i] = {r[0], r[1], r[2]};
        }
        return out;
    }

    // march the full grid at `sub` substeps per sample interval, then double
    const auto march = [&](int sub) {
        std::vector<mode_state> traj(times.size());
        detail::vec3 r = {0.0, 0.0, f_z};
        traj[0] = {r[0], r[1], r[2]};
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double t0 = times[i - 1];
            const double h = (times[i] - t0) / sub;
            for (int s = 0; s < sub; ++s) r = detail::magnus_step(mode, drive, r, t0 + s * h, h);
            traj[i] = {r[0], r[1], r[2]};
        }
        return traj;
    };
    int sub = 1;
    auto prev = march(sub);
    for (int it = 0; it < 14; ++it) {
        sub *= 2;
        auto next = march(sub);
        double diff = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            diff = std::max(diff, std::abs(next[i].r_x - prev[i].r_x));
            diff = std::max(diff, std::abs(next[i].r_y - prev[i].r_y));
            diff = std::max(diff, std::abs(next[i].r_z - prev[i].r_z));
        }
        if (diff <= tol) return next;
        prev = std::move(next);
    }
    throw numeric_error("cosine oracle did not converge under substep doubling");
}

// scale * sum_k b_k . r_k(t); scale is 2/N for magnetizations, 1 for mode sums
inline time_series assemble_observable(const std::vector<std::vector<mode_state>>& states,
                                       const std::vector<std::array<double, 3>>& coeffs,
                                       double scale, const std::vector<double>& times) {
    if (states.size() != coeffs.size())
        throw grid_mismatch_error("one coefficient triple per evolved mode required");
    for (const auto& s : states)
        if (s.size() != times.size())
            throw grid_mismatch_error("all modes must be evolved on the same time grid");
    time_series out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    for (std::size_t m = 0; m < states.size(); ++m) {
        const auto& b = coeffs[m];
        const auto& st = states[m];
        for (std::size_t i = 0; i < times.size(); ++i)
            out.values[i] += scale * (b[0] * st[i].r_x + b[1] * st[i].r_y + b[2] * st[i].r_z);
    }
    return out;
}

namespace detail {

// Evolve on an internally refined grid satisfying the dt precondition, then
// keep every `refine`-th sample; user-facing grids stay unrestricted.
inline std::vector<double> refined_grid(const std::vector<double>& times, int refine) {
    if (refine <= 1) return times;
    std::vector<double> fine;
    fine.reserve(times.size() * static_cast<std::size_t>(refine));
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double h = (times[i + 1] - times[i]) / refine;
        for (int s = 0; s < refine; ++s) fine.push_back(times[i] + s * h);
    }
    fine.push_back(times.back());
    return fine;
}

template <class DriveFor, class CoeffFor>
time_series oracle_series(const std::vector<two_level_mode>& modes, DriveFor&& drive_for,
                          CoeffFor&& coeff_for, const std::vector<double>& f_z, double scale,
                          const std::vector<double>& times, double tol) {
    double eps_hot = 0.0;
    std::vector<mode_drive> drives;
    drives.reserve(modes.size());
    for (const auto& m : modes) {
        const mode_drive d = drive_for(m);
        drives.push_back(d);
        eps_hot = std::max(
            {eps_hot, m.epsilon, std::hypot(m.epsilon + d.c_z, d.c_x), 2.0 * d.w_d});
    }
    const double dt = times.size() > 1 ? grid_step(times) : 0.0;
    const int refine = dt > 0.0 ? std::max(1, static_cast<int>(std::ceil(dt * eps_hot / 0.05)))
                                : 1;
    const auto fine = refined_grid(times, refine);
    std::vector<std::vector<mode_state>> states;
    std::vector<std::array<double, 3>> coeffs;
    states.reserve(modes.size());
    coeffs.reserve(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
        auto traj = evolve_mode(modes[m], drives[m], f_z[m], fine, tol);
        std::vector<mode_state> kept(times.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            kept[i] = traj[std::min(i * static_cast<std::size_t>(refine), traj.size() - 1)];
        states.push_back(std::move(kept));
        coeffs.push_back(coeff_for(modes[m]));
    }
    return assemble_observable(states, coeffs, scale, times);
}

}  // namespace detail

inline time_series oracle_mx_tfim(const tfim_params& p, const quench_protocol& pr,
                                  double temperature, const std::vector<double>& times,
                                  double tol = 1e-10) {
    p.validate();
    pr.validate();
    const auto modes = tfim_modes(p);
    const auto f_z = thermal_weights_for(modes, temperature);
    auto out = detail::oracle_series(
        modes,
        [&](const two_level_mode& m) {
            const auto [cx, cz] = tfim_quench_coeffs(p, pr.amplitude, m);
            return mode_drive{pr.kind, cx, cz, pr.drive_frequency};
        },
        [](const two_level_mode& m) { return mx_coeffs(m); }, f_z, 2.0 / p.N, times, tol);
    out.metadata = {{"model", "tfim"}, {"observable", "mx"}, {"source", "oracle"}};
    return out;
}

inline time_series oracle_mzz_tfim(const tfim_params& p, const quench_protocol& pr,
                                   const std::vector<double>& times, double tol = 1e-10) {
    p.validate();
    pr.validate();
    const auto modes = tfim_modes(p);
    const std::vector<double> f_z(modes.size(), -1.0);
    auto out = detail::oracle_series(
        modes,
        [&](const two_level_mode& m) {
            const auto [cx, cz] = tfim_quench_coeffs(p, pr.amplitude, m);
            return mode_drive{pr.kind, cx, cz, pr.drive_frequency};
        },
        [](const two_level_mode& m) { return mzz_coeffs(m); }, f_z, 2.0 / p.N, times, tol);
    out.metadata = {{"model", "tfim"}, {"observable", "mzz"}, {"source", "oracle"}};
    return out;
}

inline time_series oracle_nf_lrk(const lrk_params& p, const quench_protocol& pr,
                                 const std::vector<double>& times, double tol = 1e-10) {
    p.validate();
    pr.validate();
    if (pr.kind != quench_kind::sudden)
        throw invalid_params("protocol.kind: cosine drive is defined for the tfim only");
    const auto modes = lrk_modes(p);
    const std::vector<double> f_z(modes.size(), -1.0);
    auto out = detail::oracle_series(
        modes,
        [&](const two_level_mode& m) {
            const auto [cx, cz] = lrk_quench_coeffs(p, pr.amplitude, m);
            return mode_drive{pr.kind, cx, cz, 0.0};
        },
        [](const two_level_mode& m) { return nf_coeffs(m); }, f_z, 1.0, times, tol);
    out.metadata = {{"model", "lrk"}, {"observable", "nf"}, {"source", "oracle"}};
    return out;
}

}
