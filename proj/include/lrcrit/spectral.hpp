#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "lrcrit/protocol.hpp"

namespace lrcrit {

enum class window_kind { none, hann };

inline window_kind parse_window(const std::string& s) {
    if (s == "none") return window_kind::none;
    if (s == "hann") return window_kind::hann;
    throw invalid_params("spectral.window must be 'none' or 'hann'");
}

struct spectral_options {
    window_kind window = window_kind::none;
    bool mean_subtract = true;
    bool zero_pad = false;  // 4x padding; pair with hann, rectangular sidelobes
                            // sit at 0.22 of the mainlobe and fool peak floors
};

struct spectrum {
    std::vector<double> omega;      // 2 pi j / (n dt), j = 0..n/2
    std::vector<double> magnitude;  // |S(omega_j)|
    double bin_width = 0.0;
};

// |DFT| of the (optionally mean-subtracted, windowed) series. Mean subtraction
// removes the DC term so "lowest nonzero peak" needs no special casing.
inline spectrum compute_spectrum(const time_series& s, const spectral_options& opt = {}) {
    const std::size_t n0 = s.values.size();
    if (n0 < 64) throw invalid_params("spectrum needs at least 64 samples");
    const double dt = grid_step(s.times);

    std::vector<double> v = s.values;
    if (opt.mean_subtract) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(n0);
        for (double& x : v) x -= mean;
    }
    if (opt.window == window_kind::hann) {
        for (std::size_t i = 0; i < n0; ++i)
            v[i] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n0));
    }
    if (opt.zero_pad) v.resize(4 * n0, 0.0);

    const std::size_t n = v.size();
    const std::size_t half = n / 2;
    double l1 = 0.0;
    for (double x : v) l1 += std::abs(x);
    // bins below the summation roundoff bound are numerically zero; clamp them
    // so a noise-only spectrum (constant input) reports no peak
    const double floor = 2.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * l1;
    spectrum out;
    out.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    out.omega.resize(half + 1);
    out.magnitude.resize(half + 1);
    for (std::size_t j = 0; j <= half; ++j) {
        double re = 0.0;
        double im = 0.0;
        const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = w * static_cast<double>(i);
            re += v[i] * std::cos(ph);
            im -= v[i] * std::sin(ph);
        }
        out.omega[j] = out.bin_width * static_cast<double>(j);
        const double mag = std::hypot(re, im);
        out.magnitude[j] = mag < floor ? 0.0 : mag;
    }
    return out;
}

struct peak_estimate {
    double omega_m = 0.0;
    double amplitude = 0.0;  // raw magnitude of the peak bin
    std::size_t bin = 0;
    double sigma = 0.0;  // half a bin
    bool refined = false;
};

// Smallest-omega interior local maximum above noise_floor * max nonzero
// magnitude (and above min_magnitude absolutely, when given). Three-point
// parabolic refinement, offset clamped to half a bin.
inline peak_estimate lowest_peak(const spectrum& s, double noise_floor, bool refine = true,
                                 double min_magnitude = 0.0) {
    const std::size_t n = s.magnitude.size();
    if (n < 3) throw invalid_params("spectrum too short for peak search");
    if (!(noise_floor >= 0.0)) throw invalid_params("spectral.noise_floor must be >= 0");
    double max_nz = 0.0;
    for (std::size_t j = 1; j < n; ++j) max_nz = std::max(max_nz, s.magnitude[j]);
    const double floor = std::max(noise_floor * max_nz, min_magnitude);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double m0 = s.magnitude[j];
        if (m0 <= s.magnitude[j - 1] || m0 < s.magnitude[j + 1]) continue;
        if (m0 < floor || m0 <= 0.0) continue;
        peak_estimate pk;
        pk.bin = j;
        pk.amplitude = m0;
        pk.sigma = 0.5 * s.bin_width;
        double delta = 0.0;
        if (refine) {
            const double ml = s.magnitude[j - 1];
            const double mr = s.magnitude[j + 1];
            const double denom = ml - 2.0 * m0 + mr;
            if (denom != 0.0) delta = 0.5 * (ml - mr) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
            pk.refined = true;
        }
        pk.omega_m = (static_cast<double>(j) + delta) * s.bin_width;
        return pk;
    }
    throw no_peak_error("no spectral peak above the noise floor");
}

}
