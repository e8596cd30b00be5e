#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "lrcrit/errors.hpp"

namespace lrcrit {

enum class quench_kind { sudden, cosine };

// lambda(t): sudden step of height `amplitude` at t=0, or amplitude*cos(2*w_d*t).
struct quench_protocol {
    quench_kind kind = quench_kind::sudden;
    double amplitude = 0.0;        // dg, dmu/J or dh, dimensionless
    double drive_frequency = 0.0;  // w_d in units of J, cosine only

    void validate() const {
        if (!std::isfinite(amplitude) || std::abs(amplitude) > 0.2)
            throw invalid_params("protocol.amplitude must be finite with |amplitude| <= 0.2");
        if (kind == quench_kind::cosine &&
            (!std::isfinite(drive_frequency) || drive_frequency < 0.0))
            throw invalid_params("protocol.drive_frequency must be >= 0");
    }

    // linear response is trustworthy well below this; callers may warn
    bool beyond_linear_comfort() const { return std::abs(amplitude) > 0.05; }
};

// t_i = i*tau/n, i = 0..n-1. Half-open on purpose: the DFT bins then sit at
// exactly 2*pi*j/tau.
inline std::vector<double> time_grid(double tau, int n) {
    if (!(tau > 0.0)) throw invalid_params("sampling.tau must be > 0");
    if (n < 1) throw invalid_params("sampling.samples must be >= 1");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = tau * static_cast<double>(i) / static_cast<double>(n);
    return t;
}

struct time_series {
    std::vector<double> times;
    std::vector<double> values;
    std::map<std::string, std::string> metadata;  // model/observable/protocol tags
};

// spacing check shared by the spectral and oracle entry points
inline double grid_step(const std::vector<double>& times) {
    if (times.size() < 2) throw invalid_params("time grid needs at least 2 samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw invalid_params("time grid must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw invalid_params("time grid must be evenly spaced");
    }
    return dt;
}

}
