#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lrcrit/errors.hpp"

namespace lrcrit {

inline constexpr double pi = std::numbers::pi;

// One momentum-space two-level problem. The mixing angle lives on the branch
// theta in (-pi/2, 0], so cos(2 theta) = -h_z/eps and sin(2 theta) = -|h_x|/eps;
// the ground-state Bloch vector then sits at -z in the rotated frame for every
// mode, which is what the assembled response formulas assume.
struct two_level_mode {
    double k;
    double h_z;
    double h_x;
    double epsilon;
    double theta;

    double cos2theta() const { return -h_z / epsilon; }
    double sin2theta() const { return -std::abs(h_x) / epsilon; }
};

inline two_level_mode make_mode(double k, double h_z, double h_x) {
    const double eps = std::hypot(h_z, h_x);
    if (!(eps > 0.0))
        throw degenerate_mode_error("two-level mode with eps = 0 at k = " + std::to_string(k));
    const double theta = 0.5 * (std::atan2(std::abs(h_x), h_z) - pi);
    return {k, h_z, h_x, eps, theta};
}

// f_z^k = -tanh(eps_k / T); T = 0 takes the same path and lands exactly on -1.
inline double thermal_weight(double eps, double temperature) {
    if (!(temperature >= 0.0))
        throw invalid_params("temperature must be >= 0");
    if (temperature == 0.0) return -1.0;
    return -std::tanh(eps / temperature);
}

using thermal_weights = std::vector<double>;

inline thermal_weights thermal_weights_for(const std::vector<two_level_mode>& modes,
                                           double temperature) {
    thermal_weights w;
    w.reserve(modes.size());
    for (const auto& m : modes) w.push_back(thermal_weight(m.epsilon, temperature));
    return w;
}

}
