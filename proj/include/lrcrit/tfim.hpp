#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "lrcrit/two_level.hpp"

namespace lrcrit {

// H = -J sum_j (g sx_j + sz_j sz_{j+1}), periodic, N even. The lattice spacing
// b only ever enters through k*b, so energies are b-independent.
struct tfim_params {
    double J = 1.0;
    double g = 1.0;
    int N = 4;
    double b = 1.0;

    void validate() const {
        if (!(J > 0.0)) throw invalid_params("model.J must be > 0");
        if (!(g >= 0.0)) throw invalid_params("model.g must be >= 0");
        if (N < 4 || N % 2 != 0) throw invalid_params("model.N must be even and >= 4");
        if (!(b > 0.0)) throw invalid_params("model.b must be > 0");
    }
};

// Antiperiodic (even-parity) grid k_n b = (2n-1) pi / N, n = 1..N/2, ascending.
inline std::vector<two_level_mode> tfim_modes(const tfim_params& p) {
    p.validate();
    std::vector<two_level_mode> modes;
    modes.reserve(static_cast<std::size_t>(p.N / 2));
    for (int n = 1; n <= p.N / 2; ++n) {
        const double kb = (2.0 * n - 1.0) * pi / p.N;
        const double h_z = 2.0 * p.J * (p.g - std::cos(kb));
        const double h_x = 2.0 * p.J * std::sin(kb);
        modes.push_back(make_mode(kb / p.b, h_z, h_x));
    }
    return modes;
}

// finite-size gap Delta_N = 2 eps_{k1}; equals 8 J sin(pi/(2N)) at g = 1
inline double tfim_gap(const tfim_params& p) {
    p.validate();
    const double kb = pi / p.N;
    return 4.0 * p.J * std::sqrt(p.g * p.g + 1.0 - 2.0 * p.g * std::cos(kb));
}

// Gap to the opposite-parity ground state: Delta_s = E0^- - E0 with
// E0 = -sum_n eps(k_n) on the antiperiodic grid and
// E0^- = -2J (1 + sum_{n=1}^{N/2-1} sqrt(g^2 + 1 - 2 g cos(2 pi n / N))).
inline double tfim_sector_gap(const tfim_params& p) {
    p.validate();
    double e0 = 0.0;
    for (int n = 1; n <= p.N / 2; ++n) {
        const double kb = (2.0 * n - 1.0) * pi / p.N;
        e0 -= 2.0 * p.J * std::sqrt(p.g * p.g + 1.0 - 2.0 * p.g * std::cos(kb));
    }
    double e0_minus = -2.0 * p.J;
    for (int n = 1; n <= p.N / 2 - 1; ++n) {
        const double kb = 2.0 * pi * n / p.N;
        e0_minus -= 2.0 * p.J * std::sqrt(p.g * p.g + 1.0 - 2.0 * p.g * std::cos(kb));
    }
    return e0_minus - e0;
}

// Rotated-frame perturbation of a transverse-field quench g -> g + dg:
// delta h = 2 J dg (cos k-hat z + sin k-hat x) rotated by the mode angle.
inline std::array<double, 2> tfim_quench_coeffs(const tfim_params& p, double dg,
                                                const two_level_mode& m) {
    const double a = 2.0 * p.J * dg;
    return {-a * m.sin2theta(), a * m.cos2theta()};  // (c_x, c_z)
}

// Observable coefficients (b_x, b_y, b_z) in the rotated frame; the assembled
// series carry an overall 2/N.
inline std::array<double, 3> mx_coeffs(const two_level_mode& m) {
    return {m.sin2theta(), 0.0, -m.cos2theta()};
}

inline std::array<double, 3> mzz_coeffs(const two_level_mode& m) {
    const double ck = std::cos(m.k);
    const double sk = std::sin(m.k);
    const double c2 = m.cos2theta();
    const double s2 = m.sin2theta();
    return {sk * c2 - ck * s2, 0.0, ck * c2 + sk * s2};
}

}
