#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "lrcrit/ed.hpp"
#include "lrcrit/tfim.hpp"

using namespace lrcrit;

namespace {

double mx_expectation(const std::vector<double>& psi, int N) {
    const std::size_t dim = std::size_t{1} << N;
    double acc = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        double flip = 0.0;
        for (int j = 0; j < N; ++j) flip += psi[s ^ (std::size_t{1} << j)];
        acc += psi[s] * flip;
    }
    return acc / static_cast<double>(N);
}

}

TEST_CASE("two-site longitudinal chain by hand") {
    const auto es = diagonalize(build_longitudinal(2, 0.0, 0.0, 1.0));
    REQUIRE(es.eigenvalues.size() == 4);
    REQUIRE(es.eigenvalues[0] == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(es.eigenvalues[1] == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(es.eigenvalues[2] == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(es.eigenvalues[3] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("two-site long-range chain by hand") {
    // H = sz sz + g (sx_0 + sx_1): eigenvalues -sqrt(1+4g^2), -1, 1, sqrt(1+4g^2)
    const double g = 0.7;
    const auto es = diagonalize(build_long_range(2, g, 2.0, 1.0));
    const double e = std::sqrt(1.0 + 4.0 * g * g);
    REQUIRE(es.eigenvalues[0] == Catch::Approx(-e).margin(1e-12));
    REQUIRE(es.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(es.eigenvalues[2] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(es.eigenvalues[3] == Catch::Approx(e).margin(1e-12));
}

TEST_CASE("built Hamiltonians are symmetric") {
    for (const auto& H : {build_longitudinal(6, 1.3, 0.2, 1.0), build_long_range(5, 0.8, 2.0, -1.0)}) {
        for (std::size_t s = 0; s < H.dim; ++s)
            for (std::size_t t = 0; t < s; ++t)
                REQUIRE(H.matrix[s * H.dim + t] == H.matrix[t * H.dim + s]);
    }
}

TEST_CASE("long-range diagonal matches the pair sum") {
    // all-down state of 4 sites, distances {1,1,1,2,2,3}
    const auto H = build_long_range(4, 0.3, 2.0, -1.0);
    REQUIRE(H.matrix[0] == Catch::Approx(-(3.0 + 2.0 / 4.0 + 1.0 / 9.0)).margin(1e-12));
}

TEST_CASE("steep long-range decay reduces to nearest neighbors") {
    const int N = 6;
    const double g = 0.9;
    const double J = -1.0;
    const auto H = build_long_range(N, g, 50.0, J);
    const std::size_t dim = H.dim;
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int j = 0; j + 1 < N; ++j)
            diag += J * detail::sz_bit(s, j) * detail::sz_bit(s, j + 1);
        REQUIRE(H.matrix[s * dim + s] == Catch::Approx(diag).margin(1e-13));
    }
}

TEST_CASE("critical spectrum matches the free-fermion solution") {
    tfim_params p;
    p.N = 8;
    const auto es = diagonalize(build_longitudinal(8, 1.0, 0.0, 1.0));

    double e0 = 0.0;
    for (const auto& m : tfim_modes(p)) e0 -= m.epsilon;
    REQUIRE(es.eigenvalues[0] == Catch::Approx(e0).margin(1e-9));
    REQUIRE(es.eigenvalues[1] - es.eigenvalues[0] ==
            Catch::Approx(tfim_sector_gap(p)).margin(1e-9));

    // lowest excitation in the ground-state parity sector is the pair gap
    const auto lab = parity_labels(es);
    REQUIRE(std::abs(std::abs(lab[0]) - 1.0) < 1e-6);
    double even_gap = 0.0;
    for (std::size_t n = 1; n < es.dim; ++n) {
        if (std::abs(lab[n] - lab[0]) < 0.5) {
            REQUIRE(std::abs(std::abs(lab[n]) - 1.0) < 1e-6);
            even_gap = es.eigenvalues[n] - es.eigenvalues[0];
            break;
        }
    }
    REQUIRE(even_gap == Catch::Approx(tfim_gap(p)).margin(1e-9));
}

TEST_CASE("parity labels are good quantum numbers off criticality") {
    const auto es = diagonalize(build_longitudinal(6, 1.37, 0.0, 1.0));
    for (double l : parity_labels(es)) REQUIRE(std::abs(std::abs(l) - 1.0) < 1e-6);
}

TEST_CASE("ferromagnetic ground state is flagged degenerate") {
    const auto deep = ground_state(diagonalize(build_longitudinal(6, 0.0, 0.0, 1.0)));
    REQUIRE(deep.degenerate);
    const auto crit = ground_state(diagonalize(build_longitudinal(6, 1.0, 0.0, 1.0)));
    REQUIRE_FALSE(crit.degenerate);
    REQUIRE(crit.energy < deep.energy);
}

TEST_CASE("evolution starts at the static expectation and stays bounded") {
    const int N = 6;
    const auto gs = ground_state(diagonalize(build_longitudinal(N, 1.0, 0.0, 1.0)));
    const auto es1 = diagonalize(build_longitudinal(N, 1.0, 1e-3, 1.0));
    const auto series = evolve_and_measure(es1, N, gs.psi, time_grid(10.0, 80));

    REQUIRE(series.values.size() == 80);
    REQUIRE(series.times[0] == 0.0);
    REQUIRE(series.values[0] == Catch::Approx(mx_expectation(gs.psi, N)).margin(1e-12));
    for (double v : series.values) REQUIRE(std::abs(v) <= 1.0 + 1e-9);
    REQUIRE(series.metadata.at("source") == "ed");
}

TEST_CASE("longitudinal response is even in the field step") {
    // flipping every spin maps h -> -h while fixing M_x and the ground state,
    // so the response has no linear term; the signal is quadratic in dh
    const int N = 6;
    const double dh = 1e-4;
    const auto gs = ground_state(diagonalize(build_longitudinal(N, 1.0, 0.0, 1.0)));
    const auto times = time_grid(10.0, 50);
    const double m0 = mx_expectation(gs.psi, N);

    const auto shifted = [&](double h) {
        return evolve_and_measure(diagonalize(build_longitudinal(N, 1.0, h, 1.0)), N, gs.psi,
                                  times);
    };
    const auto amp = [&](const time_series& s) {
        double a = 0.0;
        for (double v : s.values) a = std::max(a, std::abs(v - m0));
        return a;
    };

    const auto plus = shifted(dh);
    const auto minus = shifted(-dh);
    double even_dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        even_dev = std::max(even_dev, std::abs(plus.values[i] - minus.values[i]));
    REQUIRE(even_dev < 1e-12);

    const double full = amp(plus);
    const double half = amp(shifted(0.5 * dh));
    REQUIRE(full > 1e-7);
    REQUIRE(full / half == Catch::Approx(4.0).epsilon(0.02));
}

TEST_CASE("dense diagonalization input validation") {
    REQUIRE_THROWS_AS(build_longitudinal(15, 1.0, 0.0, 1.0), invalid_params);
    REQUIRE_THROWS_AS(build_longitudinal(1, 1.0, 0.0, 1.0), invalid_params);
    REQUIRE_THROWS_AS(build_long_range(16, 1.0, 2.0, -1.0), invalid_params);

    const auto es = diagonalize(build_longitudinal(4, 1.0, 0.0, 1.0));
    std::vector<double> bad(8, 0.0);
    REQUIRE_THROWS_AS(evolve_and_measure(es, 4, bad, time_grid(1.0, 4)), invalid_params);
    std::vector<double> unnorm(16, 0.3);
    REQUIRE_THROWS_AS(evolve_and_measure(es, 4, unnorm, time_grid(1.0, 4)), invalid_params);
}
