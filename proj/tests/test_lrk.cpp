#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lrcrit/lrk.hpp"

using namespace lrcrit;

TEST_CASE("kac normalizer") {
    REQUIRE(kac_norm(2.0, 4) == Catch::Approx(2.5).epsilon(1e-15));
    REQUIRE(kac_norm(1.5, 40) == Catch::Approx(4.341364142887199).epsilon(1e-12));
    SECTION("decreasing in the exponent") {
        REQUIRE(kac_norm(1.2, 100) > kac_norm(2.0, 100));
        REQUIRE(kac_norm(2.0, 100) > kac_norm(3.0, 100));
        REQUIRE(kac_norm(3.0, 100) > 0.0);
    }
    SECTION("rejects gamma <= 1") {
        REQUIRE_THROWS_AS(kac_norm(1.0, 40), invalid_params);
    }
}

TEST_CASE("momentum grid matches the short-range chain") {
    const auto modes = lrk_modes(lrk_params{1.0, 2.0, 2.5, 1.5, 20});
    REQUIRE(modes.size() == 10);
    for (std::size_t n = 0; n < modes.size(); ++n)
        REQUIRE(modes[n].k == Catch::Approx((2.0 * (n + 1) - 1.0) * pi / 20.0).epsilon(1e-15));
}

TEST_CASE("steep exponents reduce to the nearest-neighbor Kitaev fields") {
    const lrk_params p{1.0, 2.0, 50.0, 50.0, 40};
    for (const auto& m : lrk_modes(p)) {
        const double hz_nn = 1.0 - std::cos(m.k);
        const double hx_nn = -0.5 * std::sin(m.k);
        REQUIRE(std::abs(m.h_z - hz_nn) < 1e-3 * std::max(1.0, std::abs(hz_nn)));
        REQUIRE(std::abs(m.h_x - hx_nn) < 1e-3 * std::max(1.0, std::abs(hx_nn)));
    }
}

TEST_CASE("scaled lowest mode energy approaches pi/2 in the steep limit") {
    double prev_err = 1e9;
    for (int N : {40, 100, 200}) {
        const auto modes = lrk_modes(lrk_params{1.0, 2.0, 50.0, 50.0, N});
        const double scaled = modes.front().epsilon * N;
        const double err = std::abs(scaled - pi / 2.0);
        REQUIRE(err < prev_err);
        prev_err = err;
    }
    REQUIRE(prev_err < 0.05 * pi / 2.0);
}

TEST_CASE("spectrum stays gapped at mu_c for finite N") {
    for (double a : {1.5, 2.5})
        for (double b : {1.2, 1.5, 3.0}) {
            const auto modes = lrk_modes(lrk_params{1.0, lrk_critical_mu(1.0), a, b, 24});
            for (const auto& m : modes) REQUIRE(m.epsilon > 0.0);
        }
}

TEST_CASE("gap equals twice the grid minimum") {
    for (double mu : {0.0, 1.0, 2.0, 3.0}) {
        const lrk_params p{1.0, mu, 2.5, 1.5, 30};
        const auto modes = lrk_modes(p);
        double emin = 1e300;
        for (const auto& m : modes) emin = std::min(emin, std::hypot(m.h_z, m.h_x));
        REQUIRE(lrk_gap(p) == Catch::Approx(2.0 * emin).epsilon(1e-14));
    }
}

TEST_CASE("critical chemical potential scales with J") {
    REQUIRE(lrk_critical_mu(1.0) == 2.0);
    REQUIRE(lrk_critical_mu(0.7) == Catch::Approx(1.4).epsilon(1e-15));
}

TEST_CASE("kac normalization keeps mode energies intensive") {
    const auto small = lrk_modes(lrk_params{1.0, 2.0, 1.5, 1.5, 100});
    const auto large = lrk_modes(lrk_params{1.0, 2.0, 1.5, 1.5, 1000});
    double emax_small = 0.0;
    double emax_large = 0.0;
    for (const auto& m : small) emax_small = std::max(emax_small, m.epsilon);
    for (const auto& m : large) emax_large = std::max(emax_large, m.epsilon);
    REQUIRE(emax_large / emax_small > 0.8);
    REQUIRE(emax_large / emax_small < 1.25);
}

TEST_CASE("coefficient vectors keep their length") {
    const lrk_params p{1.0, 2.0, 2.5, 1.5, 16};
    for (const auto& m : lrk_modes(p)) {
        const auto [cx, cz] = lrk_quench_coeffs(p, 0.01, m);
        REQUIRE(std::hypot(cx, cz) == Catch::Approx(0.01).epsilon(1e-13));
        const auto b = nf_coeffs(m);
        REQUIRE(std::hypot(b[0], b[2]) == Catch::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("parameter validation names the offending key") {
    REQUIRE_THROWS_WITH(lrk_modes(lrk_params{1.0, 2.0, 0.9, 1.5, 20}),
                        Catch::Matchers::ContainsSubstring("model.alpha"));
    REQUIRE_THROWS_WITH(lrk_modes(lrk_params{1.0, 2.0, 2.5, 1.0, 20}),
                        Catch::Matchers::ContainsSubstring("model.beta"));
    REQUIRE_THROWS_AS(lrk_modes(lrk_params{1.0, 2.0, 2.5, 1.5, 15}), invalid_params);
    REQUIRE_THROWS_AS(lrk_modes(lrk_params{-1.0, 2.0, 2.5, 1.5, 20}), invalid_params);
}
