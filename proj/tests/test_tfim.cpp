#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lrcrit/tfim.hpp"

using namespace lrcrit;

TEST_CASE("critical mode energies at N = 4") {
    const auto modes = tfim_modes(tfim_params{1.0, 1.0, 4, 1.0});
    REQUIRE(modes.size() == 2);
    REQUIRE(modes[0].epsilon == Catch::Approx(1.530733729460359).epsilon(1e-14));
    REQUIRE(modes[1].epsilon == Catch::Approx(3.695518130045147).epsilon(1e-14));
}

TEST_CASE("momentum grid avoids k = 0 and keeps h_x > 0") {
    for (double g : {0.3, 1.0, 2.5}) {
        const auto modes = tfim_modes(tfim_params{1.0, g, 40, 1.0});
        REQUIRE(modes.size() == 20);
        for (std::size_t n = 0; n < modes.size(); ++n) {
            REQUIRE(modes[n].k ==
                    Catch::Approx((2.0 * (n + 1) - 1.0) * pi / 40.0).epsilon(1e-15));
            REQUIRE(modes[n].h_x > 0.0);
            REQUIRE(modes[n].epsilon > 0.0);
            REQUIRE(modes[n].theta > -pi / 2.0);
            REQUIRE(modes[n].theta <= 0.0);
        }
    }
}

TEST_CASE("gap equals twice the lowest mode energy") {
    for (double g : {0.5, 1.0, 1.7})
        for (int N : {4, 10, 38}) {
            const tfim_params p{1.3, g, N, 1.0};
            REQUIRE(tfim_gap(p) ==
                    Catch::Approx(2.0 * tfim_modes(p)[0].epsilon).epsilon(1e-14));
        }
}

TEST_CASE("critical gap closed form") {
    REQUIRE(tfim_gap(tfim_params{1.0, 1.0, 4, 1.0}) == Catch::Approx(3.061467).margin(1e-6));
    for (int N : {4, 8, 16, 40, 64}) {
        const tfim_params p{1.0, 1.0, N, 1.0};
        REQUIRE(tfim_gap(p) == Catch::Approx(8.0 * std::sin(pi / (2.0 * N))).epsilon(1e-14));
    }
    REQUIRE(tfim_gap(tfim_params{2.0, 1.0, 8, 1.0}) ==
            Catch::Approx(16.0 * std::sin(pi / 16.0)).epsilon(1e-14));
}

TEST_CASE("flat band at g = 0") {
    REQUIRE(tfim_gap(tfim_params{1.0, 0.0, 8, 1.0}) == Catch::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("critical gap approaches 4 pi J / N") {
    for (int N : {4, 8, 16, 64, 256}) {
        const double gap = tfim_gap(tfim_params{1.0, 1.0, N, 1.0});
        REQUIRE(std::abs(N * gap / (4.0 * pi) - 1.0) < 10.0 / (N * N));
    }
}

TEST_CASE("energies do not depend on the lattice spacing") {
    const auto a = tfim_modes(tfim_params{1.0, 0.8, 12, 1.0});
    const auto b = tfim_modes(tfim_params{1.0, 0.8, 12, 0.37});
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].epsilon == b[i].epsilon);
        REQUIRE(a[i].theta == b[i].theta);
    }
}

TEST_CASE("parity-sector gap") {
    SECTION("frozen values at the critical point") {
        const double expected[] = {0.397824734759, 0.263304995175, 0.196982806714,
                                   0.157403413649, 0.131086925630};
        int i = 0;
        for (int N : {4, 6, 8, 10, 12})
            REQUIRE(tfim_sector_gap(tfim_params{1.0, 1.0, N, 1.0}) ==
                    Catch::Approx(expected[i++]).margin(1e-9));
    }
    SECTION("at g = 1 the two ground-state sums telescope to 2J tan(pi/4N)") {
        for (int N : {4, 8, 12, 20, 40})
            REQUIRE(tfim_sector_gap(tfim_params{1.0, 1.0, N, 1.0}) ==
                    Catch::Approx(2.0 * std::tan(pi / (4.0 * N))).epsilon(1e-12));
        REQUIRE(tfim_sector_gap(tfim_params{2.5, 1.0, 8, 1.0}) ==
                Catch::Approx(5.0 * std::tan(pi / 32.0)).epsilon(1e-12));
    }
    SECTION("large-N critical behavior pi/(2N)") {
        const double gap = tfim_sector_gap(tfim_params{1.0, 1.0, 1000, 1.0});
        REQUIRE(gap == Catch::Approx(pi / 2000.0).epsilon(1e-2));
    }
    SECTION("stays open away from the critical point") {
        const double g100 = tfim_sector_gap(tfim_params{1.0, 2.0, 100, 1.0});
        const double g200 = tfim_sector_gap(tfim_params{1.0, 2.0, 200, 1.0});
        REQUIRE(g100 == Catch::Approx(2.0).margin(1e-6));
        REQUIRE(g200 == Catch::Approx(2.0).margin(1e-9));
        REQUIRE(g100 / g200 == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("parameter validation names the offending key") {
    REQUIRE_THROWS_AS(tfim_modes(tfim_params{0.0, 1.0, 8, 1.0}), invalid_params);
    REQUIRE_THROWS_AS(tfim_modes(tfim_params{1.0, -0.1, 8, 1.0}), invalid_params);
    REQUIRE_THROWS_AS(tfim_modes(tfim_params{1.0, 1.0, 7, 1.0}), invalid_params);
    REQUIRE_THROWS_AS(tfim_modes(tfim_params{1.0, 1.0, 2, 1.0}), invalid_params);
    REQUIRE_THROWS_AS(tfim_modes(tfim_params{1.0, 1.0, 8, 0.0}), invalid_params);
    REQUIRE_THROWS_WITH(tfim_modes(tfim_params{1.0, 1.0, 7, 1.0}),
                        Catch::Matchers::ContainsSubstring("model.N"));
}

TEST_CASE("rotated-frame coefficient vectors keep their length") {
    const tfim_params p{1.0, 1.3, 16, 1.0};
    for (const auto& m : tfim_modes(p)) {
        const auto [cx, cz] = tfim_quench_coeffs(p, 0.02, m);
        REQUIRE(std::hypot(cx, cz) == Catch::Approx(2.0 * 0.02).epsilon(1e-13));
        const auto bx = mx_coeffs(m);
        REQUIRE(std::hypot(bx[0], bx[2]) == Catch::Approx(1.0).epsilon(1e-13));
        REQUIRE(bx[1] == 0.0);
        const auto bz = mzz_coeffs(m);
        REQUIRE(std::hypot(bz[0], bz[2]) == Catch::Approx(1.0).epsilon(1e-13));
    }
}
