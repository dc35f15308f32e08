#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ssw/numerics.hpp"
#include "ssw/params.hpp"

using namespace ssw;

TEST_SUITE_BEGIN("params");

TEST_CASE("reference values for (3,7)") {
    const Parameters P = derive_parameters(3, 7.0);
    CHECK(P.alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(P.s_c == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
    CHECK(P.b_inf == doctest::Approx(0.77827171622601054).epsilon(1e-14));
    CHECK(P.omega == doctest::Approx(1.1426091000668407).epsilon(1e-14));
    CHECK(P.omega == doctest::Approx(std::sqrt(47.0) / 6.0).epsilon(1e-15));
    CHECK(P.pot_coeff == doctest::Approx(14.0 / 9.0).epsilon(1e-14));
    CHECK(P.admissible_regime);
    CHECK(P.radial_stability);
    CHECK(P.nonradial_stability);
    CHECK(std::isinf(P.p_JL));
}

TEST_CASE("high-dimension threshold exponent") {
    const Parameters P = derive_parameters(11, 6.0);
    CHECK(P.p_JL == doctest::Approx(6.9220245868163372).epsilon(1e-13));
    CHECK(P.p < P.p_JL);
    CHECK(std::isfinite(P.omega)); // omega real below the threshold
    CHECK(P.omega > 0);
}

TEST_CASE("boundary case (3,5) is not admissible") {
    const Parameters P = derive_parameters(3, 5.0);
    CHECK(P.s_c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(P.admissible_regime);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(derive_parameters(2, 7.0), std::invalid_argument);
    CHECK_THROWS_AS(derive_parameters(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(derive_parameters(3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(derive_parameters(3, std::nan("")), std::invalid_argument);
}

TEST_CASE("defining identities") {
    for (auto [d, p] : {std::pair{3, 7.0}, {3, 9.0}, {4, 4.5}, {5, 3.4}, {11, 6.0}}) {
        const Parameters P = derive_parameters(d, p);
        CHECK(std::abs(P.alpha * (p - 1.0) - 2.0) < 1e-14);
        CHECK(std::abs(P.omega * P.omega + 0.25 * (d - 2.0) * (d - 2.0) - P.pot_coeff) < 1e-13);
        // closed-form b_inf satisfies the coefficient equation exactly
        CHECK(std::abs(std::pow(P.b_inf, p - 1.0) - P.alpha * (d - 2.0 - P.alpha)) < 1e-14);
    }
}

TEST_CASE("idempotence and flag monotonicity over random inputs") {
    Rng rng(12345);
    for (int i = 0; i < 1000000; ++i) {
        const int d = 3 + static_cast<int>(rng.uniform(0.0, 10.0));
        const double hi = (d == 3) ? 60.0 : 1.0 + 4.0 / (d - 3.0) + 1.0;
        const double p = rng.uniform(1.0 + 1e-3, hi);
        Parameters P;
        try {
            P = derive_parameters(d, p);
        } catch (const std::invalid_argument&) {
            continue; // alpha*(d-2-alpha) <= 0 for p very close to 1
        }
        const Parameters P2 = derive_parameters(P.d, P.p);
        REQUIRE(P2.alpha == P.alpha);
        REQUIRE(P2.s_c == P.s_c);
        REQUIRE(P2.b_inf == P.b_inf);
        REQUIRE(P2.admissible_regime == P.admissible_regime);
    }
    // admissibility is an interval in p for each d: flag pattern false* true* false*
    for (int d = 3; d <= 12; ++d) {
        int phase = 0; // 0 = leading false, 1 = true run, 2 = trailing false
        for (double p = 1.05; p < 80.0; p += 0.01) {
            bool adm = false;
            try {
                adm = derive_parameters(d, p).admissible_regime;
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (phase == 0 && adm) phase = 1;
            else if (phase == 1 && !adm) phase = 2;
            REQUIRE((phase == 2 ? !adm : true));
        }
    }
}

TEST_CASE("sector eigenvalue and helpers") {
    CHECK(lambda_sector(0, 3) == 0.0);
    CHECK(lambda_sector(1, 3) == 2.0);
    CHECK(lambda_sector(2, 3) == 6.0);
    CHECK(lambda_sector(1, 5) == 4.0);
    CHECK_THROWS_AS(lambda_sector(-1, 3), std::invalid_argument);
    CHECK(signed_pow(-2.0, 3.0) == doctest::Approx(-8.0));
    CHECK(signed_pow(2.0, 3.0) == doctest::Approx(8.0));
    CHECK(signed_pow(0.0, 0.5) == 0.0);
    CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
}

TEST_SUITE_END();
