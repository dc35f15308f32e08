#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "ssw/numerics.hpp"
#include "ssw/specfun.hpp"

using namespace ssw;

TEST_SUITE_BEGIN("specfun");

static HypParams hp(cplx a, cplx b, cplx c, cplx z) {
    HypParams h;
    h.a = a;
    h.b = b;
    h.c = c;
    h.z = z;
    return h;
}

TEST_CASE("closed forms") {
    CHECK(std::abs(hyp2f1(hp(1.3, -0.7, 2.1, 0.0)) - 1.0) == 0.0); // empty tail
    CHECK(hyp2f1(hp(1, 1, 2, 0.5)).real() ==
          doctest::Approx(1.3862943611198906).epsilon(1e-13)); // -ln(1-z)/z
    CHECK(hyp2f1(hp(0.5, 0.5, 1.5, 0.25)).real() ==
          doctest::Approx(1.0471975511965976).epsilon(1e-13)); // arcsin(z)/z at z=1/2
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(hyp2f1(hp(1, 1, 0.0, 0.5)), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(hp(1, 1, -3.0, 0.5)), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(hp(1, 1, 2.0, 0.9)), std::domain_error); // outside radius
    HypParams slow = hp(4, 4, 0.35, 0.75);
    slow.max_terms = 10;
    CHECK_THROWS_AS(hyp2f1(slow), std::runtime_error);
}

TEST_CASE("matches brute-force oracle on random admissible inputs") {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const cplx a(rng.uniform(-5.0, 5.0), rng.uniform(-3.0, 3.0));
        const cplx b(rng.uniform(-5.0, 5.0), rng.uniform(-3.0, 3.0));
        cplx c(rng.uniform(-4.0, 5.0), rng.uniform(-1.0, 1.0));
        // keep c at distance >= 0.3 from the series poles
        if (std::abs(c.imag()) < 0.3 && c.real() < 0.5) {
            const double nearest = std::round(c.real());
            if (nearest <= 0 && std::abs(c.real() - nearest) < 0.3) c += cplx(0.0, 0.5);
        }
        const double r = rng.uniform(0.0, 0.75), th = rng.uniform(0.0, 2 * M_PI);
        const cplx z = std::polar(r, th);
        const HypResult got = hyp2f1_full(hp(a, b, c, z));
        const cplx want = oracle::hyp2f1_brute(a, b, c, z);
        REQUIRE(std::abs(got.value - want) <= 1e-12 * (1.0 + std::abs(want)));
        // derivative identity F' = (ab/c) F(a+1,b+1,c+1;z); the two sides run
        // different term recurrences, so agreement is limited by the ratio of
        // the largest intermediate term to the result (~1e6 at the worst draws)
        const cplx dwant = a * b / c * oracle::hyp2f1_brute(a + 1.0, b + 1.0, c + 1.0, z);
        REQUIRE(std::abs(got.dvalue - dwant) <= 5e-8 * (1.0 + std::abs(dwant)));
        REQUIRE(got.err < 1e-12);
        REQUIRE(got.terms <= 400);
    }
}

// centered FD second derivative from the analytic first derivative; step
// scales with rho so truncation error stays below the residual tolerance
template <class F>
static double d2_of(F&& dv, double rho) {
    const double h = 1e-5 * (1.0 + rho);
    return (dv(rho + h) - dv(rho - h)) / (2 * h);
}

TEST_CASE("left basis: reference values, ODE residual, Wronskian") {
    const Parameters P = derive_parameters(3, 7.0);
    const BasisEval b5 = eval_basis_left(P, 0.5);
    CHECK(b5.v1 == doctest::Approx(1.0448553557262186).epsilon(1e-13));
    CHECK(b5.v2 == doctest::Approx(-0.9162211012313437).epsilon(1e-13));

    // leading behavior rho^{1-d/2} * oscillation: envelope check near 0
    const BasisEval tiny = eval_basis_left(P, 1e-4);
    CHECK(std::abs(tiny.v1) < 1.1 * std::pow(1e-4, 1.0 - 0.5 * P.d) * 1.01);

    double wref = 0;
    for (double rho : {0.3, 0.5, 0.7, 0.85}) {
        const BasisEval b = eval_basis_left(P, rho);
        const double d2v1 = d2_of([&](double r) { return eval_basis_left(P, r).dv1; }, rho);
        const double d2v2 = d2_of([&](double r) { return eval_basis_left(P, r).dv2; }, rho);
        const double scale = std::abs(d2v1) + std::abs(b.dv1) + std::abs(b.v1);
        CHECK(std::abs(oracle::L_inf_residual(P, rho, b.v1, b.dv1, d2v1)) < 1e-8 * scale);
        CHECK(std::abs(oracle::L_inf_residual(P, rho, b.v2, b.dv2, d2v2)) < 1e-8 * scale);
        // W = psi1' psi2 - psi2' psi1 against rho^{1-d}|1-rho^2|^{s_c-3/2}
        const double W = b.dv1 * b.v2 - b.dv2 * b.v1;
        const double ref = std::pow(rho, 1.0 - P.d) * std::pow(std::abs(1 - rho * rho), P.s_c - 1.5);
        const double ratio = W / ref;
        if (wref == 0) wref = ratio;
        CHECK(ratio == doctest::Approx(wref).epsilon(1e-9));
    }
    CHECK(wref == doctest::Approx(-P.omega).epsilon(1e-10));
}

TEST_CASE("right basis: reference values, decay, ODE residual, Wronskian") {
    const Parameters P = derive_parameters(3, 7.0);
    const BasisEval b2 = eval_basis_right(P, 2.0);
    CHECK(b2.v1 == doctest::Approx(0.43446135645235542).epsilon(1e-13));
    CHECK(b2.v2 == doctest::Approx(0.94088805711114883).epsilon(1e-13));

    const BasisEval far = eval_basis_right(P, 1e4);
    CHECK(far.v1 * std::pow(1e4, P.alpha + 1.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(far.v2 * std::pow(1e4, P.alpha) == doctest::Approx(1.0).epsilon(1e-6));

    double wref = 0;
    for (double rho : {1.2, 1.5, 2.0, 5.0}) {
        const BasisEval b = eval_basis_right(P, rho);
        const double d2v1 = d2_of([&](double r) { return eval_basis_right(P, r).dv1; }, rho);
        const double d2v2 = d2_of([&](double r) { return eval_basis_right(P, r).dv2; }, rho);
        const double scale = std::abs(d2v1) + std::abs(b.dv1) + std::abs(b.v1);
        CHECK(std::abs(oracle::L_inf_residual(P, rho, b.v1, b.dv1, d2v1)) < 1e-8 * scale);
        CHECK(std::abs(oracle::L_inf_residual(P, rho, b.v2, b.dv2, d2v2)) < 1e-8 * scale);
        const double W = b.dv1 * b.v2 - b.dv2 * b.v1;
        const double ref = std::pow(rho, 1.0 - P.d) * std::pow(std::abs(1 - rho * rho), P.s_c - 1.5);
        const double ratio = W / ref;
        if (wref == 0) wref = ratio;
        CHECK(ratio == doctest::Approx(wref).epsilon(1e-9));
    }
    CHECK(wref == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("shifted-index exterior basis solves its ODE for all sectors") {
    const Parameters P = derive_parameters(3, 7.0);
    const double R = 10.0;
    for (int m : {0, 1, 2, 3}) {
        for (double rho : {1.3, 2.0, 3.0}) {
            const BasisEval b = eval_basis_linear(P, R, m, rho);
            const double d2v1 =
                d2_of([&](double r) { return eval_basis_linear(P, R, m, r).dv1; }, rho);
            const double d2v2 =
                d2_of([&](double r) { return eval_basis_linear(P, R, m, r).dv2; }, rho);
            const double s1 = std::abs(d2v1) + std::abs(b.dv1) + std::abs(b.v1);
            const double s2 = std::abs(d2v2) + std::abs(b.dv2) + std::abs(b.v2);
            CHECK(std::abs(oracle::L_shift_residual(P, R, m, rho, b.v1, b.dv1, d2v1)) <
                  1e-7 * s1);
            CHECK(std::abs(oracle::L_shift_residual(P, R, m, rho, b.v2, b.dv2, d2v2)) <
                  1e-7 * s2);
        }
        // Wronskian against rho^{1-d}|1-rho^2|^{s_c-R-3/2} is constant; checked
        // away from rho=1 where the two Wronskian products nearly cancel
        double wref = 0;
        for (double rho : {2.0, 2.5, 3.0, 4.0}) {
            const BasisEval b = eval_basis_linear(P, R, m, rho);
            const double W = b.dv1 * b.v2 - b.dv2 * b.v1;
            const double ref = std::pow(rho, 1.0 - P.d) *
                               std::pow(std::abs(1 - rho * rho), P.s_c - R - 1.5);
            const double ratio = W / ref;
            if (wref == 0) wref = ratio;
            CHECK(ratio == doctest::Approx(wref).epsilon(1e-10));
        }
    }
    // decay normalization at large rho
    const double K = P.alpha + R;
    const BasisEval far = eval_basis_linear(P, R, 1, 1e4);
    CHECK(far.v1 * std::pow(1e4, K + 1.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(far.v2 * std::pow(1e4, K) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_SUITE_END();
