#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ssw/odeint.hpp"
#include "ssw/params.hpp"
#include "ssw/specfun.hpp"

using namespace ssw;

TEST_SUITE_BEGIN("odeint");

TEST_CASE("sine equation: accuracy, dense output, reversibility") {
    const Ode2 f = [](double, double u, double) { return -u; };
    const Trajectory fwd = integrate_adaptive(f, 0.0, M_PI, 0.0, 1.0);
    CHECK(std::abs(fwd.u_end()) < 1e-9);
    CHECK(fwd.du_end() == doctest::Approx(-1.0).epsilon(1e-9));
    for (double t : {0.1, 0.7, M_PI / 2, 2.9}) {
        CHECK(fwd.u(t) == doctest::Approx(std::sin(t)).epsilon(1e-9));
        CHECK(fwd.du(t) == doctest::Approx(std::cos(t)).epsilon(1e-9));
    }
    const Trajectory bwd = integrate_adaptive(f, M_PI, 0.0, fwd.u_end(), fwd.du_end());
    CHECK(std::abs(bwd.u_end() - 0.0) < 1e-9);
    CHECK(bwd.du_end() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bwd.u(1.3) == doctest::Approx(std::sin(1.3)).epsilon(1e-8));
}

TEST_CASE("re-integrating a hypergeometric basis member reproduces the series") {
    const Parameters P = derive_parameters(3, 7.0);
    const Ode2 f = [&](double rho, double u, double du) {
        return ((2.0 * (1.0 + P.alpha) * rho - (P.d - 1.0) / rho) * du +
                P.alpha * (1.0 + P.alpha) * u - P.pot_coeff / (rho * rho) * u) /
               (1.0 - rho * rho);
    };
    const BasisEval b2 = eval_basis_right(P, 2.0);
    OdeOptions opt;
    opt.rtol = 1e-12;
    const Trajectory tr = integrate_adaptive(f, 2.0, 5.0, b2.v1, b2.dv1, opt);
    for (double rho : {3.0, 4.0, 5.0}) {
        const BasisEval want = eval_basis_right(P, rho);
        CHECK(tr.u(rho) == doctest::Approx(want.v1).epsilon(1e-9));
        CHECK(tr.du(rho) == doctest::Approx(want.dv1).epsilon(1e-9));
    }
}

// local series of the frozen exterior operator at the sonic point, t = 1 - rho
static LocalODE sonic_local(const Parameters& P, int order) {
    LocalODE ode;
    ode.P = {0.0, 2.0, -1.0};
    ode.S.assign(order + 1, -(P.d - 1.0));
    ode.S[0] = 2.0 * (1.0 + P.alpha) - (P.d - 1.0);
    ode.S[1] += -2.0 * (1.0 + P.alpha);
    ode.R.assign(order + 1, 0.0);
    for (int k = 0; k <= order; ++k) ode.R[k] = P.pot_coeff * (k + 1.0);
    ode.R[0] += -P.alpha * (1.0 + P.alpha);
    return ode;
}

TEST_CASE("sonic-point series: exponents and forced slope") {
    const Parameters P = derive_parameters(3, 7.0);
    const LocalODE ode = sonic_local(P, 20);
    CHECK(singular_lead(ode) == 1);
    const auto roots = indicial_roots(ode);
    CHECK(roots[0] == doctest::Approx(0.0));
    CHECK(roots[1] == doctest::Approx(P.s_c - 0.5).epsilon(1e-13));
    // first-order system (u,u') eigenvalues: {0, s_c - 3/2}
    CHECK(roots[1] - 1.0 == doctest::Approx(P.s_c - 1.5).epsilon(1e-12));

    const FrobeniusBranch br = frobenius_branch(ode, 0.0, 1.0, 12);
    // u_t = -u_rho, so the forced slope in rho is -a1; for (3,7) it is 5/3
    CHECK(-br.a[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-13));
    CHECK(-br.a[1] ==
          doctest::Approx((P.alpha * (1 + P.alpha) - P.pot_coeff) / (2 * P.s_c - 3.0))
              .epsilon(1e-13));
}

TEST_CASE("continuation from the sonic point and seed-order convergence") {
    const Parameters P = derive_parameters(3, 7.0);
    const Ode2 f = [&](double rho, double u, double du) {
        return ((2.0 * (1.0 + P.alpha) * rho - (P.d - 1.0) / rho) * du +
                P.alpha * (1.0 + P.alpha) * u - P.pot_coeff / (rho * rho) * u) /
               (1.0 - rho * rho);
    };
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;

    SingularSeed ref;
    ref.x_s = 1.0;
    ref.dir = -1;
    ref.local = sonic_local(P, 24);
    ref.sigma = 0.0;
    ref.a0 = 1.0;
    ref.order = 16;
    ref.h_seed = 1e-2;
    const double u_ref = integrate_regular_singular(ref, f, 0.9, opt).u_end();

    // truncation order n: halving h_seed shrinks the error at the measured
    // rate ~ n (the seed's derivative error enters at h^n)
    SingularSeed s = ref;
    s.order = 4;
    double err_prev = 0;
    double rate_min = 100, rate_max = 0;
    for (double h : {0.08, 0.04, 0.02}) {
        s.h_seed = h;
        const double u = integrate_regular_singular(s, f, 0.9, opt).u_end();
        const double err = std::abs(u - u_ref);
        if (err_prev > 0) {
            const double rate = std::log2(err_prev / err);
            rate_min = std::min(rate_min, rate);
            rate_max = std::max(rate_max, rate);
        }
        err_prev = err;
    }
    CHECK(rate_min > 3.0);
    CHECK(rate_max < 7.5);
}

TEST_CASE("wronskian of two continuations follows the singular weight") {
    const Parameters P = derive_parameters(3, 7.0);
    const Ode2 f = [&](double rho, double u, double du) {
        return ((2.0 * (1.0 + P.alpha) * rho - (P.d - 1.0) / rho) * du +
                P.alpha * (1.0 + P.alpha) * u - P.pot_coeff / (rho * rho) * u) /
               (1.0 - rho * rho);
    };
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    const Trajectory ua = integrate_adaptive(f, 0.5, 0.3, 1.0, 0.0, opt);
    const Trajectory ub = integrate_adaptive(f, 0.5, 0.3, 0.0, 1.0, opt);
    double cref = 0;
    for (double rho : {0.31, 0.38, 0.45, 0.5}) {
        const double W = ua.du(rho) * ub.u(rho) - ub.du(rho) * ua.u(rho);
        const double ref = std::pow(rho, 1.0 - P.d) * std::pow(1.0 - rho * rho, P.s_c - 1.5);
        const double ratio = W / ref;
        if (cref == 0) cref = ratio;
        CHECK(ratio == doctest::Approx(cref).epsilon(1e-8));
    }
}

TEST_CASE("trivial singular seed: constant solution") {
    // x u'' + u' = 0 with analytic branch a0 = 1 stays identically 1
    LocalODE ode;
    ode.P = {0.0, 1.0};
    ode.S = {1.0};
    SingularSeed seed;
    seed.x_s = 0.0;
    seed.dir = +1;
    seed.local = ode;
    seed.a0 = 1.0;
    const Ode2 f = [](double x, double, double du) { return -du / x; };
    const Trajectory tr = integrate_regular_singular(seed, f, 1.0);
    CHECK(tr.u_end() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(tr.du_end()) < 1e-12);
}

TEST_CASE("resonance detection") {
    LocalODE ode;
    ode.P = {0.0, 1.0};
    ode.S = {-3.0};       // exponents {0, 4}
    ode.R = {0.5, 0.25};  // nonzero recurrence input
    const auto roots = indicial_roots(ode);
    CHECK(roots[1] == doctest::Approx(4.0));
    CHECK_THROWS_WITH_AS(frobenius_branch(ode, 0.0, 1.0, 8),
                         doctest::Contains("resonance"), std::runtime_error);
    CHECK_NOTHROW(frobenius_branch(ode, 0.0, 1.0, 3)); // truncated before the clash
    CHECK_NOTHROW(frobenius_branch(ode, 4.0, 1.0, 8)); // larger root is safe
}

TEST_CASE("reflection flips odd coefficients") {
    LocalODE ode;
    ode.P = {0.0, 2.0, -1.0};
    ode.S = {1.0, 3.0};
    ode.R = {4.0, 5.0};
    const LocalODE r = reflect(ode);
    CHECK(r.P[1] == -2.0);
    CHECK(r.P[2] == -1.0);
    CHECK(r.S[0] == -1.0);
    CHECK(r.S[1] == 3.0);
    CHECK(r.R[0] == 4.0);
    CHECK(r.R[1] == -5.0);
}

TEST_CASE("stable sign-change counting") {
    const auto f = [](double x) { return std::sin(10.0 * M_PI / x); };
    CHECK(stable_sign_change_count(f, 0.11, 0.99, 64) == 80);
    const SignCount sc = count_sign_changes_flagged({0.0, 1.0, -1.0}, 1e-12);
    CHECK(sc.changes == 1);
    CHECK(sc.boundary_plateau);
}

TEST_SUITE_END();
