// Gluing construction: eps(lambda) value matching at rho0, derivative-mismatch
// zeros located in phase-predicted brackets, glued profile assembly, zero
// counting of the scaling generator, and validation metrics.
#include "ssw/matching.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssw {
namespace {

double c1_coef(const Parameters& P, double r) {
    return (P.d - 1.0) / r - 2.0 * (1.0 + P.alpha) * r;
}

struct EvalCtx {
    const Parameters& P;
    const ExteriorBasis& B;
    const SolitonProfile& S;
    double rho0;
    MatchingOptions opt;
    double psi1v = 0, psi1d = 0; // basis slope data at the seam
    double uinf0 = 0, duinf0 = 0;
    double win_lo = 0, win_hi = 0; // evaluable lambda window

    EvalCtx(const Parameters& P_, const ExteriorBasis& B_, const SolitonProfile& S_, double rho0_,
            const MatchingOptions& o)
        : P(P_), B(B_), S(S_), rho0(rho0_), opt(o) {
        if (!(rho0 > 0.0) || rho0 >= 0.9)
            throw std::invalid_argument("matching: rho0 must lie in (0, 0.9)");
        const auto p1 = B.psi1_at(rho0);
        psi1v = p1.v;
        psi1d = p1.d;
        if (std::abs(psi1v) < 1e-3)
            throw std::invalid_argument(
                "matching: psi1(rho0) is near an oscillation node; pick a different rho0");
        uinf0 = u_inf(P, rho0);
        duinf0 = -P.alpha * uinf0 / rho0;
        win_lo = rho0 / S.Q.rho_max() * (1.0 + 1e-9);
        win_hi = rho0 * (1.0 - 1e-12);
    }

    struct EpsSolve {
        double eps = 0;
        double resid = 0; // I(eps, lambda) = target - eps (psi1 + w_eps)(rho0)
        int iters = 0;
        ExteriorSolution ext;
    };

    // Solve eps (psi1 + w_eps)(rho0) = target.  w_eps = O(eps), so the first
    // slope psi1 + 2 w(rho0) is already second-order accurate; secant after.
    EpsSolve solve_eps(double target) const {
        EpsSolve r;
        r.eps = target / psi1v;
        r.ext = solve_exterior(P, B, r.eps, rho0);
        double h = r.eps * (psi1v + r.ext.w(rho0));
        r.resid = target - h;
        r.iters = 1;
        double slope = psi1v + 2.0 * r.ext.w(rho0);
        while (std::abs(r.resid) > opt.value_tol) {
            if (r.iters >= opt.newton_max)
                throw std::runtime_error("matching: eps(lambda) solve did not reach tolerance");
            if (!(std::abs(slope) > 1e-6))
                throw std::runtime_error("matching: degenerate slope in the eps solve");
            const double e_prev = r.eps, h_prev = h;
            r.eps += r.resid / slope;
            r.ext = solve_exterior(P, B, r.eps, rho0);
            h = r.eps * (psi1v + r.ext.w(rho0));
            r.resid = target - h;
            ++r.iters;
            slope = (h - h_prev) / (r.eps - e_prev);
        }
        return r;
    }

    struct FullEval {
        InteriorSolution in;
        EpsSolve ep;
        MatchPoint pt;
    };

    FullEval eval(double lambda) const {
        FullEval f;
        f.in = solve_interior(P, S, lambda, rho0, opt.interior);
        f.ep = solve_eps(f.in.u_rho0 - uinf0);
        const double du_ext = duinf0 + f.ep.eps * (psi1d + f.ep.ext.w.d(rho0));
        f.pt.lambda = lambda;
        f.pt.eps = f.ep.eps;
        f.pt.value_mismatch = f.ep.resid;
        f.pt.deriv_mismatch = du_ext - f.in.du_rho0;
        f.pt.u_rho0 = f.in.u_rho0;
        f.pt.newton_iters = f.ep.iters;
        return f;
    }
};

struct Located {
    double mu = 0;
    EvalCtx::FullEval at_mu;
    int raw_k = 0;
};

Located locate_zero(const EvalCtx& cx, int k) {
    const double om = cx.P.omega;
    const double ph = cx.S.osc_Q.delta - cx.B.delta1;
    double a = std::max(std::exp((ph - (k + 0.5) * M_PI) / om), cx.win_lo);
    double b = std::min(std::exp((ph - (k - 0.5) * M_PI) / om), cx.win_hi);
    if (!(a < b))
        throw std::invalid_argument("matching: bracket for raw index " + std::to_string(k) +
                                    " lies outside the evaluable lambda window [" +
                                    std::to_string(cx.win_lo) + ", " + std::to_string(cx.win_hi) +
                                    "]");
    double fa = cx.eval(a).pt.deriv_mismatch;
    double fb = cx.eval(b).pt.deriv_mismatch;
    if (fa * fb > 0.0) {
        // phases carry O(rho0^2)-sized errors; open the bracket by a quarter
        // period on each side (inside the window) before giving up
        const double g = std::exp(0.5 * M_PI / om);
        const double a2 = std::max(a / g, cx.win_lo), b2 = std::min(b * g, cx.win_hi);
        const double fa2 = cx.eval(a2).pt.deriv_mismatch;
        const double fb2 = cx.eval(b2).pt.deriv_mismatch;
        if (fa2 * fb2 > 0.0)
            throw std::runtime_error(
                "matching: no sign change of the derivative mismatch in bracket [" +
                std::to_string(a2) + ", " + std::to_string(b2) + "] (I' = " + std::to_string(fa2) +
                ", " + std::to_string(fb2) + "); raw index " + std::to_string(k));
        a = a2;
        b = b2;
        fa = fa2;
        fb = fb2;
    }
    auto f = [&cx](double l) { return cx.eval(l).pt.deriv_mismatch; };
    auto tol = [rel = cx.opt.bracket_rel_width](double x, double y) {
        return std::abs(y - x) <= rel * std::min(std::abs(x), std::abs(y));
    };
    std::uintmax_t iters = 120;
    const auto res = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    Located L;
    L.mu = 0.5 * (res.first + res.second);
    L.at_mu = cx.eval(L.mu);
    L.raw_k = k;
    return L;
}

SelfSimilarProfile assemble(const EvalCtx& cx, const Located& L) {
    const Parameters& P = cx.P;
    const double mu = L.mu, eps = L.at_mu.pt.eps, rho0 = cx.rho0;
    const InteriorSolution& in = L.at_mu.in;
    const ExteriorSolution& ex = L.at_mu.ep.ext;
    const double la = std::pow(mu, -P.alpha);
    const double aa1 = P.alpha * (1.0 + P.alpha);

    // authoritative piecewise sampler; the u'' channel in the exterior region
    // is recovered from the equation itself away from the sonic collar (the
    // corrector's own curvature channel is finite-difference noise there)
    auto sample = [&](double r, double& u, double& du, double& d2) {
        if (r <= rho0 * (1.0 + 1e-15)) {
            const double y = r / mu, m2 = mu * mu;
            u = la * (cx.S.Q(y) + m2 * in.w(y));
            du = la / mu * (cx.S.Q.d(y) + m2 * in.w.d(y));
            d2 = la / m2 * (cx.S.Q.d2(y) + m2 * in.w.d2(y));
        } else {
            const auto p1 = cx.B.psi1_at(r);
            const double ui = u_inf(P, r);
            u = ui + eps * (p1.v + ex.w(r));
            du = -P.alpha * ui / r + eps * (p1.d + ex.w.d(r));
            if (std::abs(1.0 - r) > 1e-3)
                d2 = (-c1_coef(P, r) * du + aa1 * u - signed_pow(u, P.p)) / (1.0 - r * r);
            else
                d2 = aa1 * ui / (r * r) + eps * (cx.B.psi1.d2(r) + ex.w.d2(r));
        }
    };

    const double lo = mu * cx.opt.glue_rho_min_factor;
    const double hi = ex.w.rho_max();
    const int npts = static_cast<int>(std::ceil(std::log10(hi / lo) * cx.opt.glue_per_decade)) + 1;
    std::vector<double> grid = log_spaced(lo, hi, npts);
    // the seam must be a node so both one-sided limits are sampled exactly
    {
        auto it = std::lower_bound(grid.begin(), grid.end(), rho0);
        const double snap = 0.25 * rho0 * std::log(10.0) / cx.opt.glue_per_decade;
        if (it != grid.end() && std::abs(*it - rho0) < snap)
            *it = rho0;
        else if (it != grid.begin() && std::abs(*(it - 1) - rho0) < snap)
            *(it - 1) = rho0;
        else
            grid.insert(it, rho0);
    }

    std::vector<double> u(grid.size()), du(grid.size()), d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sample(grid[i], u[i], du[i], d2[i]);

    SelfSimilarProfile pr;
    pr.par = P;
    pr.mu = mu;
    pr.eps = eps;
    pr.rho0 = rho0;
    pr.u = RadialFunction(grid, u, du, d2);
    pr.value_mismatch = std::abs(L.at_mu.pt.value_mismatch);
    pr.deriv_mismatch = std::abs(L.at_mu.pt.deriv_mismatch);
    pr.newton_iters = L.at_mu.pt.newton_iters;
    pr.raw_bracket_index = L.raw_k;

    auto lam_at = [&](double r) {
        double uu, dd, dd2;
        sample(r, uu, dd, dd2);
        return P.alpha * uu + r * dd;
    };

    // zero structure from the stored nodes, refined through the sampler
    auto bisect_tol = [](double x, double y) { return std::abs(y - x) <= 1e-12 * std::abs(y); };
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double l0 = P.alpha * u[i - 1] + grid[i - 1] * du[i - 1];
        const double l1 = P.alpha * u[i] + grid[i] * du[i];
        if (l0 * l1 < 0.0) {
            std::uintmax_t it = 100;
            const auto z =
                boost::math::tools::toms748_solve(lam_at, grid[i - 1], grid[i], l0, l1, bisect_tol, it);
            pr.lamu_zeros.push_back(0.5 * (z.first + z.second));
        }
    }
    pr.n = static_cast<int>(pr.lamu_zeros.size());

    // the count must be stable against a doubled sampling density
    {
        const int n2 = 2 * npts;
        const auto g2 = log_spaced(lo, hi, n2);
        int c2 = 0;
        double prev = lam_at(g2[0]);
        for (int i = 1; i < n2; ++i) {
            const double cur = lam_at(g2[i]);
            if (prev * cur < 0.0) ++c2;
            prev = cur;
        }
        if (c2 != pr.n)
            throw std::runtime_error("matching: Lambda u zero count is not grid-stable (" +
                                     std::to_string(pr.n) + " vs " + std::to_string(c2) + ")");
    }

    for (double z : pr.lamu_zeros)
        if (z < rho0) pr.rho_0n = z;
    const double rho1 = rho0 / mu;
    for (double z : cx.S.lamQ_zeros)
        if (z < rho1) pr.rho_lamQ_n = z;

    // worst scaled equation residual by Richardson differences of the value
    // channel; the sonic collar is skipped (u'' is only Hoelder there)
    {
        const double step = std::log(10.0) / cx.opt.glue_per_decade;
        const double hrel = 5.0 * step;
        double worst = 0.0;
        const RadialFunction& rf = pr.u;
        for (double r : log_spaced(lo * 1.3, hi * 0.9, 120)) {
            if (std::abs(r - 1.0) < 0.05) continue;
            const double h = hrel * r;
            auto D2 = [&](double hh) { return (rf(r + hh) - 2.0 * rf(r) + rf(r - hh)) / (hh * hh); };
            auto D1 = [&](double hh) { return (rf(r + hh) - rf(r - hh)) / (2.0 * hh); };
            const double d2e = (4.0 * D2(h) - D2(2.0 * h)) / 3.0;
            const double d1e = (4.0 * D1(h) - D1(2.0 * h)) / 3.0;
            const double uv = rf(r);
            const double res =
                (1.0 - r * r) * d2e + c1_coef(P, r) * d1e - aa1 * uv + signed_pow(uv, P.p);
            const double scale = std::abs((1.0 - r * r) * d2e) + std::abs(c1_coef(P, r) * d1e) +
                                 std::abs(aa1 * uv) + std::pow(std::abs(uv), P.p) + 1e-30;
            worst = std::max(worst, std::abs(res) / scale);
        }
        pr.ode_residual = worst;
    }
    return pr;
}

} // namespace

double select_rho0(const ExteriorBasis& B, const std::vector<double>& candidates) {
    const Parameters& P = B.par;
    const OscillationFit env = extract_oscillation_phase_refined(
        [&B](double r) { return B.psi1_at(r).v; }, P, 0.01, 0.1);
    std::vector<double> cs = candidates;
    std::sort(cs.begin(), cs.end());
    for (double r0 : cs)
        if (std::abs(B.psi1_at(r0).v) * std::pow(r0, P.d / 2.0 - 1.0) >= 0.5 * env.A) return r0;
    throw std::runtime_error("select_rho0: no candidate fills half of the psi1 envelope");
}

double solve_epsilon_of_lambda(const Parameters& P, const ExteriorBasis& B,
                               const SolitonProfile& S, double lambda, double rho0,
                               const MatchingOptions& opt) {
    const EvalCtx cx(P, B, S, rho0, opt);
    const InteriorSolution in = solve_interior(P, S, lambda, rho0, opt.interior);
    return cx.solve_eps(in.u_rho0 - cx.uinf0).eps;
}

double matching_derivative(const Parameters& P, const ExteriorBasis& B, const SolitonProfile& S,
                           double lambda, double rho0, const MatchingOptions& opt) {
    return EvalCtx(P, B, S, rho0, opt).eval(lambda).pt.deriv_mismatch;
}

MatchPoint eval_matching(const Parameters& P, const ExteriorBasis& B, const SolitonProfile& S,
                         double lambda, double rho0, const MatchingOptions& opt) {
    return EvalCtx(P, B, S, rho0, opt).eval(lambda).pt;
}

MatchingScan scan_matching(const Parameters& P, const ExteriorBasis& B, const SolitonProfile& S,
                           double rho0, double lambda_lo, double lambda_hi, int n_points,
                           const MatchingOptions& opt) {
    const EvalCtx cx(P, B, S, rho0, opt);
    if (!(lambda_lo < lambda_hi) || lambda_lo < cx.win_lo * 0.999 ||
        lambda_hi > cx.win_hi * 1.001)
        throw std::invalid_argument("scan_matching: lambda range outside the evaluable window");
    if (n_points < 2) throw std::invalid_argument("scan_matching: need at least two points");
    MatchingScan sc;
    sc.par = P;
    sc.rho0 = rho0;
    sc.delta1 = B.delta1;
    sc.delta2 = S.osc_Q.delta;
    for (double l : log_spaced(lambda_lo, lambda_hi, n_points)) sc.points.push_back(cx.eval(l).pt);
    // brackets whose predicted centers exp((ph - k pi)/om) fall in the range,
    // clipped to it
    const double ph = sc.delta2 - sc.delta1, om = P.omega;
    const int kmin = static_cast<int>(std::ceil((ph - om * std::log(lambda_hi)) / M_PI - 1e-12));
    const int kmax = static_cast<int>(std::floor((ph - om * std::log(lambda_lo)) / M_PI + 1e-12));
    for (int k = kmin; k <= kmax; ++k) {
        sc.raw_index.push_back(k);
        sc.bracket_lo.push_back(std::max(std::exp((ph - (k + 0.5) * M_PI) / om), lambda_lo));
        sc.bracket_hi.push_back(std::min(std::exp((ph - (k - 0.5) * M_PI) / om), lambda_hi));
    }
    return sc;
}

SelfSimilarProfile find_mu_n(const Parameters& P, const ExteriorBasis& B, const SolitonProfile& S,
                             int n, double rho0, const MatchingOptions& opt) {
    if (n < 1) throw std::invalid_argument("find_mu_n: n >= 1 required");
    const EvalCtx cx(P, B, S, rho0, opt);
    if (opt.index_shift != INT_MIN) {
        SelfSimilarProfile pr = assemble(cx, locate_zero(cx, n - opt.index_shift));
        pr.index_shift = opt.index_shift;
        if (pr.n != n)
            throw std::runtime_error("find_mu_n: zero count " + std::to_string(pr.n) +
                                     " does not match the requested index with the supplied shift");
        return pr;
    }
    // calibration pass: a raw-index step changes the count by exactly one
    SelfSimilarProfile p0 = assemble(cx, locate_zero(cx, n));
    p0.index_shift = p0.n - p0.raw_bracket_index;
    if (p0.n == n) return p0;
    const int k = n - p0.index_shift;
    SelfSimilarProfile p1 = assemble(cx, locate_zero(cx, k));
    p1.index_shift = p1.n - k;
    if (p1.n != n)
        throw std::runtime_error("find_mu_n: zero-count calibration failed (counts " +
                                 std::to_string(p0.n) + " at raw " + std::to_string(n) + ", " +
                                 std::to_string(p1.n) + " at raw " + std::to_string(k) + ")");
    return p1;
}

ProfileReport validate_profile(const SelfSimilarProfile& pr, const Parameters& P,
                               const SolitonProfile& S) {
    ProfileReport rep;
    const double lo = pr.u.grid().front(), hi = pr.u.grid().back();
    for (double r : log_spaced(pr.rho0, hi, 1500)) {
        const double v = (1.0 + std::pow(r, P.alpha)) * std::abs(pr.u(r) - u_inf(P, r));
        rep.sup_exterior = std::max(rep.sup_exterior, v);
    }
    const double la = std::pow(pr.mu, -P.alpha);
    for (double r : log_spaced(lo, pr.rho0, 1500)) {
        const double v = std::abs(pr.u(r) - la * S.Q(r / pr.mu));
        rep.sup_interior = std::max(rep.sup_interior, v);
    }
    rep.last_zero_ratio = pr.rho_0n / (pr.mu * pr.rho_lamQ_n) - 1.0;
    rep.last_zero_bracket_ok =
        pr.rho_0n > std::exp(-2.0 * M_PI / P.omega) * pr.rho0 && pr.rho_0n < pr.rho0;

    auto slope = [&](auto f) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (double r : log_spaced(30.0, 0.6 * hi, 40)) {
            const double v = std::abs(f(r));
            if (!(v > 0)) continue;
            const double x = std::log(r), y = std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    rep.tail_exponent[0] = slope([&](double r) { return pr.u(r); });
    rep.tail_exponent[1] = slope([&](double r) { return pr.u.d(r); });
    rep.tail_exponent[2] = slope([&](double r) { return pr.u.d2(r); });
    rep.tail_exponent[3] = slope([&](double r) {
        const double h = 0.02 * r;
        return (pr.u.d2(r + h) - pr.u.d2(r - h)) / (2.0 * h);
    });
    return rep;
}

} // namespace ssw
