#include "ssw/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ssw/odeint.hpp"
#include "ssw/soliton.hpp"
#include "ssw/specfun.hpp"

namespace ssw {

namespace {

// profile linearization at u_inf:  P u'' + S u' + R u  with
// P = 1-rho^2, S = (d-1)/rho - 2(1+alpha) rho, R = -alpha(1+alpha) + pot/rho^2
double coef_P(double rho) { return (1.0 - rho) * (1.0 + rho); }
double coef_S(const Parameters& P, double rho) {
    return (P.d - 1) / rho - 2.0 * (1.0 + P.alpha) * rho;
}
double coef_R(const Parameters& P, double rho) {
    return -P.alpha * (1.0 + P.alpha) + P.pot_coeff / (rho * rho);
}

// local series of the same operator about the sonic point in t = 1 - rho
LocalODE sonic_local_left(const Parameters& P, int order) {
    LocalODE ode;
    const int n = order + 2;
    ode.P.assign(n, 0.0);
    ode.S.assign(n, 0.0);
    ode.R.assign(n, 0.0);
    ode.P[1] = 2.0;
    if (n > 2) ode.P[2] = -1.0;
    // S(t) = -(d-1)/(1-t) + 2(1+alpha)(1-t)   (sign flip from d/drho = -d/dt)
    for (int k = 0; k < n; ++k) ode.S[k] = -(P.d - 1.0);
    ode.S[0] += 2.0 * (1.0 + P.alpha);
    ode.S[1] -= 2.0 * (1.0 + P.alpha);
    // R(t) = -alpha(1+alpha) + pot (1-t)^{-2}
    for (int k = 0; k < n; ++k) ode.R[k] = P.pot_coeff * (k + 1.0);
    ode.R[0] -= P.alpha * (1.0 + P.alpha);
    return ode;
}

double wronskian_weight_of(const Parameters& P, double rho) {
    const double d1 = std::abs(1.0 - rho);
    return std::pow(rho, 1.0 - P.d) * std::pow(d1 * (1.0 + rho), P.s_c - 1.5);
}

// 1/((1-r^2) W) with the |1-r| distance supplied exactly by the mesh
double resolvent_kernel(const Parameters& P, double r, double d1) {
    const double sgn = (r < 1.0) ? 1.0 : -1.0;
    return sgn * std::pow(r, P.d - 1.0) * std::pow(d1 * (1.0 + r), 0.5 - P.s_c);
}

} // namespace

namespace detail {

struct ExtBasisRep {
    Parameters par;
    ExteriorOptions opt;
    double kap = 0; // singular Frobenius exponent s_c - 1/2

    FrobeniusBranch serA_L, serA_R; // analytic branch of psi1, t = 1-rho / rho-1
    FrobeniusBranch serS_L, serS_R; // singular branch t^kap (1 + ...)
    Trajectory psi1_left, psi1_right;
    Trajectory psi2_left, psi2_right; // continuation of the hyp members toward 1
    double c1 = 0, c2 = 0;
    double aL = 0, bL = 0, aR = 0, bR = 0;
    double muL = 0, muR = 0; // analytic-branch component of psi2 in the collar
    double nuL = 0, nuR = 0; // singular-branch component (exact, from Abel's identity)

    ExteriorBasis::Point psi1_at(double rho) const {
        if (std::abs(rho - 1.0) <= opt.seed_h) {
            if (rho == 1.0) return {serA_L.a[0], -serA_L.a[1]};
            if (rho < 1.0) {
                const double t = 1.0 - rho;
                return {serA_L.u(t), -serA_L.du(t)};
            }
            const double t = rho - 1.0;
            return {serA_R.u(t), serA_R.du(t)};
        }
        const Trajectory& tr = (rho < 1.0) ? psi1_left : psi1_right;
        return {tr.u(rho), tr.du(rho)};
    }

    ExteriorBasis::Point psi2_at(double rho) const {
        if (rho < 1.0) {
            if (rho <= opt.hyp_left) {
                const BasisEval be = eval_basis_left(par, rho);
                return {c1 * be.v1, c1 * be.dv1};
            }
            const double t = 1.0 - rho;
            if (t <= opt.collar) {
                return {muL * serA_L.u(t) + nuL * serS_L.u(t),
                        -(muL * serA_L.du(t) + nuL * serS_L.du(t))};
            }
            return {psi2_left.u(rho), psi2_left.du(rho)};
        }
        if (rho >= opt.hyp_right) {
            const BasisEval be = eval_basis_right(par, rho);
            return {c2 * be.v1, c2 * be.dv1};
        }
        const double t = rho - 1.0;
        if (t <= opt.collar) {
            return {muR * serA_R.u(t) + nuR * serS_R.u(t),
                    muR * serA_R.du(t) + nuR * serS_R.du(t)};
        }
        return {psi2_right.u(rho), psi2_right.du(rho)};
    }

    // second derivatives for the sampled views
    double psi1_d2(double rho) const {
        if (std::abs(rho - 1.0) <= opt.seed_h)
            return (rho <= 1.0) ? serA_L.d2u(1.0 - rho) : serA_R.d2u(rho - 1.0);
        const auto pt = psi1_at(rho);
        return (-coef_S(par, rho) * pt.d - coef_R(par, rho) * pt.v) / coef_P(rho);
    }
    double psi2_d2(double rho) const {
        const double t = std::abs(rho - 1.0);
        if (t <= opt.collar) {
            if (rho <= 1.0) return muL * serA_L.d2u(t) + nuL * serS_L.d2u(t);
            return muR * serA_R.d2u(t) + nuR * serS_R.d2u(t);
        }
        const auto pt = psi2_at(rho);
        return (-coef_S(par, rho) * pt.d - coef_R(par, rho) * pt.v) / coef_P(rho);
    }
};

} // namespace detail

ExteriorBasis::Point ExteriorBasis::psi1_at(double rho) const { return rep->psi1_at(rho); }
ExteriorBasis::Point ExteriorBasis::psi2_at(double rho) const { return rep->psi2_at(rho); }
double ExteriorBasis::lam_psi1(double rho) const {
    const Point p = rep->psi1_at(rho);
    return par.alpha * p.v + rho * p.d;
}
double ExteriorBasis::lam_psi2(double rho) const {
    const Point p = rep->psi2_at(rho);
    return par.alpha * p.v + rho * p.d;
}
double ExteriorBasis::wronskian_weight(double rho) const {
    return wronskian_weight_of(par, rho);
}

namespace {

// normalized Wronskian (f' g - g' f) / weight of two evaluators
template <class F, class G>
double wnorm(const Parameters& P, F&& f, G&& g, double rho) {
    const auto pf = f(rho);
    const auto pg = g(rho);
    return (pf.d * pg.v - pg.d * pf.v) / wronskian_weight_of(P, rho);
}

// probe-averaged connection constant with a consistency guard
double averaged(const std::vector<double>& vals, const char* what) {
    double lo = vals[0], hi = vals[0], s = 0;
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        s += v;
    }
    const double mean = s / vals.size();
    if (hi - lo > 1e-7 * std::max(1.0, std::abs(mean)))
        throw std::runtime_error(std::string("exterior basis: ") + what +
                                 " is not constant across probe points");
    return mean;
}

std::vector<double> view_grid(double rho_min, double rho_max, double t_in, double t_min) {
    std::vector<double> g;
    const double rl = std::log(1.003);
    // outer left: log-spaced up to 1 - t_in
    {
        const double a = std::log(rho_min), b = std::log(1.0 - t_in);
        const int n = std::max(2, (int)std::ceil((b - a) / rl));
        for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / n));
    }
    // sonic collar: geometric |1-rho| from t_in down to t_min and mirrored
    // (the singular |1-rho|^{s_c-1/2} branch needs clustering toward 1 well
    // beyond the series collar to keep the d2 channel interpolable)
    {
        const double rk = std::log(1.012);
        const int n = std::max(2, (int)std::ceil(std::log(t_in / t_min) / rk));
        for (int i = 0; i <= n; ++i) g.push_back(1.0 - t_in * std::exp(-std::log(t_in / t_min) * i / n));
        for (int i = n; i >= 0; --i) g.push_back(1.0 + t_in * std::exp(-std::log(t_in / t_min) * i / n));
    }
    // outer right
    {
        const double a = std::log(1.0 + t_in), b = std::log(rho_max);
        const int n = std::max(2, (int)std::ceil((b - a) / rl));
        for (int i = 1; i <= n; ++i) g.push_back(std::exp(a + (b - a) * i / n));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double x, double y) { return y - x < 1e-15 * std::max(1.0, x); }),
            g.end());
    return g;
}

RadialFunction sample_view(const std::vector<double>& grid,
                           const std::function<ExteriorBasis::Point(double)>& at,
                           const std::function<double(double)>& d2) {
    std::vector<double> u(grid.size()), du(grid.size()), d2u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = at(grid[i]);
        u[i] = p.v;
        du[i] = p.d;
        d2u[i] = d2(grid[i]);
    }
    return RadialFunction(grid, u, du, d2u);
}

} // namespace

ExteriorBasis build_exterior_basis(const Parameters& P, const ExteriorOptions& opt) {
    if (!(opt.rho_min > 0) || !(opt.rho_min < 0.5) || !(opt.rho_max > 2.0))
        throw std::invalid_argument("build_exterior_basis: domain must bracket the sonic point");
    auto rep = std::make_shared<detail::ExtBasisRep>();
    rep->par = P;
    rep->opt = opt;
    rep->kap = P.s_c - 0.5;

    // sonic series: analytic branch normalized to psi1(1)=1 (slope forced by
    // the recurrence), singular branch t^kap (1 + ...)
    const LocalODE lode_L = sonic_local_left(P, opt.series_order);
    const LocalODE lode_R = reflect(lode_L);
    rep->serA_L = frobenius_branch(lode_L, 0.0, 1.0, opt.series_order);
    rep->serA_R = frobenius_branch(lode_R, 0.0, 1.0, opt.series_order);
    rep->serS_L = frobenius_branch(lode_L, rep->kap, 1.0, opt.series_order);
    rep->serS_R = frobenius_branch(lode_R, rep->kap, 1.0, opt.series_order);

    const Ode2 ode = [P](double rho, double u, double du) {
        return (-coef_S(P, rho) * du - coef_R(P, rho) * u) / coef_P(rho);
    };
    OdeOptions oi;
    oi.rtol = 1e-12;
    oi.atol = 1e-15;

    SingularSeed seed;
    seed.x_s = 1.0;
    seed.local = lode_L;
    seed.sigma = 0.0;
    seed.a0 = 1.0;
    seed.order = opt.series_order;
    seed.h_seed = opt.seed_h;
    seed.dir = -1;
    rep->psi1_left = integrate_regular_singular(seed, ode, opt.rho_min, oi);
    seed.dir = +1;
    seed.local = lode_R;
    rep->psi1_right = integrate_regular_singular(seed, ode, opt.rho_max, oi);

    // connections to the hypergeometric pairs via probe Wronskians
    const auto psi1_eval = [&rep](double r) { return rep->psi1_at(r); };
    std::vector<double> w1L, w2L, w1R, w2R;
    for (double r : {0.50, 0.55, 0.60}) {
        w1L.push_back(wnorm(P, psi1_eval,
                            [&P](double rho) {
                                const BasisEval b = eval_basis_left(P, rho);
                                return ExteriorBasis::Point{b.v1, b.dv1};
                            },
                            r));
        w2L.push_back(wnorm(P, psi1_eval,
                            [&P](double rho) {
                                const BasisEval b = eval_basis_left(P, rho);
                                return ExteriorBasis::Point{b.v2, b.dv2};
                            },
                            r));
    }
    for (double r : {2.0, 2.2, 2.5}) {
        w1R.push_back(wnorm(P, psi1_eval,
                            [&P](double rho) {
                                const BasisEval b = eval_basis_right(P, rho);
                                return ExteriorBasis::Point{b.v1, b.dv1};
                            },
                            r));
        w2R.push_back(wnorm(P, psi1_eval,
                            [&P](double rho) {
                                const BasisEval b = eval_basis_right(P, rho);
                                return ExteriorBasis::Point{b.v2, b.dv2};
                            },
                            r));
    }
    // pair Wronskians: W(psi1L, psi2L) = -omega, W(psi1R, psi2R) = -1, so with
    // psi1 = a psi1L + b psi2L:  W(psi1, psi1L) = b omega, W(psi1, psi2L) = -a omega
    const double WL1 = averaged(w1L, "W(psi1, psi1L)");
    const double WL2 = averaged(w2L, "W(psi1, psi2L)");
    const double WR1 = averaged(w1R, "W(psi1, psi1R)");
    const double WR2 = averaged(w2R, "W(psi1, psi2R)");
    rep->bL = WL1 / P.omega;
    rep->aL = -WL2 / P.omega;
    rep->bR = WR1;
    rep->aR = -WR2;
    if (std::abs(WL1) < 1e-6 || std::abs(WR1) < 1e-6)
        throw std::runtime_error(
            "build_exterior_basis: psi1 nearly dependent on the decaying member; "
            "psi2 normalization is degenerate");
    rep->c1 = 1.0 / WL1;
    rep->c2 = 1.0 / WR1;

    // psi2 continuation from the hypergeometric region toward the sonic collar
    {
        const BasisEval b0 = eval_basis_left(P, opt.hyp_left);
        rep->psi2_left = integrate_adaptive(ode, opt.hyp_left, 1.0 - opt.collar, rep->c1 * b0.v1,
                                            rep->c1 * b0.dv1, oi);
        const BasisEval b1 = eval_basis_right(P, opt.hyp_right);
        rep->psi2_right = integrate_adaptive(ode, opt.hyp_right, 1.0 + opt.collar, rep->c2 * b1.v1,
                                             rep->c2 * b1.dv1, oi);
    }
    // Frobenius collar: psi2 = mu psi1_series + nu t^kap(1+...); nu is exact
    // from Abel's identity (W(psi1, t^kap(1+...)) = -+ kap 2^{1-kap} * weight),
    // mu matches the continued value at the collar edge, and the derivative
    // match is a construction self-check.
    rep->nuL = std::pow(2.0, rep->kap - 1.0) / rep->kap;
    rep->nuR = -rep->nuL;
    {
        const double t = opt.collar;
        const double vL = rep->psi2_left.u_end();
        const double dL = rep->psi2_left.du_end();
        rep->muL = (vL - rep->nuL * rep->serS_L.u(t)) / rep->serA_L.u(t);
        const double dpred = -(rep->muL * rep->serA_L.du(t) + rep->nuL * rep->serS_L.du(t));
        if (std::abs(dpred - dL) > 1e-7 * (1.0 + std::abs(dL)))
            throw std::runtime_error("build_exterior_basis: left collar continuation inconsistent");
        const double vR = rep->psi2_right.u_end();
        const double dR = rep->psi2_right.du_end();
        rep->muR = (vR - rep->nuR * rep->serS_R.u(t)) / rep->serA_R.u(t);
        const double dpredR = rep->muR * rep->serA_R.du(t) + rep->nuR * rep->serS_R.du(t);
        if (std::abs(dpredR - dR) > 1e-7 * (1.0 + std::abs(dR)))
            throw std::runtime_error("build_exterior_basis: right collar continuation inconsistent");
    }

    ExteriorBasis B;
    B.par = P;
    B.opt = opt;
    B.rep = rep;
    B.c1 = rep->c1;
    B.c2 = rep->c2;
    B.aL = rep->aL;
    B.bL = rep->bL;
    B.aR = rep->aR;
    B.bR = rep->bR;

    // phase near 0 from the plain oscillation fit (the connection gives the
    // closed form atan2(aL, bL), kept as a cross-check in the tests)
    const double wlo = opt.rho_min * 1.05;
    const double whi = std::min(0.025, opt.rho_min * 25.0);
    B.delta1 = extract_oscillation_phase([&rep](double r) { return rep->psi1_at(r).v; }, P, wlo,
                                         whi)
                   .delta;

    const auto grid = view_grid(opt.rho_min, opt.rho_max, 0.35, 1e-6);
    B.psi1 = sample_view(grid, [&rep](double r) { return rep->psi1_at(r); },
                         [&rep](double r) { return rep->psi1_d2(r); });
    B.psi2 = sample_view(grid, [&rep](double r) { return rep->psi2_at(r); },
                         [&rep](double r) { return rep->psi2_d2(r); });
    return B;
}

RadialFunction build_psi1(const Parameters& P, double rho_min, double rho_max) {
    ExteriorOptions opt;
    opt.rho_min = rho_min;
    opt.rho_max = rho_max;
    return build_exterior_basis(P, opt).psi1;
}

ExteriorBasis build_psi2(const Parameters& P, const RadialFunction& psi1) {
    if (psi1.empty() || psi1.rho_min() >= 1.0 || psi1.rho_max() <= 1.0)
        throw std::invalid_argument("build_psi2: psi1 must cover both sides of rho=1");
    ExteriorOptions opt;
    opt.rho_min = psi1.rho_min();
    opt.rho_max = psi1.rho_max();
    ExteriorBasis B = build_exterior_basis(P, opt);
    for (double r : {0.5, 0.8, 1.0, 1.5, 3.0}) {
        const double ours = B.psi1_at(r).v;
        if (std::abs(ours - psi1(r)) > 1e-6 * (1.0 + std::abs(ours)))
            throw std::invalid_argument("build_psi2: psi1 samples inconsistent with parameters");
    }
    return B;
}

// ---------------------------------------------------------------------------
// quadrature mesh and prefix-integral scaffolding for the resolvent

namespace {

QuadMesh make_mesh(const Parameters& P, const ExteriorOptions& opt, double rho0, int refine) {
    if (!(rho0 > 0) || rho0 >= 0.9)
        throw std::invalid_argument("exterior resolvent: rho0 must lie in (0, 0.9)");
    const double q = 1.0 / (1.5 - P.s_c);
    QuadMesh m;
    if (rho0 < 0.65) {
        const int nl = refine * std::max(2, (int)std::ceil(std::log(0.65 / rho0) / 0.30));
        m.add_region(rho0, 0.65, nl, CellMap::Log);
        m.add_region(0.65, 0.90, 2 * refine, CellMap::Linear);
    } else {
        m.add_region(rho0, 0.90, 2 * refine, CellMap::Linear);
    }
    m.add_region(0.90, 1.0, 2 * refine, CellMap::SigmaLeft, q);
    m.add_region(1.0, 1.2, 2 * refine, CellMap::SigmaRight, q);
    m.add_region(1.2, 1.7, 2 * refine, CellMap::Linear);
    const int nr = refine * std::max(4, (int)std::ceil(std::log(opt.rho_max / 1.7) / 0.30));
    m.add_region(1.7, opt.rho_max, nr, CellMap::Log);
    m.finalize(opt.gl_nodes);
    return m;
}

// X norm over explicit samples: sum of the one-sided weighted sups
double xnorm_samples(const Parameters& P, const std::vector<double>& r,
                     const std::vector<double>& v) {
    double ml = 0, mr = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] <= 1.0)
            ml = std::max(ml, std::pow(r[i], 0.5 * P.d - 1.0) * std::abs(v[i]));
        else
            mr = std::max(mr, std::pow(r[i], P.alpha + 1.0) * std::abs(v[i]));
    }
    return ml + mr;
}

// fitted power-law completion of int_{Rmax}^inf h(r) dr from samples of h
double tail_completion(const std::function<double(double)>& h, double Rmax, const char* what) {
    const double r1 = 0.25 * Rmax, r2 = Rmax;
    const double h1 = h(r1), h2 = h(r2);
    const double floor_mag = 1e-14 * (std::abs(h1) + 1.0);
    if (std::abs(h2) <= floor_mag) return 0.0; // compactly supported / negligible tail
    if (h1 * h2 <= 0.0) return 0.0;            // oscillatory leftovers: treat as converged
    const double s = std::log(std::abs(h1 / h2)) / std::log(r2 / r1);
    if (s <= 1.05)
        throw std::runtime_error(std::string(what) +
                                 ": tail integrand decays too slowly for completion");
    return h2 * r2 / (s - 1.0);
}

// K(rho) = int_rho^inf f psi2 /((1-r^2)W),  J(rho) = int_1^rho f psi1 /((1-r^2)W)
struct KJField {
    const QuadMesh* mesh = nullptr;
    MeshIntegral I1, I2;
    double Ktot = 0; // int_{lo}^{Rmax} + completed tail
    double J1 = 0;

    double K(double rho) const { return Ktot - I2.upto(rho); }
    double J(double rho) const { return I1.upto(rho) - J1; }
};

KJField make_kj(const ExteriorBasis& B, const QuadMesh* mesh, const WeightedFn& f) {
    const Parameters& P = B.par;
    const auto* rep = B.rep.get();
    KJField kj;
    kj.mesh = mesh;
    WeightedFn h2 = [rep, &P, f](double r, double d1) {
        return f(r, d1) * rep->psi2_at(r).v * resolvent_kernel(P, r, d1);
    };
    WeightedFn h1 = [rep, &P, f](double r, double d1) {
        return f(r, d1) * rep->psi1_at(r).v * resolvent_kernel(P, r, d1);
    };
    kj.I2 = MeshIntegral(mesh, h2);
    kj.I1 = MeshIntegral(mesh, h1);
    const double tail = tail_completion(
        [&h2](double r) { return h2(r, std::abs(1.0 - r)); }, mesh->hi(), "exterior resolvent");
    kj.Ktot = kj.I2.total() + tail;
    kj.J1 = kj.I1.upto(1.0);
    return kj;
}

// Y norm with its own tail completion; throws when the weighted tail diverges
double ynorm_impl(const ExteriorBasis& B, const QuadMesh* mesh, const WeightedFn& f) {
    const Parameters& P = B.par;
    WeightedFn e = [&P, f](double r, double d1) {
        const double w = (r <= 1.0) ? std::pow(r, 0.5 * P.d) * std::pow(d1, 0.5 - P.s_c)
                                    : std::pow(r, 0.5 * (P.d - 1.0)) * std::pow(d1, 0.5 - P.s_c);
        return w * std::abs(f(r, d1));
    };
    MeshIntegral I(mesh, e);
    const double tail =
        tail_completion([&e](double r) { return e(r, std::abs(1.0 - r)); }, mesh->hi(), "Y norm");
    return I.total() + tail;
}

std::vector<double> export_grid(double rho0, double rho_max) {
    std::vector<double> g;
    const double rl = std::log(1.012);
    {
        const double a = std::log(rho0), b = std::log(0.92);
        const int n = std::max(2, (int)std::ceil((b - a) / rl));
        for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / n));
    }
    {
        const double t_in = 0.08, t_min = 1e-6;
        const int n = std::max(2, (int)std::ceil(std::log(t_in / t_min) / std::log(1.09)));
        for (int i = 0; i <= n; ++i) g.push_back(1.0 - t_in * std::exp(-std::log(t_in / t_min) * i / n));
        for (int i = n; i >= 0; --i) g.push_back(1.0 + t_in * std::exp(-std::log(t_in / t_min) * i / n));
    }
    {
        const double a = std::log(1.08), b = std::log(rho_max);
        const int n = std::max(2, (int)std::ceil((b - a) / rl));
        for (int i = 1; i <= n; ++i) g.push_back(std::exp(a + (b - a) * i / n));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double x, double y) { return y - x < 1e-15 * std::max(1.0, x); }),
            g.end());
    return g;
}

// sampled view of c * (psi1 K + psi2 J) with derivatives; rhs = c * f is the
// right-hand side it solves (for the d2 completion via the equation)
RadialFunction sample_combination(const ExteriorBasis& B, const KJField& kj, double c,
                                  const std::function<double(double)>& rhs,
                                  const std::vector<double>& grid) {
    const Parameters& P = B.par;
    std::vector<double> u(grid.size()), du(grid.size()), d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const double K = kj.K(r), J = kj.J(r);
        const auto p1 = B.psi1_at(r);
        const auto p2 = B.psi2_at(r);
        u[i] = c * (p1.v * K + p2.v * J);
        du[i] = c * (p1.d * K + p2.d * J);
        d2[i] = (rhs(r) - coef_S(P, r) * du[i] - coef_R(P, r) * u[i]) / coef_P(r);
    }
    return RadialFunction(grid, u, du, d2);
}

// Lambda of the same combination: c * (Lam psi1 K + Lam psi2 J)
RadialFunction sample_lambda_combination(const ExteriorBasis& B, const KJField& kj, double c,
                                         const std::vector<double>& grid) {
    std::vector<double> u(grid.size()), du(grid.size()), d2(grid.size());
    const double h = 1e-5;
    auto lam = [&](double r) {
        const double K = kj.K(r), J = kj.J(r);
        return c * (B.lam_psi1(r) * K + B.lam_psi2(r) * J);
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        u[i] = lam(r);
        const double hr = h * std::max(1.0, r);
        du[i] = (lam(r + hr) - lam(r - hr)) / (2.0 * hr);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const double hr = h * std::max(1.0, r);
        d2[i] = (lam(r + hr) - 2.0 * u[i] + lam(r - hr)) / (hr * hr);
    }
    return RadialFunction(grid, u, du, d2);
}

// Taylor remainder kernel of the quadratic source term:
// G = (psi1+w)^2 int_0^1 (1-s)(u_inf + s eps (psi1+w))^{p-2} ds, evaluated via
// F(A+B) - F(A) - F'(A) B = p(p-1) eps^2 G for F(u) = |u|^{p-1} u, with a
// series branch where the closed form cancels
double g_nonlin(const Parameters& P, double A, double v, double eps) {
    const double p = P.p;
    if (eps == 0.0) return 0.5 * std::pow(A, p - 2.0) * v * v;
    const double B = eps * v;
    const double x = B / A;
    if (std::abs(x) < 1e-3) {
        double term = 0.5 * p * (p - 1.0); // C(p,2)
        double S = term;
        for (int k = 3; k <= 80; ++k) {
            term *= (p - (k - 1.0)) / k * x;
            S += term;
            if (std::abs(term) < 1e-17 * std::abs(S)) break;
        }
        return std::pow(A, p - 2.0) * v * v * S / (p * (p - 1.0));
    }
    const double FA = std::pow(A, p);
    const double FAB = signed_pow(A + B, p);
    return (FAB - FA - p * std::pow(A, p - 1.0) * B) / (p * (p - 1.0) * eps * eps);
}

} // namespace

double norm_X(const ExteriorBasis& B, const std::function<double(double)>& f, double rho0) {
    QuadMesh mesh = make_mesh(B.par, B.opt, rho0, B.opt.mesh_refine);
    const auto& r = mesh.nodes();
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = f(r[i]);
    return xnorm_samples(B.par, r, v);
}

double norm_Y(const ExteriorBasis& B, const std::function<double(double)>& f, double rho0) {
    QuadMesh mesh = make_mesh(B.par, B.opt, rho0, B.opt.mesh_refine);
    return ynorm_impl(B, &mesh, [&f](double r, double) { return f(r); });
}

ResolventResult apply_resolvent_T(const ExteriorBasis& B, const std::function<double(double)>& f,
                                  double rho0) {
    QuadMesh mesh = make_mesh(B.par, B.opt, rho0, B.opt.mesh_refine);
    ResolventResult out;
    out.Y_norm = ynorm_impl(B, &mesh, [&f](double r, double) { return f(r); });
    const KJField kj = make_kj(B, &mesh, [&f](double r, double) { return f(r); });
    const auto grid = export_grid(rho0, B.opt.rho_max);
    // T f = -(psi1 K + psi2 J) solves L(Tf) = f
    out.Tf = sample_combination(B, kj, -1.0, f, grid);
    out.lam_Tf = sample_lambda_combination(B, kj, -1.0, grid);
    const auto& rn = mesh.nodes();
    std::vector<double> tv(rn.size());
    for (std::size_t i = 0; i < rn.size(); ++i) {
        const auto p1 = B.psi1_at(rn[i]);
        const auto p2 = B.psi2_at(rn[i]);
        tv[i] = -(p1.v * kj.K(rn[i]) + p2.v * kj.J(rn[i]));
    }
    out.X_norm = xnorm_samples(B.par, rn, tv);
    return out;
}

ExteriorSolution solve_exterior(const Parameters& P, const ExteriorBasis& B, double eps,
                                double rho0) {
    const ExteriorOptions& opt = B.opt;
    if (std::abs(eps) > opt.kappa * std::pow(rho0, P.s_c - 1.0) * (1.0 + 1e-12))
        throw std::invalid_argument(
            "solve_exterior: |eps| exceeds kappa rho0^{s_c-1}; outside the contraction regime");

    QuadMesh mesh = make_mesh(P, opt, rho0, opt.mesh_refine);
    const auto& r = mesh.nodes();
    const std::size_t N = r.size();

    ExteriorSolution sol;
    sol.par = P;
    sol.eps = eps;
    sol.rho0 = rho0;
    sol.rho_max = opt.rho_max;

    // basis and kernel tables at the mesh nodes
    std::vector<double> p1(N), p2(N), ui(N);
    for (std::size_t i = 0; i < N; ++i) {
        p1[i] = B.psi1_at(r[i]).v;
        p2[i] = B.psi2_at(r[i]).v;
        ui[i] = u_inf(P, r[i]);
    }

    const double pp1 = P.p * (P.p - 1.0);
    const auto grid = export_grid(rho0, opt.rho_max);

    // derivative of w in eps at eps=0: -(p(p-1)/2) T(u_inf^{p-2} psi1^2)
    {
        const auto* repp = B.rep.get();
        const Parameters Pc = P;
        WeightedFn f0 = [repp, Pc](double rr, double) {
            const double v1 = repp->psi1_at(rr).v;
            return std::pow(u_inf(Pc, rr), Pc.p - 2.0) * v1 * v1;
        };
        const KJField kj0 = make_kj(B, &mesh, f0);
        const double c = 0.5 * pp1; // -(pp1/2) * T = +(pp1/2)(psi1 K + psi2 J)
        sol.deps_w = sample_combination(
            B, kj0, c, [&](double rr) { return -c * f0(rr, 0.0); }, grid);
        std::vector<double> dv(N);
        for (std::size_t i = 0; i < N; ++i)
            dv[i] = c * (p1[i] * kj0.K(r[i]) + p2[i] * kj0.J(r[i]));
        sol.deps_w_X = xnorm_samples(P, r, dv);
    }

    if (eps == 0.0) {
        std::vector<double> z(grid.size(), 0.0);
        sol.w = RadialFunction(grid, z, z, z);
        sol.lam_w = sol.w;
        return sol;
    }

    // Picard iteration on the node values of w
    std::vector<double> w(N, 0.0), wn(N), diff(N);
    KJField kj;
    bool converged = false;
    for (int it = 0; it < opt.max_iter && !converged; ++it) {
        std::vector<double> g(N);
        for (std::size_t i = 0; i < N; ++i) g[i] = g_nonlin(P, ui[i], p1[i] + w[i], eps);
        MeshFunction gmf(&mesh, std::move(g));
        kj = make_kj(B, &mesh, [&gmf](double rr, double) { return gmf(rr); });
        // w_{n+1} = -pp1 eps T(G) = pp1 eps (psi1 K + psi2 J)
        for (std::size_t i = 0; i < N; ++i) {
            wn[i] = pp1 * eps * (p1[i] * kj.K(r[i]) + p2[i] * kj.J(r[i]));
            diff[i] = wn[i] - w[i];
        }
        const double inc = xnorm_samples(P, r, diff);
        w.swap(wn);
        if (!sol.increments.empty() && sol.increments.back() > 0.0) {
            const double ratio = inc / sol.increments.back();
            sol.contraction = std::max(sol.contraction, ratio);
            if (ratio >= 1.0 && inc > 100.0 * opt.fp_tol)
                throw std::runtime_error(
                    "solve_exterior: fixed point failed to contract; reduce eps or increase rho0");
        }
        sol.increments.push_back(inc);
        if (inc < opt.fp_tol) converged = true;
    }
    if (!converged)
        throw std::runtime_error("solve_exterior: Picard iteration did not reach tolerance");

    // one extra application measures the fixed-point residual; its K/J field
    // (built from the final w) also feeds the exported w and Lambda w
    {
        std::vector<double> g(N);
        for (std::size_t i = 0; i < N; ++i) g[i] = g_nonlin(P, ui[i], p1[i] + w[i], eps);
        MeshFunction gmf(&mesh, std::move(g));
        kj = make_kj(B, &mesh, [&gmf](double rr, double) { return gmf(rr); });
        for (std::size_t i = 0; i < N; ++i) {
            wn[i] = pp1 * eps * (p1[i] * kj.K(r[i]) + p2[i] * kj.J(r[i]));
            diff[i] = wn[i] - w[i];
        }
        sol.fp_residual_X = xnorm_samples(P, r, diff);
        sol.w_X = xnorm_samples(P, r, wn);
        std::vector<double> lw(N);
        for (std::size_t i = 0; i < N; ++i)
            lw[i] = pp1 * eps * (B.lam_psi1(r[i]) * kj.K(r[i]) + B.lam_psi2(r[i]) * kj.J(r[i]));
        sol.lam_w_X = xnorm_samples(P, r, lw);

        MeshFunction gview(&mesh, std::vector<double>(gmf.node_values()));
        sol.w = sample_combination(
            B, kj, pp1 * eps, [&gview, pp1, eps](double rr) { return -pp1 * eps * gview(rr); },
            grid);
        sol.lam_w = sample_lambda_combination(B, kj, pp1 * eps, grid);
    }
    return sol;
}

} // namespace ssw
