#include "ssw/interior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssw {

namespace {

// soliton pair at one radius, all channels
struct PairLocals {
    double q, dq, d2q;    // Q
    double l, dl, d2l;    // Lambda Q
    double ph, dph, d2ph; // phi
};

// Evaluates the pair anywhere on (0, rho_max].  On the stored grid the
// RadialFunction channels are used directly; below the grid head g0 the
// origin series Q = q0 + a2 rho^2 + a4 rho^4 takes over together with the
// reduction-of-order continuation of phi,
//   phi = LamQ * I,  I(rho) = I(g0) + int_rho^{g0} ds / ((LamQ)^2 s^{d-1}),
// where I(g0) = phi(g0)/LamQ(g0) is exact in the soliton construction
// (g0 lies inside R0, where phi is literally LamQ times that integral).
class PairEval {
public:
    explicit PairEval(const SolitonProfile& S) : S_(S), P_(S.par) {
        g0_ = S.Q.grid().front();
        if (!(g0_ < S.R0))
            throw std::invalid_argument("interior: soliton grid must start inside R0");
        const double q0 = S.q0;
        a2_ = -std::pow(q0, P_.p) / (2.0 * P_.d);
        a4_ = P_.p * std::pow(q0, 2.0 * P_.p - 1.0) / (8.0 * P_.d * (P_.d + 2.0));
        Imin_ = S.phi(g0_) / S.LamQ(g0_);
    }

    PairLocals at(double r) const {
        if (r >= g0_)
            return {S_.Q(r),      S_.Q.d(r),    S_.Q.d2(r),   S_.LamQ(r), S_.LamQ.d(r),
                    S_.LamQ.d2(r), S_.phi(r),   S_.phi.d(r),  S_.phi.d2(r)};
        PairLocals L;
        const double r2 = r * r, al = P_.alpha;
        L.q = S_.q0 + a2_ * r2 + a4_ * r2 * r2;
        L.dq = 2.0 * a2_ * r + 4.0 * a4_ * r2 * r;
        L.d2q = 2.0 * a2_ + 12.0 * a4_ * r2;
        L.l = al * L.q + r * L.dq;
        L.dl = (al + 1.0) * L.dq + r * L.d2q;
        // Lambda Q = alpha q0 + (alpha+2) a2 rho^2 + (alpha+4) a4 rho^4
        L.d2l = 2.0 * (al + 2.0) * a2_ + 12.0 * (al + 4.0) * a4_ * r2;
        const double I = small_I(r);
        const double rd1 = std::pow(r, P_.d - 1.0);
        L.ph = L.l * I;
        L.dph = L.dl * I - 1.0 / (L.l * rd1);
        // the -(LamQ)' terms cancel, as in the on-grid construction
        L.d2ph = L.d2l * I + (P_.d - 1.0) / (L.l * rd1 * r);
        return L;
    }

    double grid_head() const { return g0_; }

private:
    double lamq_series(double s) const {
        const double s2 = s * s, al = P_.alpha;
        return al * S_.q0 + (al + 2.0) * a2_ * s2 + (al + 4.0) * a4_ * s2 * s2;
    }

    // I(r) for r < g0 by composite Gauss-Legendre in log s; the integrand
    // s^{1-d} / (LamQ)^2 is smooth there and the series for LamQ carries
    // relative error O(g0^6)
    double small_I(double r) const {
        const GaussRule& g = gauss_legendre(20);
        const double ta = std::log(r), tb = std::log(g0_);
        const int nc = std::max(1, static_cast<int>(std::ceil((tb - ta) / 1.5)));
        const double h = (tb - ta) / nc;
        double acc = Imin_;
        for (int k = 0; k < nc; ++k) {
            const double mid = ta + (k + 0.5) * h, half = 0.5 * h;
            for (std::size_t j = 0; j < g.x.size(); ++j) {
                const double s = std::exp(mid + half * g.x[j]);
                const double lq = lamq_series(s);
                acc += half * g.w[j] * std::pow(s, 2.0 - P_.d) / (lq * lq);
            }
        }
        return acc;
    }

    const SolitonProfile& S_;
    Parameters P_;
    double g0_ = 0, a2_ = 0, a4_ = 0, Imin_ = 0;
};

// quadrature mesh for int_0^rho: linear cells through the soliton core, log
// cells out to rho1 (integrands are analytic at 0: phi r^{d-1} is an odd
// series, LamQ r^{d-1} an even one times r)
QuadMesh interior_mesh(double rho1, const InteriorOptions& opt) {
    QuadMesh mesh;
    const int rf = std::max(1, opt.mesh_refine);
    const double head = std::min(opt.rho_head, rho1);
    mesh.add_region(0.0, head, opt.head_cells * rf, CellMap::Linear);
    if (rho1 > head * (1.0 + 1e-12)) {
        const int nc =
            std::max(1, static_cast<int>(std::ceil(opt.cells_per_decade * std::log10(rho1 / head))));
        mesh.add_region(head, rho1, nc * rf, CellMap::Log);
    }
    mesh.finalize(opt.gl_nodes);
    return mesh;
}

double xtilde_weight(const Parameters& P, double r) {
    return std::pow(1.0 + r, 0.5 * P.d - 3.0);
}

double xnorm_nodes(const Parameters& P, const std::vector<double>& r, const std::vector<double>& w,
                   const std::vector<double>& dw, const std::vector<double>& d2w) {
    double m = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double v = xtilde_weight(P, r[i]) *
                         (std::abs(w[i]) + r[i] * std::abs(dw[i]) + r[i] * r[i] * std::abs(d2w[i]));
        m = std::max(m, v);
    }
    return m;
}

// Taylor remainder of the signed power F(u) = |u|^{p-1} u around A:
// F(A + eps v) - F(A) - p A^{p-1} eps v = p(p-1) eps^2 * remainder, with
// remainder = v^2 int_0^1 (1-s)(A + s eps v)^{p-2} ds; a series branch covers
// the regime where the closed form cancels.
double quad_remainder(const Parameters& P, double A, double v, double eps) {
    const double p = P.p;
    if (eps == 0.0) return 0.5 * std::pow(A, p - 2.0) * v * v;
    const double B = eps * v;
    const double x = B / A;
    if (std::abs(x) < 1e-3) {
        double term = 0.5 * p * (p - 1.0);
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

double norm_X_tilde(const Parameters& P, const RadialFunction& w, double rho1) {
    if (!(rho1 > 0.0)) throw std::invalid_argument("norm_X_tilde: rho1 must be positive");
    auto rs = log_spaced(std::min(1e-6, 0.1 * rho1), rho1, 3000);
    for (double g : w.grid())
        if (g > 0.0 && g <= rho1) rs.push_back(g);
    double m = 0;
    for (double r : rs) {
        const double v = xtilde_weight(P, r) *
                         (std::abs(w(r)) + r * std::abs(w.d(r)) + r * r * std::abs(w.d2(r)));
        m = std::max(m, v);
    }
    return m;
}

double norm_Y_tilde(const Parameters& P, const std::function<double(double)>& f, double rho1) {
    if (!(rho1 > 0.0)) throw std::invalid_argument("norm_Y_tilde: rho1 must be positive");
    const double lo = std::min(1e-8, 1e-3 * rho1);
    const auto rs = log_spaced(lo, rho1, 2400);
    std::vector<double> m(rs.size());
    double sup = 0, sup_mid = 0;
    std::size_t i6 = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        m[i] = std::pow(1.0 + rs[i], 0.5 * P.d - 1.0) * std::abs(f(rs[i]));
        sup = std::max(sup, m[i]);
        if (rs[i] >= 100.0 * lo) {
            if (i6 == 0) i6 = i;
            sup_mid = std::max(sup_mid, m[i]);
        }
    }
    // growing toward rho = 0 and already dominating the rest: the sup diverges
    if (m.front() > 1.2 * m[i6] && m.front() >= sup_mid)
        throw std::runtime_error("norm_Y_tilde: weighted sup diverges toward rho = 0");
    return sup;
}

RadialFunction apply_resolvent_S(const SolitonProfile& sol, const std::function<double(double)>& f,
                                 double rho1, const InteriorOptions& opt) {
    const Parameters& P = sol.par;
    if (!(rho1 >= 1.0))
        throw std::invalid_argument("apply_resolvent_S: rho1 >= 1 required (weighted-norm regime)");
    if (rho1 > sol.Q.rho_max() * (1.0 + 1e-12))
        throw std::invalid_argument("apply_resolvent_S: rho1 exceeds the soliton grid");
    norm_Y_tilde(P, f, rho1); // rejects integrands with a divergent weighted sup

    const PairEval E(sol);
    QuadMesh mesh = interior_mesh(rho1, opt);
    const double dm1 = P.d - 1.0;
    const MeshIntegral P1(&mesh,
                          std::function<double(double)>([&](double r) {
                              return f(r) * E.at(r).ph * std::pow(r, dm1);
                          }));
    const MeshIntegral P2(&mesh,
                          std::function<double(double)>([&](double r) {
                              return f(r) * E.at(r).l * std::pow(r, dm1);
                          }));

    const auto grid = log_spaced(std::min(opt.export_rho_min, 0.1 * rho1), rho1, opt.export_n);
    std::vector<double> u(grid.size()), du(grid.size()), d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const PairLocals L = E.at(r);
        const double p1 = P1.upto(r), p2 = P2.upto(r);
        u[i] = L.ph * p2 - L.l * p1;
        du[i] = L.dph * p2 - L.dl * p1;
        d2[i] = L.d2ph * p2 - L.d2l * p1 - f(r);
    }
    return RadialFunction(grid, u, du, d2);
}

InteriorSolution solve_interior(const Parameters& P, const SolitonProfile& sol, double lambda,
                                double rho0, const InteriorOptions& opt) {
    if (!(lambda > 0.0) || !(rho0 > 0.0) || lambda > rho0 * (1.0 + 1e-12))
        throw std::invalid_argument("solve_interior: need 0 < lambda <= rho0");
    if (rho0 > opt.rho0_max * (1.0 + 1e-12))
        throw std::invalid_argument("solve_interior: rho0 outside the perturbative regime");
    const double rho1 = rho0 / lambda;
    if (rho1 > sol.Q.rho_max() * (1.0 + 1e-12))
        throw std::invalid_argument("solve_interior: rho0/lambda exceeds the soliton grid");

    const PairEval E(sol);
    QuadMesh mesh = interior_mesh(rho1, opt);
    const auto& r = mesh.nodes();
    const std::size_t N = r.size();

    // pair tables and the soliton forcing FF(Q) at the nodes
    const double c1 = 2.0 * (1.0 + P.alpha), c0 = P.alpha * (1.0 + P.alpha);
    std::vector<PairLocals> loc(N);
    std::vector<double> FQ(N), rd1(N);
    for (std::size_t i = 0; i < N; ++i) {
        loc[i] = E.at(r[i]);
        rd1[i] = std::pow(r[i], P.d - 1.0);
        FQ[i] = r[i] * r[i] * loc[i].d2q + c1 * r[i] * loc[i].dq + c0 * loc[i].q;
    }

    const double pp1 = P.p * (P.p - 1.0), l2 = lambda * lambda;

    InteriorSolution out;
    out.par = P;
    out.lambda = lambda;
    out.rho0 = rho0;
    out.rho1 = rho1;

    std::vector<double> w(N, 0.0), dw(N, 0.0), d2w(N, 0.0);
    std::vector<double> Fv(N), wn(N), dwn(N), d2wn(N), df(N), ddf(N), dd2f(N);
    MeshIntegral P1m, P2m;

    const auto build_F = [&]() {
        for (std::size_t i = 0; i < N; ++i) {
            const double ffw = r[i] * r[i] * d2w[i] + c1 * r[i] * dw[i] + c0 * w[i];
            Fv[i] = pp1 * l2 * quad_remainder(P, loc[i].q, w[i], l2) - (FQ[i] + l2 * ffw);
        }
    };
    // one application of S to the nodal F: w_new = phi P2 - LamQ P1
    const auto apply_S = [&]() {
        std::vector<double> g1(N), g2(N);
        for (std::size_t i = 0; i < N; ++i) {
            g1[i] = Fv[i] * loc[i].ph * rd1[i];
            g2[i] = Fv[i] * loc[i].l * rd1[i];
        }
        MeshFunction g1m(&mesh, std::move(g1)), g2m(&mesh, std::move(g2));
        P1m = MeshIntegral(&mesh, std::function<double(double)>([g1m](double rr) { return g1m(rr); }));
        P2m = MeshIntegral(&mesh, std::function<double(double)>([g2m](double rr) { return g2m(rr); }));
        for (std::size_t i = 0; i < N; ++i) {
            const double p1 = P1m.upto(r[i]), p2 = P2m.upto(r[i]);
            wn[i] = loc[i].ph * p2 - loc[i].l * p1;
            dwn[i] = loc[i].dph * p2 - loc[i].dl * p1;
            d2wn[i] = loc[i].d2ph * p2 - loc[i].d2l * p1 - Fv[i];
        }
    };

    bool converged = false;
    for (int it = 0; it < opt.max_iter && !converged; ++it) {
        build_F();
        apply_S();
        for (std::size_t i = 0; i < N; ++i) {
            df[i] = wn[i] - w[i];
            ddf[i] = dwn[i] - dw[i];
            dd2f[i] = d2wn[i] - d2w[i];
        }
        const double inc = xnorm_nodes(P, r, df, ddf, dd2f);
        w = wn;
        dw = dwn;
        d2w = d2wn;
        if (!out.increments.empty() && out.increments.back() > 0.0) {
            const double ratio = inc / out.increments.back();
            out.contraction = std::max(out.contraction, ratio);
            if (ratio >= 1.0 && inc > 100.0 * opt.fp_tol)
                throw std::runtime_error(
                    "solve_interior: fixed point failed to contract; reduce rho0");
        }
        out.increments.push_back(inc);
        if (inc < opt.fp_tol) converged = true;
    }
    if (!converged)
        throw std::runtime_error("solve_interior: Picard iteration did not reach tolerance");

    // extra application measures the fixed-point residual; its prefix
    // integrals (built from the final w) also feed the exported fields
    build_F();
    apply_S();
    for (std::size_t i = 0; i < N; ++i) {
        df[i] = wn[i] - w[i];
        ddf[i] = dwn[i] - dw[i];
        dd2f[i] = d2wn[i] - d2w[i];
    }
    out.fp_residual_X = xnorm_nodes(P, r, df, ddf, dd2f);
    out.w_X = xnorm_nodes(P, r, wn, dwn, d2wn);

    // off-node F from the converged nodal fields, for the exported w''
    MeshFunction wm(&mesh, w), dwm(&mesh, dw), d2wm(&mesh, d2w);
    const auto Ffun = [&](double rr) {
        const PairLocals L = E.at(rr);
        const double wv = wm(rr);
        const double ffw = rr * rr * d2wm(rr) + c1 * rr * dwm(rr) + c0 * wv;
        const double ffq = rr * rr * L.d2q + c1 * rr * L.dq + c0 * L.q;
        return pp1 * l2 * quad_remainder(P, L.q, wv, l2) - (ffq + l2 * ffw);
    };
    const auto grid = log_spaced(std::min(opt.export_rho_min, 0.1 * rho1), rho1, opt.export_n);
    std::vector<double> u(grid.size()), du(grid.size()), d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rr = grid[i];
        const PairLocals L = E.at(rr);
        const double p1 = P1m.upto(rr), p2 = P2m.upto(rr);
        u[i] = L.ph * p2 - L.l * p1;
        du[i] = L.dph * p2 - L.dl * p1;
        d2[i] = L.d2ph * p2 - L.d2l * p1 - Ffun(rr);
    }
    out.w = RadialFunction(grid, u, du, d2);

    const PairLocals Le = E.at(rho1);
    out.u_rho0 = std::pow(lambda, -P.alpha) * (Le.q + l2 * u.back());
    out.du_rho0 = std::pow(lambda, -P.alpha - 1.0) * (Le.dq + l2 * du.back());
    return out;
}

} // namespace ssw
