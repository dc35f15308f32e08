#pragma once
// Interior construction: perturbations of the rescaled soliton.  Near
// u = lambda^{-alpha} Q(rho/lambda) the linearized operator of the profile
// equation is H_inf = -Delta - p Q^{p-1}; its right inverse S is assembled
// from the soliton pair (Lambda Q, phi), and a Picard fixed point for
// H_inf(w) = F[Q,lambda] w produces the inner branch
// u_int = lambda^{-alpha} (Q + lambda^2 w)(rho/lambda) on [0, rho0].

#include <functional>
#include <vector>

#include "ssw/numerics.hpp"
#include "ssw/params.hpp"
#include "ssw/soliton.hpp"

namespace ssw {

struct InteriorOptions {
    double rho_head = 1.0;        // linear quadrature cells cover [0, rho_head]
    int head_cells = 8;
    double cells_per_decade = 10; // log cells from rho_head to rho1
    int gl_nodes = 14;
    int mesh_refine = 1;
    int max_iter = 60;
    double fp_tol = 1e-12;
    double rho0_max = 0.25;       // safety bound for the perturbative regime
    int export_n = 4000;          // log-spaced export grid size
    double export_rho_min = 1e-4;
};

// sup over (0, rho1] of (1+rho)^{d/2-3} (|w| + rho |w'| + rho^2 |w''|)
double norm_X_tilde(const Parameters& P, const RadialFunction& w, double rho1);

// sup over (0, rho1] of (1+rho)^{d/2-1} |f|; throws std::runtime_error when
// the weighted samples keep growing toward rho = 0 (divergent sup)
double norm_Y_tilde(const Parameters& P, const std::function<double(double)>& f, double rho1);

// Right inverse of H_inf on (0, rho1]:
//   S f = phi int_0^rho f LamQ r^{d-1} dr - LamQ int_0^rho f phi r^{d-1} dr,
// the ordering fixed by (LamQ)' phi - phi' LamQ = +rho^{1-d} so that
// H_inf(S f) = +f.  Derivatives of the result come from differentiating the
// integral formula: the first-derivative cross terms cancel and the Wronskian
// reduces the second derivative to phi'' P2 - (LamQ)'' P1 - f.
RadialFunction apply_resolvent_S(const SolitonProfile& sol, const std::function<double(double)>& f,
                                 double rho1, const InteriorOptions& opt = {});

struct InteriorSolution {
    Parameters par;
    double lambda = 0;
    double rho0 = 0;
    double rho1 = 0;          // rho0 / lambda, cutoff in the soliton variable
    RadialFunction w;         // correction on (0, rho1], with w' and w''
    double w_X = 0;           // X~_{rho1} norm of w
    double fp_residual_X = 0; // X~ norm of S(F[w]) - w after convergence
    std::vector<double> increments; // X~ norms of the Picard increments
    double contraction = 0;         // max ratio of successive increments
    double u_rho0 = 0;  // u_int(rho0)  = lambda^{-alpha}   (Q + lambda^2 w)(rho1)
    double du_rho0 = 0; // u_int'(rho0) = lambda^{-alpha-1} (Q' + lambda^2 w')(rho1)
};

// Picard iteration for H_inf(w) = F[Q,lambda] w from w = 0, where
//   F[Q,lambda]w = p(p-1) lambda^2 w^2 int_0^1 (1-s)(Q + lambda^2 s w)^{p-2} ds
//                  - FF(Q + lambda^2 w),
//   FF = rho^2 d^2/drho^2 + 2(1+alpha) rho d/drho + alpha(1+alpha).
// Requires 0 < lambda <= rho0 (so rho1 >= 1), rho0 <= rho0_max, and a soliton
// grid covering rho1.  Throws std::runtime_error when the iteration stops
// contracting (rho0 outside the perturbative regime).
InteriorSolution solve_interior(const Parameters& P, const SolitonProfile& sol, double lambda,
                                double rho0, const InteriorOptions& opt = {});

} // namespace ssw
