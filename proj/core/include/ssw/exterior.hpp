#pragma once
// Exterior construction on (rho_0, infinity): the linearized basis around the
// singular state u_inf (psi1 analytic through the sonic point rho=1, psi2
// Wronskian-normalized with a |1-rho|^{s_c-1/2} derivative kink), the exterior
// resolvent T built on a quadrature mesh with sigma-flattened sonic cells, and
// the Picard fixed point w of  u = u_inf + eps (psi1 + w).

#include <functional>
#include <memory>
#include <vector>

#include "ssw/numerics.hpp"
#include "ssw/params.hpp"

namespace ssw {

namespace detail {
struct ExtBasisRep;
}

struct ExteriorOptions {
    double rho_min = 1e-3;   // basis domain
    double rho_max = 1e3;    // truncation radius of the r -> infinity integrals
    double seed_h = 0.1;     // half-width where the sonic series represents psi1
    double collar = 0.02;    // half-width of the Frobenius collar carrying psi2 to rho=1
    double hyp_left = 0.80;  // hypergeometric pair used for rho <= hyp_left ...
    double hyp_right = 1.30; // ... and rho >= hyp_right
    int series_order = 40;   // sonic Frobenius truncation order
    int gl_nodes = 14;       // Gauss nodes per quadrature cell
    int mesh_refine = 1;     // cell-count multiplier (convergence studies)
    double kappa = 0.1;      // admissibility guard |eps| <= kappa rho0^{s_c-1}
    int max_iter = 200;
    double fp_tol = 1e-12;   // Picard stop: X-norm increment
};

// Wronskian normalization: psi1' psi2 - psi2' psi1 = rho^{1-d}|1-rho^2|^{s_c-3/2}.
// psi2 is a single multiple of the left/right hypergeometric member on each
// side of 1 (c1, c2 below); its value generally jumps across rho=1.
struct ExteriorBasis {
    Parameters par;
    ExteriorOptions opt;
    RadialFunction psi1, psi2; // dense sampled views (export/plots)
    double delta1 = 0;         // phase of the rho^{1-d/2} sin(omega log rho + delta1) behavior near 0
    double c1 = 0, c2 = 0;     // psi2 = c1 psi1L (rho<1), c2 psi1R (rho>1)
    // connection of psi1 to the hypergeometric pairs:
    double aL = 0, bL = 0; // psi1 = aL psi1L + bL psi2L  (rho < 1)
    double aR = 0, bR = 0; // psi1 = aR psi1R + bR psi2R  (rho > 1); psi1 rho^alpha -> bR
    std::shared_ptr<const detail::ExtBasisRep> rep; // authoritative evaluators

    struct Point {
        double v = 0, d = 0;
    };
    Point psi1_at(double rho) const;
    Point psi2_at(double rho) const;
    double lam_psi1(double rho) const; // alpha v + rho v'
    double lam_psi2(double rho) const;
    double wronskian_weight(double rho) const; // rho^{1-d}|1-rho^2|^{s_c-3/2}
};

ExteriorBasis build_exterior_basis(const Parameters& P, const ExteriorOptions& opt = {});

// Sonic-seeded analytic solution alone (series at rho=1 with psi(1)=1 and the
// regularity-forced slope, continued to both ends of the domain).
RadialFunction build_psi1(const Parameters& P, double rho_min = 1e-3, double rho_max = 1e3);

// Completes a basis around a previously built psi1 (rebuilds the internal
// representation from P over the same domain and cross-checks it against the
// supplied samples before normalizing psi2).
ExteriorBasis build_psi2(const Parameters& P, const RadialFunction& psi1);

// Resolvent  T f = -psi1 K - psi2 J,  K(rho) = int_rho^inf f psi2 / ((1-r^2) W),
// J(rho) = int_1^rho f psi1 / ((1-r^2) W);  right inverse of the linearization
// L_inf at u_inf.  The r->infinity tail beyond rho_max is completed with a
// fitted power law; a non-integrable tail throws.
struct ResolventResult {
    RadialFunction Tf;     // on (rho0, rho_max)
    RadialFunction lam_Tf; // Lambda(T f) = -(Lam psi1) K - (Lam psi2) J
    double X_norm = 0;     // ||T f||_{X_rho0}
    double Y_norm = 0;     // ||f||_{Y_rho0}
};
ResolventResult apply_resolvent_T(const ExteriorBasis& B, const std::function<double(double)>& f,
                                  double rho0);

// Weighted norms of Eq-(X_rho_0) type, evaluated discretely on the
// computation mesh for (rho0, rho_max):
//   X: sup_{rho0<=rho<=1} rho^{d/2-1}|f| + sup_{rho>=1} rho^{alpha+1}|f|
//   Y: int_{rho0}^{1} rho^{d/2}|1-rho|^{1/2-s_c}|f| + int_1^inf rho^{(d-1)/2}|1-rho|^{1/2-s_c}|f|
double norm_X(const ExteriorBasis& B, const std::function<double(double)>& f, double rho0);
double norm_Y(const ExteriorBasis& B, const std::function<double(double)>& f, double rho0);

struct ExteriorSolution {
    Parameters par;
    double eps = 0, rho0 = 0, rho_max = 0;
    RadialFunction w, lam_w; // on (rho0, rho_max)
    RadialFunction deps_w;   // dw/deps at eps=0 = -p(p-1)/2 T(u_inf^{p-2} psi1^2)
    double w_X = 0, lam_w_X = 0, deps_w_X = 0;
    double fp_residual_X = 0;        // X-norm of one extra Picard application
    std::vector<double> increments;  // X-norm Picard increments
    double contraction = 0;          // max observed increment ratio
};

// Picard iteration of  w = -p(p-1) eps T(G[psi1,eps] w)  from w=0, where
// G = (psi1+w)^2 int_0^1 (1-s)(u_inf + s eps (psi1+w))^{p-2} ds.  Requires
// |eps| <= kappa rho0^{s_c-1} (eps=0 returns w=0); throws when the iteration
// fails to contract.
ExteriorSolution solve_exterior(const Parameters& P, const ExteriorBasis& B, double eps,
                                double rho0);

} // namespace ssw
