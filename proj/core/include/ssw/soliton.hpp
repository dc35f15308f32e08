#pragma once
// Static soliton on the whole space: solves Delta Q + Q^p = 0 from the origin,
// produces the scaling mode Lambda Q = alpha Q + rho Q', the second solution of
// its linearization by reduction of order, the tail constant, and the
// oscillation phases / zero structure used by the gluing construction.

#include <vector>

#include "ssw/numerics.hpp"
#include "ssw/params.hpp"

namespace ssw {

struct GridSpec {
    double rho_min = 1e-3;
    double rho_max = 1e3;
    int n = 4096; // log-spaced samples
};

struct OscillationFit {
    double A = 0;     // amplitude of the rho^{1-d/2} envelope
    double delta = 0; // phase in (-pi, pi]
    double resid = 0; // rms residual relative to A
};

struct SolitonProfile {
    Parameters par;
    double q0 = 1.0; // origin normalization Q(0)
    RadialFunction Q, LamQ, phi;
    double b_extracted = 0;  // tail fit of rho^alpha Q
    OscillationFit osc_Q;    // of rho^{d/2-1}(Q - u_inf)
    OscillationFit osc_LamQ; // of rho^{d/2-1} Lambda Q
    OscillationFit osc_phi;  // of rho^{d/2-1} phi
    std::vector<double> lamQ_zeros;
    double R0 = 0; // reduction-of-order switch radius (inside the first zero)
};

// singular stationary state b_inf rho^{-alpha}
double u_inf(const Parameters& P, double rho);

// Least-squares fit of rho^{d/2-1} f(rho) to A sin(omega log rho + delta) on a
// log-spaced window; throws when the residual exceeds 10% of the amplitude.
OscillationFit extract_oscillation_phase(const std::function<double(double)>& f,
                                         const Parameters& P, double win_lo, double win_hi,
                                         int n_samples = 600);

// Same, with the slowly decaying correction ladder included in the fit basis
// so the leading phase converges at moderate radii: order j of the envelope
// rho^{j(1-s_c)} carries harmonics m*omega with m = j+1 (mod 2), m <= j+1.
// Orders above 2 are nearly collinear on windows shorter than one oscillation
// period; for high-accuracy phases of the soliton tail use match_tail_expansion.
OscillationFit extract_oscillation_phase_refined(const std::function<double(double)>& f,
                                                 const Parameters& P, double win_lo,
                                                 double win_hi, int n_samples = 600,
                                                 int order = 2);

// Asymptotic matching for tails of the soliton family itself: the expansion of
// rho^{d/2-1}(Q - u_inf) in powers of rho^{1-s_c} is generated order by order
// from the equation, leaving only the leading (pc, ps) free; Gauss-Newton fits
// those two parameters.  Stable under window changes because the model is
// complete to the truncation order (default 8).  f must be Q - u_inf for some
// solution decaying to u_inf.
struct TailMatch {
    OscillationFit osc;
    double pc = 0, ps = 0; // leading cos/sin coefficients of the ladder
};
TailMatch match_tail_expansion(const std::function<double(double)>& f, const Parameters& P,
                               double win_lo, double win_hi, int n_samples = 600, int order = 8);

// Same idea for solutions of the linearization around Q (phi, Lambda Q): their
// expansion is a linear ladder driven by the soliton's, pinned by the leading
// (pc, ps) of Q - u_inf from match_tail_expansion.
TailMatch match_linearized_tail(const std::function<double(double)>& f, const Parameters& P,
                                double pc, double ps, double win_lo, double win_hi,
                                int n_samples = 600, int order = 8);

// Tail constant: fits rho^alpha Q to level + rho^{1-s_c} Y(log rho; pc, ps)
// with Y the generated ladder; returns the level.
double fit_tail_constant(const std::function<double(double)>& q, const Parameters& P,
                         double win_lo, double win_hi, int n_samples = 600, int order = 8);

// Solves the soliton equation with Q(0) = q0, Q'(0) = 0 and fills every field.
// Throws if Q blows up before rho_max (inadmissible regime).
SolitonProfile solve_soliton(const Parameters& P, const GridSpec& g = {}, double q0 = 1.0);

// Second solution of the linearized operator H_inf = -Delta - p Q^{p-1}:
// reduction of order against Lambda Q on [rho_min, R0], continued by direct
// integration beyond.  Wronskian (LamQ)' phi - phi' LamQ = rho^{1-d}.
// R0 must lie strictly inside the first zero of Lambda Q.
RadialFunction second_solution_phi(const SolitonProfile& S, double R0);

} // namespace ssw
