#pragma once
// Closed-form constants of the focusing energy-supercritical wave problem
// Phi_tt - ΔPhi = |Phi|^{p-1} Phi in d space dimensions, and of its self-similar
// profile equation in the similarity coordinate rho = |x|/(T-t).

#include <stdexcept>
#include <string>

namespace ssw {

struct Parameters {
    int d = 3;          // spatial dimension
    double p = 7.0;     // nonlinearity exponent

    double alpha = 0;   // 2/(p-1), self-similar amplitude exponent
    double s_c = 0;     // d/2 - 2/(p-1), critical Sobolev regularity
    double b_inf = 0;   // amplitude of the exact singular solution b_inf * rho^{-alpha}
    double omega = 0;   // sqrt(p b_inf^{p-1} - (d-2)^2/4), log-oscillation frequency
    double pot_coeff = 0; // p * b_inf^{p-1}, rho^{-2} potential strength at u_inf
    double p_JL = 0;    // Joseph-Lundgren exponent (inf for d <= 10)

    bool admissible_regime = false;   // 1 < s_c < 3/2
    bool radial_stability = false;    // d=3,p>5 or d=4,4<p<5
    bool nonradial_stability = false; // d=3,p>6
};

// Derives all constants from (d, p).  Throws std::invalid_argument for inputs
// outside the supercritical family (d < 3, p <= 1, or non-finite p).
Parameters derive_parameters(int d, double p);

// Spherical-harmonic sector eigenvalue m(m+d-2) of -Δ_{S^{d-1}}.
double lambda_sector(int m, int d);

// Odd power: sign(u) |u|^q.  Used for |u|^{p-1} u with non-integer p.
double signed_pow(double u, double q);

// Surface measure of the unit sphere S^{d-1}.
double sphere_area(int d);

} // namespace ssw
