#pragma once
// Gauss hypergeometric series and the explicit fundamental-solution bases of
// the frozen-coefficient wave operators: an oscillatory pair on (0,1), a
// power-decay pair on (1,inf), and the shifted-index exterior pair used by the
// resolvent construction for general spherical-harmonic sectors.

#include <complex>

#include "ssw/params.hpp"

namespace ssw {

using cplx = std::complex<double>;

inline constexpr double kHypZMax = 0.75; // series reliability radius

struct HypParams {
    cplx a, b, c;
    cplx z;
    double tol = 1e-14;
    int max_terms = 10000;
    double z_max = kHypZMax;
};

struct HypResult {
    cplx value{};
    cplx dvalue{}; // dF/dz
    double err = 0; // relative tail estimate
    int terms = 0;
};

// Power series at z=0 with term recurrence; throws std::domain_error when c is
// within 1e-9 of a non-positive integer or |z| > z_max, std::runtime_error when
// the tail has not dropped below tol within max_terms.
HypResult hyp2f1_full(const HypParams& hp);
cplx hyp2f1(const HypParams& hp);

enum class BasisRegion { Left, Right };

struct BasisEval {
    double v1 = 0, dv1 = 0; // first member and its d/drho
    double v2 = 0, dv2 = 0; // second member
    BasisRegion region = BasisRegion::Left;
};

// Oscillatory pair on rho in (0,1): real and imaginary parts of
// rho^{1-d/2+i omega} 2F1((1-s_c+i omega)/2, (2-s_c+i omega)/2; 1+i omega; rho^2).
// Requires rho^2 <= z_max.
BasisEval eval_basis_left(const Parameters& P, double rho);

// Pair on rho in (1,inf) with v1 ~ rho^{-alpha-1}, v2 ~ rho^{-alpha}; requires
// rho^{-2} <= z_max.
BasisEval eval_basis_right(const Parameters& P, double rho);

// Exterior pair for the index-shifted linear operator in sector m with shift R
// (K = alpha + R): phi1 ~ rho^{-K-1}, phi2 ~ rho^{-K}; requires rho^{-2} <= z_max.
BasisEval eval_basis_linear(const Parameters& P, double R, int m, double rho);

} // namespace ssw
