#include "ssw/params.hpp"

#include <cmath>
#include <limits>

namespace ssw {

Parameters derive_parameters(int d, double p) {
    if (d < 3)
        throw std::invalid_argument("derive_parameters: need d >= 3, got d=" + std::to_string(d));
    if (!std::isfinite(p) || p <= 1.0)
        throw std::invalid_argument("derive_parameters: need finite p > 1, got p=" + std::to_string(p));

    Parameters P;
    P.d = d;
    P.p = p;
    P.alpha = 2.0 / (p - 1.0);
    P.s_c = 0.5 * d - P.alpha;

    const double bpm1 = P.alpha * (d - 2 - P.alpha); // b_inf^{p-1}
    if (bpm1 <= 0.0)
        throw std::invalid_argument("derive_parameters: alpha*(d-2-alpha) <= 0; no positive singular solution");
    P.b_inf = std::pow(bpm1, 1.0 / (p - 1.0));
    P.pot_coeff = p * bpm1;

    const double disc = P.pot_coeff - 0.25 * (d - 2.0) * (d - 2.0);
    P.omega = disc > 0.0 ? std::sqrt(disc) : std::numeric_limits<double>::quiet_NaN();

    if (d <= 10) {
        P.p_JL = std::numeric_limits<double>::infinity();
    } else {
        P.p_JL = 1.0 + 4.0 / (d - 4.0 - 2.0 * std::sqrt(d - 1.0));
    }

    P.admissible_regime = (P.s_c > 1.0 && P.s_c < 1.5);
    P.radial_stability = (d == 3 && p > 5.0) || (d == 4 && p > 4.0 && p < 5.0);
    P.nonradial_stability = (d == 3 && p > 6.0);

    // self-check: u = b_inf rho^{-alpha} must satisfy the profile equation
    for (double rho : {0.5, 2.0, 7.0}) {
        const double u = P.b_inf * std::pow(rho, -P.alpha);
        const double du = -P.alpha * u / rho;
        const double d2u = P.alpha * (P.alpha + 1.0) * u / (rho * rho);
        const double res = (1.0 - rho * rho) * d2u + ((d - 1.0) / rho - 2.0 * (1.0 + P.alpha) * rho) * du -
                           P.alpha * (1.0 + P.alpha) * u + std::pow(u, p);
        if (std::abs(res) > 1e-12 * (std::abs(u) + 1.0) * (1.0 + rho * rho))
            throw std::logic_error("derive_parameters: singular-solution self-check failed");
    }
    return P;
}

double lambda_sector(int m, int d) {
    if (m < 0)
        throw std::invalid_argument("lambda_sector: m >= 0 required");
    return static_cast<double>(m) * (m + d - 2);
}

double signed_pow(double u, double q) {
    if (u == 0.0)
        return 0.0;
    return u > 0.0 ? std::pow(u, q) : -std::pow(-u, q);
}

double sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

} // namespace ssw
