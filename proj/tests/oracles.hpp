#pragma once
// Independent slow-but-sure reference implementations used only by tests.

#include <complex>

#include "ssw/params.hpp"

namespace ssw::oracle {

// Brute-force Gauss series: fixed 400 terms, compensated (Kahan) summation.
inline std::complex<double> hyp2f1_brute(std::complex<double> a, std::complex<double> b,
                                         std::complex<double> c, std::complex<double> z) {
    std::complex<double> term = 1.0, sum = 0.0, comp = 0.0;
    for (int n = 0; n < 400; ++n) {
        const std::complex<double> y = term - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= (a + static_cast<double>(n)) * (b + static_cast<double>(n)) * z /
                ((c + static_cast<double>(n)) * static_cast<double>(n + 1));
    }
    return sum;
}

// residual of the frozen-coefficient exterior operator applied to a function
// given (u, u', u'') at rho
inline double L_inf_residual(const ssw::Parameters& P, double rho, double u, double du,
                             double d2u) {
    return (1.0 - rho * rho) * d2u +
           ((P.d - 1.0) / rho - 2.0 * (1.0 + P.alpha) * rho) * du -
           P.alpha * (1.0 + P.alpha) * u + P.pot_coeff / (rho * rho) * u;
}

// residual of the shifted-index operator in sector m with shift R (no potential)
inline double L_shift_residual(const ssw::Parameters& P, double R, int m, double rho, double u,
                               double du, double d2u) {
    const double K = P.alpha + R;
    const double lam = lambda_sector(m, P.d);
    return (1.0 - rho * rho) * d2u + ((P.d - 1.0) / rho - 2.0 * (K + 1.0) * rho) * du -
           lam / (rho * rho) * u - K * (K + 1.0) * u;
}

} // namespace ssw::oracle
