#pragma once
// Second-order radial ODE integration: adaptive embedded Runge-Kutta with
// dense output, plus Frobenius series seeding through regular singular points
// (the origin and the sonic radius), and stabilized sign-change counting.

#include <array>
#include <functional>
#include <vector>

#include "ssw/numerics.hpp"

namespace ssw {

// scalar second-order ODE: returns u'' given (x, u, u')
using Ode2 = std::function<double(double x, double u, double du)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h0 = 0;   // 0: choose automatically
    double hmax = 0; // 0: span
    int max_steps = 2000000;
};

// Dense-output trajectory of (u, u') between t_begin and t_end (direction of
// integration preserved; evaluation clamps to the covered interval).
class Trajectory {
public:
    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    double u(double t) const { return eval(t, 0); }
    double du(double t) const { return eval(t, 1); }
    double u_end() const;
    double du_end() const;
    std::size_t n_steps() const { return segs_.size(); }

private:
    struct Seg {
        double t0, h;
        std::array<std::array<double, 2>, 5> rc; // dense-output coefficients per component
    };
    double eval(double t, int comp) const;
    std::vector<Seg> segs_;
    double t0_ = 0, t1_ = 0;
    friend Trajectory integrate_adaptive(const Ode2&, double, double, double, double,
                                         const OdeOptions&);
};

// Dormand-Prince 5(4) with quartic dense output; t1 < t0 integrates backward.
Trajectory integrate_adaptive(const Ode2& f, double t0, double t1, double u0, double du0,
                              const OdeOptions& opt = {});

// ---------------------------------------------------------------------------
// Local series description of P(t) u'' + S(t) u' + R(t) u = F(t) about t = 0,
// with Taylor coefficient arrays.  P may vanish to order 0 (regular point),
// 1 (sonic-type singularity), or 2 (origin-type singularity).
struct LocalODE {
    std::vector<double> P, S, R, F;
};

// same equation in the reflected variable tau = -t
LocalODE reflect(const LocalODE& ode);

// order of vanishing of P at 0 (0, 1, or 2)
int singular_lead(const LocalODE& ode);

// indicial exponents of the singular equation (lead 1 or 2)
std::array<double, 2> indicial_roots(const LocalODE& ode);

// One Frobenius branch u = t^sigma sum a_k t^k with a_0 prescribed.  For the
// inhomogeneous case sigma must be a non-negative integer so powers align.
// Throws on resonance: a recurrence denominator vanishes, i.e. the companion
// exponent exceeds sigma by a positive integer <= order.
struct FrobeniusBranch {
    double sigma = 0;
    std::vector<double> a;
    double u(double t) const;
    double du(double t) const;
    double d2u(double t) const;
};
FrobeniusBranch frobenius_branch(const LocalODE& ode, double sigma, double a0, int order);

// Seed for continuing a Frobenius branch away from a singular point.  `local`
// is expressed in t = dir*(x - x_s) so t >= 0 on the side being integrated.
struct SingularSeed {
    double x_s = 0;
    int dir = +1;
    LocalODE local;
    double sigma = 0;
    double a0 = 1;
    int order = 12;
    double h_seed = 1e-3;
};
Trajectory integrate_regular_singular(const SingularSeed& seed, const Ode2& f, double target,
                                      const OdeOptions& opt = {});

// ---------------------------------------------------------------------------
struct SignCount {
    int changes = 0;
    bool boundary_plateau = false; // first or last sample within zero_tol of 0
};
SignCount count_sign_changes_flagged(const std::vector<double>& f, double zero_tol);

// Doubles the sampling density until the count of sign changes of f on
// [lo, hi] is unchanged twice in a row.
int stable_sign_change_count(const std::function<double(double)>& f, double lo, double hi,
                             int n0 = 256, double zero_tol_rel = 1e-9, bool log_grid = false);

} // namespace ssw
