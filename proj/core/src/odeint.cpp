#include "ssw/odeint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssw {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct State {
    double y[2];
};

inline void deriv(const Ode2& f, double t, const State& s, State& k) {
    k.y[0] = s.y[1];
    k.y[1] = f(t, s.y[0], s.y[1]);
}

} // namespace

double Trajectory::eval(double t, int comp) const {
    if (segs_.empty()) throw std::logic_error("Trajectory: empty");
    const bool fwd = t1_ >= t0_;
    const double tc = fwd ? std::clamp(t, t0_, t1_) : std::clamp(t, t1_, t0_);
    // binary search for the segment containing tc
    std::size_t lo = 0, hi = segs_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        const bool before = fwd ? (segs_[mid].t0 <= tc) : (segs_[mid].t0 >= tc);
        if (before)
            lo = mid;
        else
            hi = mid - 1;
    }
    const Seg& s = segs_[lo];
    const double th = std::clamp((tc - s.t0) / s.h, 0.0, 1.0);
    const auto& rc = s.rc;
    const double om = 1.0 - th;
    return rc[0][comp] +
           th * (rc[1][comp] + om * (rc[2][comp] + th * (rc[3][comp] + om * rc[4][comp])));
}

double Trajectory::u_end() const { return eval(t1_, 0); }
double Trajectory::du_end() const { return eval(t1_, 1); }

Trajectory integrate_adaptive(const Ode2& f, double t0, double t1, double u0, double du0,
                              const OdeOptions& opt) {
    Trajectory traj;
    traj.t0_ = t0;
    traj.t1_ = t1;
    if (t0 == t1) throw std::invalid_argument("integrate_adaptive: empty span");
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = (opt.hmax > 0) ? opt.hmax : span;

    State y{{u0, du0}};
    State k1, k2, k3, k4, k5, k6, k7, yt, y1;
    deriv(f, t0, y, k1);
    double h = (opt.h0 > 0) ? opt.h0 : std::min(hmax, 1e-3 * span + 1e-12);
    double t = t0;

    for (int step = 0; step < opt.max_steps; ++step) {
        if (dir * (t - t1) >= 0) break;
        h = std::min(h, hmax);
        if (dir * (t + dir * h - t1) > 0) h = std::abs(t1 - t);
        if (h < 1e-14 * (std::abs(t) + 1.0))
            throw std::runtime_error("integrate_adaptive: step-size underflow");
        const double hs = dir * h;

        for (int i = 0; i < 2; ++i) yt.y[i] = y.y[i] + hs * a21 * k1.y[i];
        deriv(f, t + c2 * hs, yt, k2);
        for (int i = 0; i < 2; ++i) yt.y[i] = y.y[i] + hs * (a31 * k1.y[i] + a32 * k2.y[i]);
        deriv(f, t + c3 * hs, yt, k3);
        for (int i = 0; i < 2; ++i)
            yt.y[i] = y.y[i] + hs * (a41 * k1.y[i] + a42 * k2.y[i] + a43 * k3.y[i]);
        deriv(f, t + c4 * hs, yt, k4);
        for (int i = 0; i < 2; ++i)
            yt.y[i] =
                y.y[i] + hs * (a51 * k1.y[i] + a52 * k2.y[i] + a53 * k3.y[i] + a54 * k4.y[i]);
        deriv(f, t + c5 * hs, yt, k5);
        for (int i = 0; i < 2; ++i)
            yt.y[i] = y.y[i] + hs * (a61 * k1.y[i] + a62 * k2.y[i] + a63 * k3.y[i] +
                                     a64 * k4.y[i] + a65 * k5.y[i]);
        deriv(f, t + hs, yt, k6);
        for (int i = 0; i < 2; ++i)
            y1.y[i] = y.y[i] + hs * (b1 * k1.y[i] + b3 * k3.y[i] + b4 * k4.y[i] + b5 * k5.y[i] +
                                     b6 * k6.y[i]);
        deriv(f, t + hs, y1, k7);

        double errn = 0;
        bool finite = true;
        for (int i = 0; i < 2; ++i) {
            const double e = hs * (e1 * k1.y[i] + e3 * k3.y[i] + e4 * k4.y[i] + e5 * k5.y[i] +
                                   e6 * k6.y[i] + e7 * k7.y[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y.y[i]), std::abs(y1.y[i]));
            errn += (e / sc) * (e / sc);
            finite = finite && std::isfinite(y1.y[i]) && std::isfinite(k7.y[i]);
        }
        const double err = std::sqrt(errn / 2.0);
        if (!finite || !std::isfinite(err)) {
            // overflowing trial step: reject and shrink (underflow guard above
            // still terminates if the state is non-finite at every scale)
            h = 0.25 * std::abs(hs);
            continue;
        }

        if (err <= 1.0) {
            Trajectory::Seg seg;
            seg.t0 = t;
            seg.h = hs;
            for (int i = 0; i < 2; ++i) {
                const double ydiff = y1.y[i] - y.y[i];
                const double bspl = hs * k1.y[i] - ydiff;
                seg.rc[0][i] = y.y[i];
                seg.rc[1][i] = ydiff;
                seg.rc[2][i] = bspl;
                seg.rc[3][i] = ydiff - hs * k7.y[i] - bspl;
                seg.rc[4][i] = hs * (d1 * k1.y[i] + d3 * k3.y[i] + d4 * k4.y[i] + d5 * k5.y[i] +
                                     d6 * k6.y[i] + d7 * k7.y[i]);
            }
            traj.segs_.push_back(seg);
            t += hs;
            y = y1;
            k1 = k7; // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h = std::abs(hs) * fac;
        if (dir * (t - t1) >= 0) break;
    }
    if (dir * (t - t1) < 0)
        throw std::runtime_error("integrate_adaptive: max step count exceeded");
    return traj;
}

// ---------------------------------------------------------------------------

LocalODE reflect(const LocalODE& ode) {
    LocalODE r = ode;
    for (std::size_t k = 0; k < r.P.size(); ++k)
        if (k % 2) r.P[k] = -r.P[k];
    for (std::size_t k = 0; k < r.S.size(); ++k)
        if (k % 2 == 0) r.S[k] = -r.S[k];
    for (std::size_t k = 0; k < r.R.size(); ++k)
        if (k % 2) r.R[k] = -r.R[k];
    for (std::size_t k = 0; k < r.F.size(); ++k)
        if (k % 2) r.F[k] = -r.F[k];
    return r;
}

int singular_lead(const LocalODE& ode) {
    const double scale = [&] {
        double m = 0;
        for (double v : ode.P) m = std::max(m, std::abs(v));
        return m + 1e-300;
    }();
    for (int k = 0; k < static_cast<int>(ode.P.size()); ++k)
        if (std::abs(ode.P[k]) > 1e-14 * scale) return k;
    throw std::invalid_argument("singular_lead: P identically zero");
}

std::array<double, 2> indicial_roots(const LocalODE& ode) {
    const int lead = singular_lead(ode);
    auto at = [](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? v[i] : 0.0;
    };
    if (lead == 1) {
        // P1 s(s-1) + S0 s = 0
        const double P1 = ode.P[1], S0 = at(ode.S, 0);
        return {0.0, 1.0 - S0 / P1};
    }
    if (lead == 2) {
        // P2 s(s-1) + S1 s + R0 = 0
        const double P2 = ode.P[2], S1 = at(ode.S, 1), R0 = at(ode.R, 0);
        const double bq = S1 / P2 - 1.0, cq = R0 / P2;
        const double disc = bq * bq - 4.0 * cq;
        if (disc < 0) throw std::runtime_error("indicial_roots: complex exponents");
        const double rt = std::sqrt(disc);
        return {(-bq - rt) / 2.0, (-bq + rt) / 2.0};
    }
    throw std::invalid_argument("indicial_roots: not a singular equation");
}

double FrobeniusBranch::u(double t) const {
    double s = 0;
    for (std::size_t k = a.size(); k-- > 0;) s = s * t + a[k];
    return s * std::pow(t, sigma);
}

double FrobeniusBranch::du(double t) const {
    double s = 0;
    for (std::size_t k = a.size(); k-- > 0;) s = s * t + a[k] * (sigma + k);
    return s * std::pow(t, sigma - 1.0);
}

double FrobeniusBranch::d2u(double t) const {
    double s = 0;
    for (std::size_t k = a.size(); k-- > 0;)
        s = s * t + a[k] * (sigma + k) * (sigma + k - 1.0);
    return s * std::pow(t, sigma - 2.0);
}

FrobeniusBranch frobenius_branch(const LocalODE& ode, double sigma, double a0, int order) {
    const int lead = singular_lead(ode);
    auto at = [](const std::vector<double>& v, int i) {
        return (i >= 0 && i < static_cast<int>(v.size())) ? v[i] : 0.0;
    };
    bool has_F = false;
    for (double v : ode.F) has_F = has_F || v != 0.0;
    const bool sigma_int = std::abs(sigma - std::round(sigma)) < 1e-12 && sigma >= -1e-12;
    if (has_F && !sigma_int)
        throw std::invalid_argument("frobenius_branch: inhomogeneous term needs integer sigma");

    double cscale = 1.0;
    for (double v : ode.P) cscale = std::max(cscale, std::abs(v));
    for (double v : ode.S) cscale = std::max(cscale, std::abs(v));
    for (double v : ode.R) cscale = std::max(cscale, std::abs(v));

    FrobeniusBranch br;
    br.sigma = sigma;
    br.a.assign(order + 1, 0.0);
    br.a[0] = a0;
    // equation E_q (coefficient of t^{sigma-2+q}):
    //   sum_{j+k=q} P_j (k+s)(k+s-1) a_k + sum_{j+k=q-1} S_j (k+s) a_k
    //   + sum_{j+k=q-2} R_j a_k = F_{q+sigma-2}
    // determines a_{q-lead}; the q <= lead equations are the indicial relations.
    for (int q = lead + 1; q - lead <= order; ++q) {
        const int kk = q - lead; // index being determined
        double rhs = has_F ? at(ode.F, q + static_cast<int>(std::round(sigma)) - 2) : 0.0;
        double denom = 0;
        for (int k = 0; k <= kk; ++k) {
            const double s = sigma + k;
            const double coef = at(ode.P, q - k) * s * (s - 1.0) + at(ode.S, q - 1 - k) * s +
                                at(ode.R, q - 2 - k);
            if (k == kk)
                denom = coef;
            else
                rhs -= coef * br.a[k];
        }
        if (std::abs(denom) < 1e-9 * cscale * (kk + 1.0 + std::abs(sigma)))
            throw std::runtime_error(
                "frobenius_branch: resonance (companion exponent differs by integer " +
                std::to_string(kk) + ")");
        br.a[kk] = rhs / denom;
    }
    return br;
}

Trajectory integrate_regular_singular(const SingularSeed& seed, const Ode2& f, double target,
                                      const OdeOptions& opt) {
    const FrobeniusBranch br = frobenius_branch(seed.local, seed.sigma, seed.a0, seed.order);
    const double t = seed.h_seed;
    const double x_start = seed.x_s + seed.dir * t;
    const double u0 = br.u(t);
    const double du0 = seed.dir * br.du(t);
    if ((seed.dir > 0 && target <= x_start) || (seed.dir < 0 && target >= x_start))
        throw std::invalid_argument("integrate_regular_singular: target on wrong side");
    return integrate_adaptive(f, x_start, target, u0, du0, opt);
}

// ---------------------------------------------------------------------------

SignCount count_sign_changes_flagged(const std::vector<double>& f, double zero_tol) {
    SignCount out;
    out.changes = count_sign_changes(f, zero_tol);
    if (!f.empty())
        out.boundary_plateau =
            std::abs(f.front()) <= zero_tol || std::abs(f.back()) <= zero_tol;
    return out;
}

int stable_sign_change_count(const std::function<double(double)>& f, double lo, double hi,
                             int n0, double zero_tol_rel, bool log_grid) {
    int prev = -1, stable = 0;
    for (int n = n0; n <= (1 << 22); n *= 2) {
        const auto grid = log_grid ? log_spaced(lo, hi, n) : lin_spaced(lo, hi, n);
        std::vector<double> vals(grid.size());
        double amax = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            vals[i] = f(grid[i]);
            amax = std::max(amax, std::abs(vals[i]));
        }
        const int c = count_sign_changes(vals, zero_tol_rel * amax);
        if (c == prev) {
            if (++stable >= 2) return c;
        } else {
            stable = 0;
        }
        prev = c;
    }
    return prev;
}

} // namespace ssw
