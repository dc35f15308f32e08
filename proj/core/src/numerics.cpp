#include "ssw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ssw {

std::vector<double> lin_spaced(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("lin_spaced: n >= 2 required");
    std::vector<double> v(n);
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + h * i;
    v.back() = hi;
    return v;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (lo <= 0 || hi <= 0) throw std::invalid_argument("log_spaced: positive endpoints required");
    auto v = lin_spaced(std::log(lo), std::log(hi), n);
    for (auto& x : v) x = std::exp(x);
    v.front() = lo;
    v.back() = hi;
    return v;
}

// ---------------------------------------------------------------------------

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != dy_.size())
        throw std::invalid_argument("CubicHermite: inconsistent node arrays");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicHermite: nodes not increasing");
}

std::size_t CubicHermite::locate(double xq) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicHermite::eval(double xq) const {
    const std::size_t i = locate(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
}

double CubicHermite::deriv(double xq) const {
    const std::size_t i = locate(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * dy_[i] + g01 * y_[i + 1] + g11 * dy_[i + 1];
}

// ---------------------------------------------------------------------------

RadialFunction::RadialFunction(std::vector<double> rho, std::vector<double> u,
                               std::vector<double> du, std::vector<double> d2u)
    : grid_(std::move(rho)), val_(std::move(u)), der_(std::move(du)), der2_(std::move(d2u)),
      h1_(grid_, val_, der_), h2_(grid_, der_, der2_) {}

// ---------------------------------------------------------------------------

static GaussRule make_gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    // Newton iteration on P_n, initial guesses from Chebyshev-like nodes
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------

void QuadMesh::add_region(double a, double b, int ncells, CellMap map, double q) {
    if (!(b > a) || ncells < 1) throw std::invalid_argument("QuadMesh: bad region");
    if (!cells_.empty() && std::abs(cells_.back().rb - a) > 1e-12 * std::max(1.0, std::abs(a)))
        throw std::invalid_argument("QuadMesh: regions must be contiguous");
    std::vector<double> edges;
    switch (map) {
        case CellMap::Linear: edges = lin_spaced(a, b, ncells + 1); break;
        case CellMap::Log: edges = log_spaced(a, b, ncells + 1); break;
        case CellMap::SigmaLeft: {
            // uniform in sigma = (1-rho)^{1/q}; increasing rho = decreasing sigma
            const double s_hi = std::pow(1.0 - a, 1.0 / q), s_lo = std::pow(std::max(0.0, 1.0 - b), 1.0 / q);
            auto se = lin_spaced(s_lo, s_hi, ncells + 1);
            edges.resize(ncells + 1);
            for (int i = 0; i <= ncells; ++i) edges[i] = 1.0 - std::pow(se[ncells - i], q);
            edges.front() = a;
            edges.back() = b;
            break;
        }
        case CellMap::SigmaRight: {
            const double s_lo = std::pow(std::max(0.0, a - 1.0), 1.0 / q), s_hi = std::pow(b - 1.0, 1.0 / q);
            auto se = lin_spaced(s_lo, s_hi, ncells + 1);
            edges.resize(ncells + 1);
            for (int i = 0; i <= ncells; ++i) edges[i] = 1.0 + std::pow(se[i], q);
            edges.front() = a;
            edges.back() = b;
            break;
        }
    }
    for (int i = 0; i < ncells; ++i) cells_.push_back({edges[i], edges[i + 1], map, q});
}

// nodes/weights for integrating over [ra, rb] of one cell (rb may be clipped);
// d1 carries |1-rho| computed without cancellation
static void cell_rule(const QuadCell& c, double ra, double rb, int npc,
                      std::vector<double>& r, std::vector<double>& d1,
                      std::vector<double>& w) {
    const GaussRule& g = gauss_legendre(npc);
    r.resize(npc);
    d1.resize(npc);
    w.resize(npc);
    switch (c.map) {
        case CellMap::Linear: {
            const double mid = 0.5 * (ra + rb), half = 0.5 * (rb - ra);
            for (int j = 0; j < npc; ++j) {
                r[j] = mid + half * g.x[j];
                d1[j] = std::abs(1.0 - r[j]);
                w[j] = half * g.w[j];
            }
            break;
        }
        case CellMap::Log: {
            const double ta = std::log(ra), tb = std::log(rb);
            const double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
            for (int j = 0; j < npc; ++j) {
                r[j] = std::exp(mid + half * g.x[j]);
                d1[j] = std::abs(1.0 - r[j]);
                w[j] = half * g.w[j] * r[j];
            }
            break;
        }
        case CellMap::SigmaLeft: {
            const double sa = std::pow(std::max(0.0, 1.0 - rb), 1.0 / c.q);
            const double sb = std::pow(1.0 - ra, 1.0 / c.q);
            const double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
            for (int j = 0; j < npc; ++j) {
                // reversed so rho ascends with j
                const double s = mid + half * g.x[npc - 1 - j];
                d1[j] = std::pow(s, c.q);
                r[j] = 1.0 - d1[j];
                w[j] = half * g.w[npc - 1 - j] * c.q * std::pow(s, c.q - 1.0);
            }
            break;
        }
        case CellMap::SigmaRight: {
            const double sa = std::pow(std::max(0.0, ra - 1.0), 1.0 / c.q);
            const double sb = std::pow(rb - 1.0, 1.0 / c.q);
            const double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
            for (int j = 0; j < npc; ++j) {
                const double s = mid + half * g.x[j];
                d1[j] = std::pow(s, c.q);
                r[j] = 1.0 + d1[j];
                w[j] = half * g.w[j] * c.q * std::pow(s, c.q - 1.0);
            }
            break;
        }
    }
}

void QuadMesh::finalize(int nodes_per_cell) {
    npc_ = nodes_per_cell;
    node_r_.clear();
    node_w_.clear();
    node_d1_.clear();
    node_r_.reserve(cells_.size() * npc_);
    node_w_.reserve(cells_.size() * npc_);
    node_d1_.reserve(cells_.size() * npc_);
    std::vector<double> r, d1, w;
    for (const auto& c : cells_) {
        cell_rule(c, c.ra, c.rb, npc_, r, d1, w);
        node_r_.insert(node_r_.end(), r.begin(), r.end());
        node_d1_.insert(node_d1_.end(), d1.begin(), d1.end());
        node_w_.insert(node_w_.end(), w.begin(), w.end());
    }
}

std::size_t QuadMesh::cell_of(double rho) const {
    if (rho <= cells_.front().ra) return 0;
    if (rho >= cells_.back().rb) return cells_.size() - 1;
    std::size_t lo = 0, hi = cells_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cells_[mid].rb < rho)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

void QuadMesh::partial_cell(std::size_t k, double rho_end, std::vector<double>& r,
                            std::vector<double>& d1, std::vector<double>& w) const {
    const QuadCell& c = cells_[k];
    const double rb = std::min(rho_end, c.rb);
    if (!(rb > c.ra)) {
        r.clear();
        d1.clear();
        w.clear();
        return;
    }
    cell_rule(c, c.ra, rb, npc_, r, d1, w);
}

// ---------------------------------------------------------------------------

MeshIntegral::MeshIntegral(const QuadMesh* mesh, WeightedFn g) : mesh_(mesh), g_(std::move(g)) {
    const auto& cells = mesh_->cells();
    const auto& r = mesh_->nodes();
    const auto& d1 = mesh_->dist1();
    const auto& w = mesh_->weights();
    const int npc = mesh_->nodes_per_cell();
    prefix_.assign(cells.size() + 1, 0.0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        double s = 0;
        for (int j = 0; j < npc; ++j) {
            const std::size_t idx = k * npc + j;
            s += w[idx] * g_(r[idx], d1[idx]);
        }
        prefix_[k + 1] = prefix_[k] + s;
    }
}

MeshIntegral::MeshIntegral(const QuadMesh* mesh, std::function<double(double)> g)
    : MeshIntegral(mesh, WeightedFn([g = std::move(g)](double r, double) { return g(r); })) {}

double MeshIntegral::upto(double rho) const {
    if (rho <= mesh_->lo()) return 0.0;
    if (rho >= mesh_->hi()) return prefix_.back();
    const std::size_t k = mesh_->cell_of(rho);
    std::vector<double> r, d1, w;
    mesh_->partial_cell(k, rho, r, d1, w);
    double s = prefix_[k];
    for (std::size_t j = 0; j < r.size(); ++j) s += w[j] * g_(r[j], d1[j]);
    return s;
}

// ---------------------------------------------------------------------------

// map coordinate of rho in [-1,1] matching cell_rule's node layout; for
// SigmaLeft cells rho ascends while sigma descends, handled by the caller
static double cell_x(const QuadCell& c, double rho) {
    switch (c.map) {
        case CellMap::Linear: return (2.0 * rho - c.ra - c.rb) / (c.rb - c.ra);
        case CellMap::Log: {
            const double ta = std::log(c.ra), tb = std::log(c.rb);
            return (2.0 * std::log(rho) - ta - tb) / (tb - ta);
        }
        case CellMap::SigmaLeft: {
            const double sa = std::pow(std::max(0.0, 1.0 - c.rb), 1.0 / c.q);
            const double sb = std::pow(1.0 - c.ra, 1.0 / c.q);
            const double s = std::pow(std::max(0.0, 1.0 - rho), 1.0 / c.q);
            return (2.0 * s - sa - sb) / (sb - sa);
        }
        case CellMap::SigmaRight: {
            const double sa = std::pow(std::max(0.0, c.ra - 1.0), 1.0 / c.q);
            const double sb = std::pow(c.rb - 1.0, 1.0 / c.q);
            const double s = std::pow(std::max(0.0, rho - 1.0), 1.0 / c.q);
            return (2.0 * s - sa - sb) / (sb - sa);
        }
    }
    return 0.0;
}

// barycentric weights for the Gauss nodes of the given order, normalized
static const std::vector<double>& barycentric_weights(int n) {
    static std::map<int, std::vector<double>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        const auto& g = gauss_legendre(n);
        std::vector<double> bw(n, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (j != i) bw[i] /= (g.x[i] - g.x[j]);
        double m = 0;
        for (double v : bw) m = std::max(m, std::abs(v));
        for (double& v : bw) v /= m;
        it = cache.emplace(n, std::move(bw)).first;
    }
    return it->second;
}

MeshFunction::MeshFunction(const QuadMesh* mesh, std::vector<double> node_values)
    : mesh_(mesh), vals_(std::move(node_values)) {
    if (vals_.size() != mesh_->nodes().size())
        throw std::invalid_argument("MeshFunction: value count does not match mesh nodes");
}

double MeshFunction::operator()(double rho) const {
    const double lo = mesh_->lo(), hi = mesh_->hi();
    rho = std::min(std::max(rho, lo), hi);
    const std::size_t k = mesh_->cell_of(rho);
    const QuadCell& c = mesh_->cells()[k];
    const int n = mesh_->nodes_per_cell();
    const auto& g = gauss_legendre(n);
    const auto& bw = barycentric_weights(n);
    const double x = cell_x(c, rho);
    // value at standard coordinate g.x[i]; SigmaLeft nodes are stored in
    // ascending rho which reverses the sigma/x order
    const bool rev = (c.map == CellMap::SigmaLeft);
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        const double fi = vals_[k * n + (rev ? n - 1 - i : i)];
        const double dx = x - g.x[i];
        // node hit: sigma-coordinate round trips next to rho = 1 can lose ten
        // digits of x; the minimal Gauss node separation is ~1e-2
        if (std::abs(dx) < 1e-9) return fi;
        const double t = bw[i] / dx;
        num += t * fi;
        den += t;
    }
    return num / den;
}

// ---------------------------------------------------------------------------

static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

static inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    const double m = std::sqrt(-2.0 * std::log(u1));
    have_cached_ = true;
    cached_ = m * std::sin(2.0 * M_PI * u2);
    return m * std::cos(2.0 * M_PI * u2);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

// ---------------------------------------------------------------------------

int count_sign_changes(const std::vector<double>& f, double zero_tol) {
    int changes = 0, last = 0;
    for (double v : f) {
        const int s = (v > zero_tol) ? 1 : (v < -zero_tol) ? -1 : 0;
        if (s != 0) {
            if (last != 0 && s != last) ++changes;
            last = s;
        }
    }
    return changes;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double rel_xtol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) throw std::invalid_argument("bisect: endpoints do not bracket");
    for (int i = 0; i < max_iter; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0) return m;
        if (fa * fm < 0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a < rel_xtol * std::max(std::abs(a), std::abs(b))) break;
    }
    (void)fb;
    return 0.5 * (a + b);
}

std::vector<double> find_zeros(const std::function<double(double)>& f,
                               const std::vector<double>& grid, double rel_xtol) {
    std::vector<double> zeros;
    if (grid.size() < 2) return zeros;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (prev == 0) {
            zeros.push_back(grid[i - 1]);
        } else if (prev * cur < 0) {
            zeros.push_back(bisect(f, grid[i - 1], grid[i], rel_xtol));
        }
        prev = cur;
    }
    if (prev == 0) zeros.push_back(grid.back());
    return zeros;
}

// ---------------------------------------------------------------------------

PhaseFit fit_log_oscillation(const std::vector<double>& rho,
                             const std::vector<double>& vals, double omega) {
    // least squares for v ~ a sin(w t) + b cos(w t), t = log rho
    double Sss = 0, Scc = 0, Ssc = 0, Svs = 0, Svc = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double t = omega * std::log(rho[i]);
        const double s = std::sin(t), c = std::cos(t);
        Sss += s * s;
        Scc += c * c;
        Ssc += s * c;
        Svs += vals[i] * s;
        Svc += vals[i] * c;
    }
    const double det = Sss * Scc - Ssc * Ssc;
    const double a = (Svs * Scc - Svc * Ssc) / det;
    const double b = (Svc * Sss - Svs * Ssc) / det;
    PhaseFit out;
    out.A = std::hypot(a, b);
    out.delta = std::atan2(b, a); // a sin + b cos = A sin(wt + delta)
    double r2 = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double t = omega * std::log(rho[i]);
        const double m = a * std::sin(t) + b * std::cos(t);
        r2 += (vals[i] - m) * (vals[i] - m);
    }
    out.resid = (out.A > 0) ? std::sqrt(r2 / rho.size()) / out.A : 0.0;
    return out;
}

double fit_power_exponent(const std::vector<double>& rho, const std::vector<double>& f) {
    double Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a < 1e-300) continue;
        const double x = std::log(rho[i]), y = std::log(a);
        Sx += x;
        Sy += y;
        Sxx += x * x;
        Sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * Sxy - Sx * Sy) / (n * Sxx - Sx * Sx);
}

} // namespace ssw
