#pragma once
// Shared numerical plumbing: grids, C^1 interpolation, composite Gauss-Legendre
// quadrature meshes with singular-weight cell maps, deterministic RNG, hashing,
// sign-change counting and bisection root refinement.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ssw {

std::vector<double> lin_spaced(double lo, double hi, int n);
std::vector<double> log_spaced(double lo, double hi, int n);

// ---------------------------------------------------------------------------
// Piecewise-cubic Hermite interpolant through (x_i, y_i, y'_i); C^1, exact for
// cubics on each cell.  Nodes must be strictly increasing.
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

    double eval(double xq) const;
    double deriv(double xq) const;
    bool empty() const { return x_.empty(); }
    double xmin() const { return x_.front(); }
    double xmax() const { return x_.back(); }

private:
    std::size_t locate(double xq) const;
    std::vector<double> x_, y_, dy_;
};

// ---------------------------------------------------------------------------
// Sampled radial function with first and second derivatives on a structured
// grid.  Values/derivatives between nodes come from C^1 Hermite interpolation
// (value from (u,u') data, derivative from (u',u'') data).
class RadialFunction {
public:
    RadialFunction() = default;
    RadialFunction(std::vector<double> rho, std::vector<double> u, std::vector<double> du,
                   std::vector<double> d2u);

    double operator()(double r) const { return h1_.eval(r); }
    double d(double r) const { return h2_.eval(r); }
    double d2(double r) const { return h2_.deriv(r); }
    bool empty() const { return grid_.empty(); }
    double rho_min() const { return grid_.front(); }
    double rho_max() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return val_; }
    const std::vector<double>& derivs() const { return der_; }
    const std::vector<double>& second_derivs() const { return der2_; }

private:
    std::vector<double> grid_, val_, der_, der2_;
    CubicHermite h1_, h2_;
};

// ---------------------------------------------------------------------------
// Gauss-Legendre rule on [-1,1]; cached per order.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Composite quadrature mesh: contiguous cells [ra,rb] in the radial variable,
// each integrated in a local coordinate chosen for the expected integrand:
//   Linear     : plain GL in rho
//   Log        : GL in log(rho)
//   SigmaLeft  : 1-rho = sigma^q  (flattens |1-rho|^{1/2-s_c} weights, rho<1)
//   SigmaRight : rho-1 = sigma^q  (same, rho>1)
enum class CellMap { Linear, Log, SigmaLeft, SigmaRight };

struct QuadCell {
    double ra, rb;
    CellMap map;
    double q; // sigma exponent (SigmaLeft/SigmaRight only)
};

class QuadMesh {
public:
    // appends ncells covering [a,b] with the given map; sigma maps subdivide
    // uniformly in sigma, Log uniformly in log rho, Linear uniformly in rho
    void add_region(double a, double b, int ncells, CellMap map, double q = 1.0);
    void finalize(int nodes_per_cell); // builds node/weight tables

    const std::vector<QuadCell>& cells() const { return cells_; }
    const std::vector<double>& nodes() const { return node_r_; }
    const std::vector<double>& weights() const { return node_w_; }
    // |1 - rho| per node, computed in sigma coordinates where sigma cells
    // would otherwise lose precision to cancellation next to rho = 1
    const std::vector<double>& dist1() const { return node_d1_; }
    int nodes_per_cell() const { return npc_; }
    double lo() const { return cells_.front().ra; }
    double hi() const { return cells_.back().rb; }

    // index of cell containing rho (clamped)
    std::size_t cell_of(double rho) const;
    // nodes/weights for the partial cell [cells_[k].ra, rho_end]
    void partial_cell(std::size_t k, double rho_end, std::vector<double>& r,
                      std::vector<double>& d1, std::vector<double>& w) const;

private:
    std::vector<QuadCell> cells_;
    std::vector<double> node_r_, node_w_, node_d1_;
    int npc_ = 12;
    friend class MeshIntegral;
};

// Integrand sampled as g(rho, |1-rho|) with the exact distance supplied.
using WeightedFn = std::function<double(double, double)>;

// Cumulative integral of a callable over a QuadMesh: F(rho) = int_{mesh.lo}^{rho} g.
class MeshIntegral {
public:
    MeshIntegral() = default;
    MeshIntegral(const QuadMesh* mesh, WeightedFn g);
    MeshIntegral(const QuadMesh* mesh, std::function<double(double)> g);

    double upto(double rho) const; // prefix integral, partial cells by fresh GL
    double total() const { return prefix_.back(); }
    double between(double a, double b) const { return upto(b) - upto(a); }

private:
    const QuadMesh* mesh_ = nullptr;
    WeightedFn g_;
    std::vector<double> prefix_; // prefix_[k] = integral over cells [0,k)
};

// ---------------------------------------------------------------------------
// Function known at the Gauss nodes of a QuadMesh, evaluable anywhere on the
// mesh by barycentric interpolation over each cell's nodes in the cell's own
// map coordinate.  Functions that are smooth in that coordinate (including
// |1-rho|^{k/q}-type behavior matched by a sigma cell's exponent) interpolate
// at spectral accuracy; queries outside the mesh clamp to the boundary.
class MeshFunction {
public:
    MeshFunction() = default;
    MeshFunction(const QuadMesh* mesh, std::vector<double> node_values);

    double operator()(double rho) const;
    const std::vector<double>& node_values() const { return vals_; }
    std::vector<double>& node_values() { return vals_; }
    const QuadMesh* mesh() const { return mesh_; }
    bool empty() const { return mesh_ == nullptr; }

private:
    const QuadMesh* mesh_ = nullptr;
    std::vector<double> vals_;
};

// ---------------------------------------------------------------------------
// Deterministic RNG: xoshiro256++ seeded via splitmix64.  Distribution code is
// explicit so results are identical across platforms/compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform();                    // [0,1)
    double uniform(double a, double b);  // [a,b)
    double normal();                     // standard normal, Box-Muller

private:
    std::uint64_t s_[4];
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// FNV-1a 64-bit hash of a byte string, hex-encoded.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// Counts sign changes of sampled values, treating |f| <= zero_tol as exact
// zeros (plateaus collapse; a crossing is counted when the previous and next
// nonzero samples have opposite signs).
int count_sign_changes(const std::vector<double>& f, double zero_tol);

// Zeros of a callable on a bracketing grid, refined by bisection to xtol
// (relative).  Only brackets with a strict sign change are refined.
std::vector<double> find_zeros(const std::function<double(double)>& f,
                               const std::vector<double>& grid, double rel_xtol);

// Bisection for a single bracket [a,b] with f(a)*f(b) < 0.
double bisect(const std::function<double(double)>& f, double a, double b,
              double rel_xtol, int max_iter = 200);

// Least-squares fit of  w(rho) ~ A sin(omega log rho + delta)  given samples of
// w already stripped of the power-law envelope.  Returns amplitude, phase in
// (-pi, pi], and the rms residual relative to A.
struct PhaseFit {
    double A = 0, delta = 0, resid = 0;
};
PhaseFit fit_log_oscillation(const std::vector<double>& rho,
                             const std::vector<double>& vals, double omega);

// Log-log least squares slope of |f| vs rho (tail exponent estimation).
double fit_power_exponent(const std::vector<double>& rho, const std::vector<double>& f);

} // namespace ssw
