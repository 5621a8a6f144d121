#pragma once

#include <optional>
#include <vector>

#include "fct/entropy.hpp"
#include "fct/flux.hpp"
#include "fct/grid.hpp"
#include "fct/lp.hpp"

namespace fct {

enum class LimiterMode { LowOrder, HighOrder, LP, AP, LE, AE, LET };
enum class LowFluxKind { Upwind, Rusanov, Godunov };
enum class HighFluxKind { Centered, Quick };

bool mode_uses_lp(LimiterMode m);
bool mode_uses_entropy(LimiterMode m);
const char* to_string(LimiterMode m);
std::optional<LimiterMode> limiter_mode_from_string(const std::string& s);

/// Per-interface correction factors at both time levels. 1D arrays have one
/// entry per interface (n+1); boundary interfaces of non-periodic problems
/// carry no antidiffusion and keep the value 1.
struct LimiterField {
    std::vector<double> alpha_n;
    std::vector<double> alpha_np1;
};

/// Zalesak-style per-cell quantities: admissible increment rates Q, applied
/// antidiffusive capacities P, and their clipped ratios R.
struct LimiterBounds {
    std::vector<double> Qp, Qm, Pp, Pm, Rp, Rm;
};

/// Signed antidiffusive interface fluxes for one time level. Row i of the
/// correction operator carries +hd[i] (left interface) and -hd[i+1] (right),
/// so every interface column holds two equal-magnitude opposite-sign entries.
struct AntidiffusiveStencil {
    std::vector<double> hd;  // size n+1
};

/// Everything the limiter machinery needs for one 1D step (or one Picard
/// iterate): cell data in flux units, interface antidiffusion at both levels,
/// and optional entropy-row data.
struct LimiterContext1D {
    const Grid1D* grid = nullptr;
    BoundarySpec bc;
    double sigma = 0.0;
    double dt = 0.0;
    bool beta_form = false;  // substitute beta = alpha*|hd| (linear problems)

    std::vector<double> y_n;
    std::vector<double> smin, smax;     // stencil extrema of y^n
    std::vector<double> lowdiff_n;      // low-order flux difference per cell
    AntidiffusiveStencil hd_n, hd_np1;  // hd_np1 unused when sigma == 0

    // Proper-entropy rows (mode LE): sum_k lambda_ik alpha >= W_i. The cell
    // entropy inequality is convex in alpha, so each linearization is an
    // outer cut; rows from earlier iterates stay valid and are accumulated
    // to keep the sequential LP from cycling.
    struct EntropyRows {
        std::vector<int> cells;  // empty = one row per cell
        std::vector<double> W;
        std::vector<double> lam_n_left, lam_n_right;  // lambda_{i,i-1}, lambda_{i,i+1}
        std::vector<double> lam_p_left, lam_p_right;
    };
    std::vector<EntropyRows> entropy_rows;  // last entry = current iterate

    // Potential-based entropy rows (mode LET): sum coef * alpha <= rhs,
    // accumulated the same way.
    struct TadmorRows {
        std::vector<double> n_left, n_right;
        std::vector<double> p_left, p_right;
        std::vector<double> rhs;
    };
    std::vector<TadmorRows> tadmor_rows;

    bool periodic() const { return bc.kind == BoundarySpec::Kind::Periodic; }
    bool two_levels() const { return sigma > 0.0; }
};

/// Map from LP variables to (interface, level) for alpha extraction.
struct LpVarMap {
    std::vector<int> iface;    // canonical interface index per variable
    std::vector<int> level;    // 0 = time level n, 1 = level n+1
    std::vector<double> mag;   // |hd| for beta variables, 1 for alpha variables
};

/// Snaps antidiffusive fluxes whose underlying jump is at roundoff level to
/// exactly zero so sign tests stay meaningful.
void snap_small_jumps(std::vector<double>& hd, double y_scale);

/// Antidiffusive interface fluxes of the low/centered pair for a nonlinear
/// flux on ghost-extended states (size n+2 in, n+1 out).
AntidiffusiveStencil antidiffusive_flux_conservation(const FluxFunction& flux, LowFluxKind low,
                                                     const std::vector<double>& y_ghost);

LimiterBounds limiter_bounds(const LimiterContext1D& ctx);
LimiterField approximate_limiters(const LimiterContext1D& ctx, const LimiterBounds& bounds);

/// Largest uniform correction factor per interface compatible with the
/// discrete cell entropy inequality, linearized with weights w.
std::vector<double> entropy_limiter_cap(const LimiterContext1D& ctx);

LinearProgram build_lp(const LimiterContext1D& ctx, LpVarMap* map = nullptr);
LimiterField limiters_from_lp(const LimiterContext1D& ctx, const LpVarMap& map,
                              const LPSolution& sol);
/// build_lp + presolved solve + extraction in one call.
LimiterField solve_lp_limiters(const LimiterContext1D& ctx, int* lp_iterations = nullptr);

/// 2D analogue on the flattened grid; rows are scaled by cell area, interface
/// fluxes by the transverse cell width. Boundary interfaces carry zero
/// antidiffusion by construction (Dirichlet boundaries).
struct LimiterContext2D {
    const Grid2D* grid = nullptr;
    double sigma = 0.0;
    double dt = 0.0;

    std::vector<double> y_n;
    std::vector<double> smin, smax;
    std::vector<double> lowdiff_n;                // area-scaled
    std::vector<double> hd1_n, hd1_np1;           // x-interfaces, size (nx+1)*ny
    std::vector<double> hd2_n, hd2_np1;           // y-interfaces, size nx*(ny+1)

    bool two_levels() const { return sigma > 0.0; }
};

/// Per-axis limiter fields for the 2D scheme.
struct LimiterField2D {
    std::vector<double> a1_n, a1_np1;  // x-interfaces
    std::vector<double> a2_n, a2_np1;  // y-interfaces
};

LimiterBounds limiter_bounds_2d(const LimiterContext2D& ctx);
LimiterField2D approximate_limiters_2d(const LimiterContext2D& ctx, const LimiterBounds& bounds);
LimiterField2D solve_lp_limiters_2d(const LimiterContext2D& ctx, int* lp_iterations = nullptr);

}  // namespace fct
