#include "fct/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fct/simd.hpp"

namespace fct {

namespace {

constexpr double kCflSlack = 1.0 + 1e-9;

// The monotone explicit-part bound underwrites the limiter bound structure;
// pure low/high-order weighted solves do not depend on it.
bool guard_needed(LimiterMode m) {
    return m != LimiterMode::LowOrder && m != LimiterMode::HighOrder;
}

double mass_of(const Grid1D& grid, const std::vector<double>& y) {
    return simd::kernels().dot(grid.widths.data(), y.data(), grid.n());
}

void alpha_stats(const LimiterContext1D& ctx, const std::vector<double>& alpha,
                 StepReport* report) {
    if (!report) return;
    const int n = ctx.grid->n();
    double mn = 1.0, sum = 0.0;
    int count = 0;
    for (int k = ctx.periodic() ? 0 : 1; k < n; ++k) {
        mn = std::min(mn, alpha[k]);
        sum += alpha[k];
        ++count;
    }
    report->alpha_min = mn;
    report->alpha_mean = count ? sum / count : 1.0;
}

BoundarySpec extrema_bc(const BoundarySpec& bc) {
    // Stencil extrema come from the scheme matrix rows; Dirichlet boundary
    // values sit in the boundary vector, not the stencil.
    if (bc.kind == BoundarySpec::Kind::Dirichlet) return BoundarySpec::extend_constant();
    return bc;
}

void stencil_extrema(const std::vector<double>& y, const BoundarySpec& bc,
                     std::vector<double>& mn, std::vector<double>& mx) {
    const auto g = ghost_extend(y, extrema_bc(bc), 1);
    const int n = static_cast<int>(y.size());
    mn.resize(n);
    mx.resize(n);
    simd::kernels().window3_minmax(g.data(), mn.data(), mx.data(), n);
}

bool picard_converged(const PicardParams& pp, const std::vector<double>& y_new,
                      const std::vector<double>& y_old, const LimiterField& a_new,
                      const LimiterField& a_old, bool require_alpha = true) {
    for (size_t i = 0; i < y_new.size(); ++i) {
        const double rel =
            std::abs(y_new[i] - y_old[i]) / std::max(pp.delta, std::abs(y_new[i]));
        if (!(rel < pp.eps1)) return false;
    }
    if (!require_alpha) return true;
    for (size_t k = 0; k < a_new.alpha_n.size(); ++k) {
        if (!(std::abs(a_new.alpha_n[k] - a_old.alpha_n[k]) < pp.eps2)) return false;
        if (!(std::abs(a_new.alpha_np1[k] - a_old.alpha_np1[k]) < pp.eps2)) return false;
    }
    return true;
}

// Degenerate LP optima can make the limiter hop between equivalent vertices
// while the state has already settled; past this iteration count the state
// and residual criteria alone decide.
constexpr int kAlphaCriterionCap = 25;
// Formula-based entropy limiting gets monotone from here on, which forces
// the fixed point (any componentwise-smaller field stays admissible).
constexpr int kMonotoneStallCap = 8;
// Entropy linearizations accumulate as outer cuts up to this budget; freezing
// the set afterwards makes the explicit LP map stationary, which ends the
// iteration (feasibility is restored by the pullback scaling regardless).
constexpr size_t kMaxEntropyCuts = 16;
// Weighted steps freeze the lagged level-(n+1) data after this many
// iterations, which pins the whole limiter problem and forces a fixed point;
// the accepted scheme keeps its conservative flux form either way.
constexpr int kFreezeStall = 6;

// ---------------------------------------------------------------------------
// Linear problems: upwind low-order convection with absorbed diffusion
// ---------------------------------------------------------------------------

struct LinOp {
    int n = 0;
    bool periodic = false;
    std::vector<double> u;      // interface velocities, n+1
    std::vector<double> dcoef;  // max(0, k/spacing - |u|/2): monotone diffusion excess
    std::vector<double> bcoef;  // max(0, |u|/2 - k/spacing): correctable dissipation
    std::vector<double> lower, diag, upper;
    std::vector<double> g;
    double max_aii = 0.0;
};

LinOp assemble_linear(const LinearProblem1D& prob, double t) {
    const Grid1D& grid = prob.grid;
    const int n = grid.n();
    LinOp op;
    op.n = n;
    op.periodic = prob.bc.kind == BoundarySpec::Kind::Periodic;
    if (prob.bc.kind == BoundarySpec::Kind::ExtendConstant)
        throw SolverError("linear problems support periodic or dirichlet boundaries");
    op.u.resize(n + 1);
    op.dcoef.resize(n + 1);
    op.bcoef.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double x = grid.interfaces[k];
        const double uk = prob.velocity(x, t);
        double kk = prob.diffusivity ? prob.diffusivity(x, t) : 0.0;
        if (kk < 0.0) throw SolverError("negative diffusivity");
        double sp;
        if (op.periodic && (k == 0 || k == n))
            sp = (grid.centers[0] - grid.a) + (grid.b - grid.centers[n - 1]);
        else if (k == 0)
            sp = grid.interface_spacing(1);  // wall gradient over the first interior spacing
        else if (k == n)
            sp = grid.interface_spacing(n - 1);
        else
            sp = grid.interface_spacing(k);
        op.u[k] = uk;
        op.dcoef[k] = std::max(0.0, kk / sp - 0.5 * std::abs(uk));
        op.bcoef[k] = std::max(0.0, 0.5 * std::abs(uk) - kk / sp);
    }
    if (!op.periodic) {
        op.bcoef[0] = 0.0;  // boundary interfaces carry no flux correction
        op.bcoef[n] = 0.0;
    }
    op.lower.assign(n, 0.0);
    op.diag.assign(n, 0.0);
    op.upper.assign(n, 0.0);
    op.g.assign(n, 0.0);
    auto up = [](double v) { return 0.5 * (v + std::abs(v)); };
    auto um = [](double v) { return 0.5 * (v - std::abs(v)); };
    for (int i = 0; i < n; ++i) {
        const double dx = grid.widths[i];
        op.diag[i] = (up(op.u[i + 1]) - um(op.u[i]) + op.dcoef[i + 1] + op.dcoef[i]) / dx;
        op.lower[i] = -(up(op.u[i]) + op.dcoef[i]) / dx;
        op.upper[i] = (um(op.u[i + 1]) - op.dcoef[i + 1]) / dx;
        op.max_aii = std::max(op.max_aii, op.diag[i]);
    }
    if (!op.periodic) {
        if (prob.bc.kind == BoundarySpec::Kind::Dirichlet) {
            op.g[0] = (up(op.u[0]) + op.dcoef[0]) * prob.bc.left / grid.widths[0];
            op.g[n - 1] = (-um(op.u[n]) + op.dcoef[n]) * prob.bc.right / grid.widths[n - 1];
        }
        op.lower[0] = 0.0;
        op.upper[n - 1] = 0.0;
    }
    return op;
}

std::vector<double> apply_operator(const LinOp& op, const std::vector<double>& y) {
    const int n = op.n;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        double s = op.diag[i] * y[i];
        if (i > 0)
            s += op.lower[i] * y[i - 1];
        else if (op.periodic)
            s += op.lower[0] * y[n - 1];
        if (i + 1 < n)
            s += op.upper[i] * y[i + 1];
        else if (op.periodic)
            s += op.upper[n - 1] * y[0];
        r[i] = s;
    }
    return r;
}

AntidiffusiveStencil linear_antidiffusion(const LinearProblem1D& prob, const LinOp& op,
                                          HighFluxKind high, const std::vector<double>& y) {
    const int n = op.n;
    AntidiffusiveStencil st;
    st.hd.assign(n + 1, 0.0);
    double scale = simd::kernels().max_abs(y.data(), n);
    const double eps = 1e-14 * scale;
    if (high == HighFluxKind::Centered) {
        const auto g = ghost_extend(y, prob.bc, 1);
        for (int k = 0; k <= n; ++k) {
            const double dyk = g[k + 1] - g[k];
            st.hd[k] = std::abs(dyk) <= eps ? 0.0 : op.bcoef[k] * dyk;
        }
    } else {
        for (int k = 0; k <= n; ++k)
            if (op.dcoef[k] > 0.0)
                throw SolverError("QUICK high-order flux requires pure advection");
        const auto g = ghost_extend(y, prob.bc, 2);
        for (int k = 0; k <= n; ++k) {
            if (!op.periodic && (k == 0 || k == n)) continue;
            const double ymm = g[k], ym = g[k + 1], yp = g[k + 2], ypp = g[k + 3];
            if (std::abs(yp - ym) <= eps && std::abs(ym - ymm) <= eps &&
                std::abs(yp - ypp) <= eps)
                continue;
            st.hd[k] = quick_antidiffusive(op.u[k], ymm, ym, yp, ypp);
        }
    }
    return st;
}

LimiterContext1D linear_context(const LinearProblem1D& prob, const SchemeConfig& cfg,
                                const LinOp& op_n, const std::vector<double>& y_n,
                                const AntidiffusiveStencil& hd_n,
                                const AntidiffusiveStencil& hd_np1) {
    LimiterContext1D ctx;
    ctx.grid = &prob.grid;
    ctx.bc = prob.bc;
    ctx.sigma = cfg.sigma;
    ctx.dt = cfg.dt;
    ctx.beta_form = true;
    ctx.y_n = y_n;
    stencil_extrema(y_n, prob.bc, ctx.smin, ctx.smax);
    const auto ay = apply_operator(op_n, y_n);
    ctx.lowdiff_n.resize(op_n.n);
    for (int i = 0; i < op_n.n; ++i) ctx.lowdiff_n[i] = prob.grid.widths[i] * ay[i];
    ctx.hd_n = hd_n;
    ctx.hd_np1 = hd_np1;
    return ctx;
}

LimiterField limiters_for(const LimiterContext1D& ctx, LimiterMode mode, StepReport* report) {
    const int n = ctx.grid->n();
    LimiterField f;
    switch (mode) {
        case LimiterMode::LowOrder:
            f.alpha_n.assign(n + 1, 0.0);
            f.alpha_np1.assign(n + 1, 0.0);
            break;
        case LimiterMode::HighOrder:
            f.alpha_n.assign(n + 1, 1.0);
            f.alpha_np1.assign(n + 1, 1.0);
            break;
        case LimiterMode::AP:
            f = approximate_limiters(ctx, limiter_bounds(ctx));
            break;
        case LimiterMode::LP: {
            int iters = 0;
            f = solve_lp_limiters(ctx, &iters);
            if (report) report->lp_iterations += iters;
            break;
        }
        default:
            throw SolverError("entropy-constrained limiting needs a conservation-law problem");
    }
    return f;
}

}  // namespace

double max_stable_dt(const LinearProblem1D& prob, const SchemeConfig& cfg, const Field& y) {
    if (cfg.sigma >= 1.0) return std::numeric_limits<double>::infinity();
    const LinOp op = assemble_linear(prob, y.time);
    if (op.max_aii <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / ((1.0 - cfg.sigma) * op.max_aii);
}

Field explicit_step(const LinearProblem1D& prob, const SchemeConfig& cfg, const Field& y,
                    LimiterField* limiters, StepReport* report) {
    const int n = prob.grid.n();
    const double dt = cfg.dt;
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    if (dt > max_stable_dt(prob, cfg, y) * kCflSlack)
        throw SolverError("explicit step exceeds the monotone time-step bound");

    const LinOp op = assemble_linear(prob, y.time);
    const AntidiffusiveStencil hd = linear_antidiffusion(prob, op, cfg.high_flux, y.values);
    LimiterContext1D ctx = linear_context(prob, cfg, op, y.values, hd, {});
    ctx.sigma = 0.0;

    LimiterField f = limiters_for(ctx, cfg.mode, report);

    const auto ay = apply_operator(op, y.values);
    Field out;
    out.time = y.time + dt;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double corr = (f.alpha_n[i] * hd.hd[i] - f.alpha_n[i + 1] * hd.hd[i + 1]) /
                            prob.grid.widths[i];
        out.values[i] = y.values[i] - dt * (ay[i] - op.g[i]) + dt * corr;
    }
    if (report) {
        report->picard_iterations = 1;
        report->mass = mass_of(prob.grid, out.values);
        alpha_stats(ctx, f.alpha_n, report);
    }
    if (limiters) *limiters = f;
    return out;
}

Field picard_step(const LinearProblem1D& prob, const SchemeConfig& cfg, const Field& y,
                  LimiterField* limiters, StepReport* report) {
    const int n = prob.grid.n();
    const double dt = cfg.dt, sg = cfg.sigma;
    if (!(sg > 0.0)) throw SolverError("picard_step needs sigma > 0");
    if (guard_needed(cfg.mode) && dt > max_stable_dt(prob, cfg, y) * kCflSlack)
        throw SolverError("explicit part exceeds the monotone time-step bound");

    const LinOp op_n = assemble_linear(prob, y.time);
    const LinOp op_p =
        prob.time_independent ? op_n : assemble_linear(prob, y.time + dt);
    const AntidiffusiveStencil hd_n =
        linear_antidiffusion(prob, op_n, cfg.high_flux, y.values);
    const auto ay_n = apply_operator(op_n, y.values);
    const bool cyclic = op_n.periodic;

    std::vector<double> diag(n), lower(n), upper(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = 1.0 + dt * sg * op_p.diag[i];
        lower[i] = dt * sg * op_p.lower[i];
        upper[i] = dt * sg * op_p.upper[i];
    }

    std::vector<double> yp = y.values;
    LimiterField a_prev;
    a_prev.alpha_n.assign(n + 1, 0.0);
    a_prev.alpha_np1.assign(n + 1, 0.0);
    LimiterField f;
    bool converged = false;
    int p = 0;
    LimiterContext1D ctx;
    std::optional<AntidiffusiveStencil> frozen_hd;
    for (; p < cfg.picard.max_iters; ++p) {
        if (!frozen_hd || p < kFreezeStall)
            frozen_hd = linear_antidiffusion(prob, op_p, cfg.high_flux, yp);
        const AntidiffusiveStencil& hd_p = *frozen_hd;
        ctx = linear_context(prob, cfg, op_n, y.values, hd_n, hd_p);
        f = limiters_for(ctx, cfg.mode, report);

        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) {
            const double bn =
                (f.alpha_n[i] * hd_n.hd[i] - f.alpha_n[i + 1] * hd_n.hd[i + 1]) /
                prob.grid.widths[i];
            const double bp =
                (f.alpha_np1[i] * hd_p.hd[i] - f.alpha_np1[i + 1] * hd_p.hd[i + 1]) /
                prob.grid.widths[i];
            rhs[i] = y.values[i] - dt * (1.0 - sg) * ay_n[i] + dt * (1.0 - sg) * bn +
                     dt * sg * bp + dt * (sg * op_p.g[i] + (1.0 - sg) * op_n.g[i]);
        }
        std::vector<double> y_new = cyclic ? cyclic_tridiagonal_solve(lower, diag, upper, rhs)
                                           : tridiagonal_solve(lower, diag, upper, rhs);
        const bool done = picard_converged(cfg.picard, y_new, yp, f, a_prev);
        yp = std::move(y_new);
        a_prev = f;
        if (done) {
            converged = true;
            ++p;
            break;
        }
    }
    if (!converged) throw SolverError("picard iteration did not converge in max_iters");

    Field out;
    out.time = y.time + dt;
    out.values = yp;
    if (report) {
        report->picard_iterations = p;
        report->converged = converged;
        report->mass = mass_of(prob.grid, out.values);
        alpha_stats(ctx, f.alpha_n, report);
    }
    if (limiters) *limiters = f;
    return out;
}

// ---------------------------------------------------------------------------
// Conservation laws: Rusanov/Godunov low order, centered high order
// ---------------------------------------------------------------------------

namespace {

struct ConsData {
    std::vector<double> ghost;       // n+2
    std::vector<double> nu, hL, hd;  // n+1
    std::vector<double> HR, Hd;      // entropy fluxes, filled when a pair exists
};

ConsData build_cons_data(const ConservationProblem1D& prob, LowFluxKind low,
                         const std::vector<double>& y, bool with_entropy) {
    const int n = static_cast<int>(y.size());
    ConsData d;
    d.ghost = ghost_extend(y, prob.bc, 1);
    d.nu.resize(n + 1);
    d.hL.resize(n + 1);
    d.hd.resize(n + 1);
    double scale = 0.0;
    for (double v : d.ghost) scale = std::max(scale, std::abs(v));
    const double eps = 1e-14 * scale;
    const bool periodic = prob.bc.kind == BoundarySpec::Kind::Periodic;
    for (int k = 0; k <= n; ++k) {
        const double yl = d.ghost[k], yr = d.ghost[k + 1];
        d.nu[k] = interval_max_abs_deriv(prob.flux, yl, yr);
        const double central = 0.5 * (prob.flux.f(yl) + prob.flux.f(yr));
        d.hL[k] = low == LowFluxKind::Godunov ? godunov_flux(prob.flux, yl, yr)
                                              : central - 0.5 * d.nu[k] * (yr - yl);
        d.hd[k] = std::abs(yr - yl) <= eps ? 0.0 : central - d.hL[k];
        if (!periodic && (k == 0 || k == n)) d.hd[k] = 0.0;
    }
    if (with_entropy && prob.entropy) {
        const auto& pair = *prob.entropy;
        d.HR.resize(n + 1);
        d.Hd.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double yl = d.ghost[k], yr = d.ghost[k + 1];
            const double dU = pair.U(yr) - pair.U(yl);
            d.HR[k] = 0.5 * (pair.F(yl) + pair.F(yr) - d.nu[k] * dU);
            d.Hd[k] = 0.5 * d.nu[k] * dU;
        }
    }
    return d;
}

LimiterContext1D cons_context(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                              const std::vector<double>& y_n, const ConsData& dn,
                              const ConsData* dp) {
    LimiterContext1D ctx;
    ctx.grid = &prob.grid;
    ctx.bc = prob.bc;
    ctx.sigma = cfg.sigma;
    ctx.dt = cfg.dt;
    ctx.beta_form = false;
    ctx.y_n = y_n;
    stencil_extrema(y_n, prob.bc, ctx.smin, ctx.smax);
    const int n = prob.grid.n();
    ctx.lowdiff_n.resize(n);
    for (int i = 0; i < n; ++i) ctx.lowdiff_n[i] = dn.hL[i + 1] - dn.hL[i];
    ctx.hd_n.hd = dn.hd;
    if (dp)
        ctx.hd_np1.hd = dp->hd;
    else
        ctx.hd_np1.hd.assign(n + 1, 0.0);
    return ctx;
}

/// Appends W_i and the lambda arrays of the proper-entropy rows linearized at
/// the current iterate (weights w = U'(y^{n+1,p})).
/// Appends the proper-entropy rows linearized at yp (weights w = U'(yp)).
/// With filter_slack set, rows that no admissible limiter can violate within
/// a roundoff margin are left out; the residual gate catches (and cuts) any
/// borderline case later.
void fill_entropy_rows(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                       const std::vector<double>& y_n, const std::vector<double>& yp,
                       const ConsData& dn, const ConsData* dp, LimiterContext1D& ctx,
                       const std::vector<int>* cells = nullptr, bool filter_slack = false) {
    const auto& pair = *prob.entropy;
    const int n = prob.grid.n();
    const int m = cells ? static_cast<int>(cells->size()) : n;
    const double sg = cfg.sigma;
    LimiterContext1D::EntropyRows rows;
    rows.cells.reserve(m);
    for (int t = 0; t < m; ++t) {
        const int i = cells ? (*cells)[t] : t;
        const double w = pair.dU(yp[i]);
        double W = prob.grid.widths[i] / cfg.dt *
                   (pair.U(yp[i]) - pair.U(y_n[i]) - w * (yp[i] - y_n[i]));
        W += (1.0 - sg) * (dn.HR[i + 1] - w * dn.hL[i + 1] - dn.HR[i] + w * dn.hL[i]);
        double lnr = w * dn.hd[i + 1] - dn.Hd[i + 1];
        double lnl = -(w * dn.hd[i] - dn.Hd[i]);
        double lpr = 0.0, lpl = 0.0;
        if (sg > 0.0 && dp) {
            W += sg * (dp->HR[i + 1] - w * dp->hL[i + 1] - dp->HR[i] + w * dp->hL[i]);
            lpr = w * dp->hd[i + 1] - dp->Hd[i + 1];
            lpl = -(w * dp->hd[i] - dp->Hd[i]);
        }
        if (filter_slack) {
            const double attain_min = (1.0 - sg) * (std::min(0.0, lnl) + std::min(0.0, lnr)) +
                                      sg * (std::min(0.0, lpl) + std::min(0.0, lpr));
            const double scale = std::abs(W) + std::abs(lnl) + std::abs(lnr) + std::abs(lpl) +
                                 std::abs(lpr);
            if (attain_min >= W - 1e-12 * scale) continue;
        }
        rows.cells.push_back(i);
        rows.W.push_back(W);
        rows.lam_n_left.push_back(lnl);
        rows.lam_n_right.push_back(lnr);
        rows.lam_p_left.push_back(lpl);
        rows.lam_p_right.push_back(lpr);
    }
    ctx.entropy_rows.push_back(std::move(rows));
}

/// Rows that keep the potential-based (Tadmor) discrete entropy inequality.
void fill_tadmor_rows(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                      const std::vector<double>& y_n, const std::vector<double>& yp,
                      const ConsData& dn, const ConsData* dp, LimiterContext1D& ctx) {
    const auto& pair = *prob.entropy;
    const TadmorPotential pot = tadmor_potential(pair, prob.flux);
    const int n = prob.grid.n();
    const double sg = cfg.sigma;
    LimiterContext1D::TadmorRows rows;
    rows.n_left.resize(n);
    rows.n_right.resize(n);
    rows.p_left.assign(n, 0.0);
    rows.p_right.assign(n, 0.0);
    rows.rhs.resize(n);

    const auto gn = dn.ghost;
    std::vector<double> vn(n + 2), psin(n + 2);
    for (int i = 0; i < n + 2; ++i) {
        vn[i] = pair.dU(gn[i]);
        psin[i] = pot.psi(vn[i]);
    }
    std::vector<double> vp, psip;
    if (dp) {
        vp.resize(n + 2);
        psip.resize(n + 2);
        for (int i = 0; i < n + 2; ++i) {
            vp[i] = pair.dU(dp->ghost[i]);
            psip[i] = pot.psi(vp[i]);
        }
    }
    for (int i = 0; i < n; ++i) {
        const int c = i + 1;  // ghost index of cell i
        const double vs = sg * (dp ? vp[c] : vn[c]) + (1.0 - sg) * vn[c];
        const double vr_n = 0.5 * (vn[c + 1] + vn[c]) - vs;
        const double vl_n = 0.5 * (vn[c] + vn[c - 1]) - vs;
        rows.n_right[i] = vr_n * dn.hd[i + 1];
        rows.n_left[i] = -vl_n * dn.hd[i];
        double rhs = (1.0 - sg) * (0.5 * (psin[c + 1] - psin[c]) - vr_n * dn.hL[i + 1] +
                                   0.5 * (psin[c] - psin[c - 1]) + vl_n * dn.hL[i]);
        if (dp) {
            const double vr_p = 0.5 * (vp[c + 1] + vp[c]) - vs;
            const double vl_p = 0.5 * (vp[c] + vp[c - 1]) - vs;
            rows.p_right[i] = vr_p * dp->hd[i + 1];
            rows.p_left[i] = -vl_p * dp->hd[i];
            rhs += sg * (0.5 * (psip[c + 1] - psip[c]) - vr_p * dp->hL[i + 1] +
                         0.5 * (psip[c] - psip[c - 1]) + vl_p * dp->hL[i]);
        }
        rhs += prob.grid.widths[i] / cfg.dt *
               (vs * (yp[i] - y_n[i]) - (pair.U(yp[i]) - pair.U(y_n[i])));
        rows.rhs[i] = rhs;
    }
    ctx.tadmor_rows.push_back(std::move(rows));
}

LimiterField cons_limiters(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                           LimiterContext1D& ctx, const std::vector<double>& y_n,
                           const std::vector<double>& yp, const ConsData& dn, const ConsData* dp,
                           StepReport* report) {
    const int n = prob.grid.n();
    LimiterField f;
    switch (cfg.mode) {
        case LimiterMode::LowOrder:
            f.alpha_n.assign(n + 1, 0.0);
            f.alpha_np1.assign(n + 1, 0.0);
            return f;
        case LimiterMode::HighOrder:
            f.alpha_n.assign(n + 1, 1.0);
            f.alpha_np1.assign(n + 1, 1.0);
            return f;
        case LimiterMode::AP:
            return approximate_limiters(ctx, limiter_bounds(ctx));
        case LimiterMode::LP: {
            int it = 0;
            f = solve_lp_limiters(ctx, &it);
            if (report) report->lp_iterations += it;
            return f;
        }
        case LimiterMode::LE: {
            if (ctx.entropy_rows.empty())
                fill_entropy_rows(prob, cfg, y_n, yp, dn, dp, ctx, nullptr,
                                  /*filter_slack=*/true);
            int it = 0;
            try {
                f = solve_lp_limiters(ctx, &it);
            } catch (const LPError&) {
                // Stale cuts can over-restrict the implicit path; retry with
                // only the current linearization.
                ctx.entropy_rows.erase(ctx.entropy_rows.begin(), ctx.entropy_rows.end() - 1);
                f = solve_lp_limiters(ctx, &it);
            }
            if (report) report->lp_iterations += it;
            return f;
        }
        case LimiterMode::AE: {
            ctx.entropy_rows.clear();
            fill_entropy_rows(prob, cfg, y_n, yp, dn, dp, ctx);
            f = approximate_limiters(ctx, limiter_bounds(ctx));
            const auto cap = entropy_limiter_cap(ctx);
            for (size_t k = 0; k < f.alpha_n.size(); ++k) {
                f.alpha_n[k] = std::min(f.alpha_n[k], cap[k]);
                f.alpha_np1[k] = std::min(f.alpha_np1[k], cap[k]);
            }
            return f;
        }
        case LimiterMode::LET: {
            if (ctx.tadmor_rows.size() < kMaxEntropyCuts)
                fill_tadmor_rows(prob, cfg, y_n, yp, dn, dp, ctx);
            int it = 0;
            try {
                f = solve_lp_limiters(ctx, &it);
            } catch (const LPError&) {
                ctx.tadmor_rows.erase(ctx.tadmor_rows.begin(), ctx.tadmor_rows.end() - 1);
                f = solve_lp_limiters(ctx, &it);
            }
            if (report) report->lp_iterations += it;
            return f;
        }
    }
    throw SolverError("unknown limiter mode");
}

void scale_limiters(LimiterField& f, double t) {
    for (double& a : f.alpha_n) a *= t;
    for (double& a : f.alpha_np1) a *= t;
}

std::vector<double> explicit_update(const ConservationProblem1D& prob, double dt,
                                    const std::vector<double>& y, const ConsData& d,
                                    const LimiterField& f) {
    const int n = static_cast<int>(y.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double fr = d.hL[i + 1] + f.alpha_n[i + 1] * d.hd[i + 1];
        const double fl = d.hL[i] + f.alpha_n[i] * d.hd[i];
        out[i] = y[i] - dt / prob.grid.widths[i] * (fr - fl);
    }
    return out;
}

double residual_max(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                    const std::vector<double>& y_n, const std::vector<double>& y_np1,
                    const LimiterField& f) {
    if (!prob.entropy) return 0.0;
    const auto res = cell_entropy_residual(*prob.entropy, prob.flux, y_n, y_np1, f.alpha_n,
                                           f.alpha_np1, cfg.sigma, prob.grid, prob.bc, cfg.dt);
    return simd::kernels().max_val(res.data(), static_cast<int>(res.size()));
}

/// Same quantity from the precomputed per-level flux arrays (hot loops).
double residual_max_fast(const ConservationProblem1D& prob, double sigma, double dt,
                         const std::vector<double>& y_n, const std::vector<double>& y_np1,
                         const ConsData& dn, const ConsData* dp, const LimiterField& f) {
    const auto& pair = *prob.entropy;
    const int n = prob.grid.n();
    double m = -HUGE_VAL;
    for (int i = 0; i < n; ++i) {
        double Hd = (1.0 - sigma) * (dn.HR[i + 1] + f.alpha_n[i + 1] * dn.Hd[i + 1] -
                                     dn.HR[i] - f.alpha_n[i] * dn.Hd[i]);
        if (sigma > 0.0 && dp)
            Hd += sigma * (dp->HR[i + 1] + f.alpha_np1[i + 1] * dp->Hd[i + 1] - dp->HR[i] -
                           f.alpha_np1[i] * dp->Hd[i]);
        const double r = pair.U(y_np1[i]) - pair.U(y_n[i]) + dt / prob.grid.widths[i] * Hd;
        m = std::max(m, r);
    }
    return m;
}

void check_mode(const ConservationProblem1D& prob, const SchemeConfig& cfg) {
    if (mode_uses_entropy(cfg.mode)) {
        if (!prob.entropy) throw SolverError("entropy-constrained mode needs an entropy pair");
        if (cfg.high_flux != HighFluxKind::Centered)
            throw SolverError("entropy-constrained modes pair with the centered high flux");
        if (cfg.mode != LimiterMode::LET && cfg.low_flux != LowFluxKind::Rusanov)
            throw SolverError("proper-entropy limiting is defined for the Rusanov low flux");
    }
    if (cfg.high_flux == HighFluxKind::Quick)
        throw SolverError("QUICK high flux applies to linear transport problems");
}

}  // namespace

double max_stable_dt(const ConservationProblem1D& prob, const SchemeConfig& cfg, const Field& y) {
    if (cfg.sigma >= 1.0) return std::numeric_limits<double>::infinity();
    const ConsData d = build_cons_data(prob, cfg.low_flux, y.values, false);
    const int n = prob.grid.n();
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double denom = (1.0 - cfg.sigma) * 0.5 * (d.nu[i] + d.nu[i + 1]);
        if (denom > 0.0) bound = std::min(bound, prob.grid.widths[i] / denom);
    }
    return bound;
}

double entropy_dt_bound(const ConservationProblem1D& prob, const SchemeConfig& cfg,
                        const Field& y) {
    if (cfg.sigma >= 1.0 || !prob.entropy)
        return std::numeric_limits<double>::infinity();
    const auto& pair = *prob.entropy;
    const ConsData d = build_cons_data(prob, cfg.low_flux, y.values, true);
    const int n = prob.grid.n();
    double ymin = y.values[0], ymax = y.values[0];
    for (double v : y.values) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    const double top = pair.d2U(ymax) * pair.d2U(ymax);
    const double bot = pair.d2U(ymin);
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double dh = d.hL[i + 1] - d.hL[i];
        if (dh * dh < 1e-30) continue;
        const double bracket =
            pair.dU(y.values[i]) * dh - (d.HR[i + 1] - d.HR[i]);
        const double num = 2.0 * prob.grid.widths[i] * bot * std::max(0.0, bracket);
        bound = std::min(bound, num / ((1.0 - cfg.sigma) * top * dh * dh));
    }
    return bound;
}

Field explicit_step(const ConservationProblem1D& prob, const SchemeConfig& cfg, const Field& y,
                    LimiterField* limiters, StepReport* report) {
    check_mode(prob, cfg);
    const int n = prob.grid.n();
    const double dt = cfg.dt;
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    if (dt > max_stable_dt(prob, cfg, y) * kCflSlack)
        throw SolverError("explicit step exceeds the monotone time-step bound");

    const bool want_entropy = prob.entropy.has_value();
    const ConsData dn = build_cons_data(prob, cfg.low_flux, y.values, want_entropy);
    LimiterContext1D ctx = cons_context(prob, cfg, y.values, dn, nullptr);

    LimiterField f;
    std::vector<double> y_new;
    int iters = 1;
    if (!mode_uses_entropy(cfg.mode)) {
        f = cons_limiters(prob, cfg, ctx, y.values, y.values, dn, nullptr, report);
        y_new = explicit_update(prob, dt, y.values, dn, f);
    } else {
        // The cell entropy inequality is convex in the limiters and holds at
        // alpha = 0, so pulling an infeasible LP point back toward zero
        // crosses the boundary exactly once; the bound rows stay satisfied
        // along the segment.
        auto pull_back = [&](LimiterField& fl, std::vector<double>& cand) {
            const double target = 0.5 * cfg.entropy_tol;
            const auto& pair = *prob.entropy;
            std::vector<int> violating;
            for (int i = 0; i < n; ++i) {
                const double Hdiff = dn.HR[i + 1] + fl.alpha_n[i + 1] * dn.Hd[i + 1] -
                                     dn.HR[i] - fl.alpha_n[i] * dn.Hd[i];
                const double r = pair.U(cand[i]) - pair.U(y.values[i]) +
                                 dt / prob.grid.widths[i] * Hdiff;
                if (r > target) violating.push_back(i);
            }
            if (violating.empty()) return;
            if (ctx.entropy_rows.size() < kMaxEntropyCuts)
                fill_entropy_rows(prob, cfg, y.values, cand, dn, nullptr, ctx, &violating);
            double lo = 0.0, hi = 1.0;
            for (int b = 0; b < 50; ++b) {
                const double t = 0.5 * (lo + hi);
                LimiterField ft = fl;
                scale_limiters(ft, t);
                std::vector<double> yt = explicit_update(prob, dt, y.values, dn, ft);
                if (residual_max_fast(prob, 0.0, dt, y.values, yt, dn, nullptr, ft) <= target)
                    lo = t;
                else
                    hi = t;
            }
            scale_limiters(fl, lo);
            cand = explicit_update(prob, dt, y.values, dn, fl);
        };
        // The entropy rows depend on the new state, so even the explicit step
        // iterates to its fixed point.
        std::vector<double> yp = y.values;
        LimiterField a_prev;
        a_prev.alpha_n.assign(n + 1, 0.0);
        a_prev.alpha_np1.assign(n + 1, 0.0);
        bool converged = false;
        size_t cuts_seen = 0;
        bool have_f = false;
        for (int p = 0; p < cfg.picard.max_iters; ++p) {
            // With no new cuts the LP inputs are unchanged at sigma = 0, so
            // the previous limiters are already the solution.
            const bool reuse = have_f && cfg.mode == LimiterMode::LE &&
                               ctx.entropy_rows.size() == cuts_seen;
            if (!reuse) {
                f = cons_limiters(prob, cfg, ctx, y.values, yp, dn, nullptr, report);
                have_f = true;
            }
            cuts_seen = ctx.entropy_rows.size();
            if (cfg.mode == LimiterMode::AE && p >= kMonotoneStallCap)
                for (size_t k = 0; k < f.alpha_n.size(); ++k) {
                    f.alpha_n[k] = std::min(f.alpha_n[k], a_prev.alpha_n[k]);
                    f.alpha_np1[k] = std::min(f.alpha_np1[k], a_prev.alpha_np1[k]);
                }
            y_new = explicit_update(prob, dt, y.values, dn, f);
            if (cfg.mode == LimiterMode::LE) pull_back(f, y_new);
            bool done =
                picard_converged(cfg.picard, y_new, yp, f, a_prev, p < kAlphaCriterionCap);
            if (done && cfg.mode != LimiterMode::LET)
                done = residual_max_fast(prob, 0.0, dt, y.values, y_new, dn, nullptr, f) <=
                       cfg.entropy_tol;
            yp = y_new;
            a_prev = f;
            iters = p + 1;
            if (done) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw SolverError("entropy-constrained iteration did not converge in max_iters");
    }

    Field out;
    out.time = y.time + dt;
    out.values = std::move(y_new);
    if (report) {
        report->picard_iterations = iters;
        report->mass = mass_of(prob.grid, out.values);
        alpha_stats(ctx, f.alpha_n, report);
        if (want_entropy && cfg.low_flux == LowFluxKind::Rusanov) {
            report->has_entropy_residual = true;
            report->entropy_residual_max = residual_max(prob, cfg, y.values, out.values, f);
            report->entropy_dt_ok = dt <= entropy_dt_bound(prob, cfg, y) * kCflSlack;
        }
    }
    if (limiters) *limiters = f;
    return out;
}

std::vector<double> solve_implicit_nonlinear(const ConservationProblem1D& prob, LowFluxKind low,
                                             double sigma, double dt,
                                             const std::vector<double>& rhs,
                                             const std::vector<double>& guess) {
    const int n = prob.grid.n();
    const bool cyclic = prob.bc.kind == BoundarySpec::Kind::Periodic;
    auto low_flux = [&](double yl, double yr) {
        return low == LowFluxKind::Godunov ? godunov_flux(prob.flux, yl, yr)
                                           : rusanov_flux(prob.flux, yl, yr);
    };
    auto interface_fluxes = [&](const std::vector<double>& y, std::vector<double>& h) {
        const auto g = ghost_extend(y, prob.bc, 1);
        h.resize(n + 1);
        for (int k = 0; k <= n; ++k) h[k] = low_flux(g[k], g[k + 1]);
    };
    auto residual = [&](const std::vector<double>& y, const std::vector<double>& h,
                        std::vector<double>& G) {
        G.resize(n);
        for (int i = 0; i < n; ++i)
            G[i] = prob.grid.widths[i] / dt * y[i] + sigma * (h[i + 1] - h[i]) - rhs[i];
    };

    double scale = 1.0;
    for (double v : rhs) scale = std::max(scale, std::abs(v));
    const double tol = 1e-11 * scale;

    std::vector<double> y = guess, h, G, Gtrial, htrial;
    interface_fluxes(y, h);
    residual(y, h, G);
    double gnorm = simd::kernels().max_abs(G.data(), n);

    std::vector<double> lower(n), diag(n), upper(n), dy;
    for (int it = 0; it < 100; ++it) {
        if (gnorm <= tol) return y;
        // Tridiagonal Jacobian from interface-flux finite differences.
        const auto g = ghost_extend(y, prob.bc, 1);
        std::vector<double> dhl(n + 1), dhr(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double yl = g[k], yr = g[k + 1];
            const double hstep = 1e-7 * std::max(1.0, std::max(std::abs(yl), std::abs(yr)));
            dhl[k] = (low_flux(yl + hstep, yr) - low_flux(yl - hstep, yr)) / (2.0 * hstep);
            dhr[k] = (low_flux(yl, yr + hstep) - low_flux(yl, yr - hstep)) / (2.0 * hstep);
        }
        for (int i = 0; i < n; ++i) {
            diag[i] = prob.grid.widths[i] / dt + sigma * (dhl[i + 1] - dhr[i]);
            lower[i] = -sigma * dhl[i];
            upper[i] = sigma * dhr[i + 1];
        }
        if (!cyclic) {
            // Constant extension couples the boundary flux back to the edge cell.
            if (prob.bc.kind == BoundarySpec::Kind::ExtendConstant) {
                diag[0] -= sigma * dhl[0];
                diag[n - 1] += sigma * dhr[n];
            }
            lower[0] = 0.0;
            upper[n - 1] = 0.0;
        }
        std::vector<double> negG(n);
        for (int i = 0; i < n; ++i) negG[i] = -G[i];
        dy = cyclic ? cyclic_tridiagonal_solve(lower, diag, upper, negG)
                    : tridiagonal_solve(lower, diag, upper, negG);

        double step = 1.0;
        bool accepted = false;
        for (int back = 0; back < 25; ++back) {
            std::vector<double> ytrial(n);
            for (int i = 0; i < n; ++i) ytrial[i] = y[i] + step * dy[i];
            interface_fluxes(ytrial, htrial);
            residual(ytrial, htrial, Gtrial);
            const double gn = simd::kernels().max_abs(Gtrial.data(), n);
            if (gn < gnorm * (1.0 - 1e-4 * step) || gn <= tol) {
                y = std::move(ytrial);
                G = Gtrial;
                gnorm = gn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Newton stalled; relax with fixed-point sweeps and try again.
            for (int sweep = 0; sweep < 4; ++sweep) {
                interface_fluxes(y, h);
                for (int i = 0; i < n; ++i)
                    y[i] = dt / prob.grid.widths[i] * (rhs[i] - sigma * (h[i + 1] - h[i]));
            }
            interface_fluxes(y, h);
            residual(y, h, G);
            gnorm = simd::kernels().max_abs(G.data(), n);
        }
    }
    if (gnorm <= tol) return y;
    throw SolverError("implicit nonlinear solve did not converge");
}

Field picard_step(const ConservationProblem1D& prob, const SchemeConfig& cfg, const Field& y,
                  LimiterField* limiters, StepReport* report) {
    check_mode(prob, cfg);
    const int n = prob.grid.n();
    const double dt = cfg.dt, sg = cfg.sigma;
    if (!(sg > 0.0)) throw SolverError("picard_step needs sigma > 0");
    if (guard_needed(cfg.mode) && dt > max_stable_dt(prob, cfg, y) * kCflSlack)
        throw SolverError("explicit part exceeds the monotone time-step bound");

    const bool want_entropy = prob.entropy.has_value();
    const ConsData dn = build_cons_data(prob, cfg.low_flux, y.values, want_entropy);

    std::vector<double> yp = y.values;
    LimiterField a_prev;
    a_prev.alpha_n.assign(n + 1, 0.0);
    a_prev.alpha_np1.assign(n + 1, 0.0);
    LimiterField f;
    LimiterContext1D ctx;
    std::vector<LimiterContext1D::EntropyRows> entropy_cuts;
    std::vector<LimiterContext1D::TadmorRows> tadmor_cuts;
    bool converged = false;
    int iters = 0;
    std::optional<ConsData> frozen;
    for (int p = 0; p < cfg.picard.max_iters; ++p) {
        if (!frozen || p < kFreezeStall)
            frozen = build_cons_data(prob, cfg.low_flux, yp, want_entropy);
        const ConsData& dp = *frozen;
        ctx = cons_context(prob, cfg, y.values, dn, &dp);
        ctx.entropy_rows = std::move(entropy_cuts);
        ctx.tadmor_rows = std::move(tadmor_cuts);
        f = cons_limiters(prob, cfg, ctx, y.values, yp, dn, &dp, report);
        if (cfg.mode == LimiterMode::AE && p >= kMonotoneStallCap)
            for (size_t k = 0; k < f.alpha_n.size(); ++k) {
                f.alpha_n[k] = std::min(f.alpha_n[k], a_prev.alpha_n[k]);
                f.alpha_np1[k] = std::min(f.alpha_np1[k], a_prev.alpha_np1[k]);
            }

        auto solve_with = [&](const LimiterField& fl) {
            std::vector<double> rhs(n);
            for (int i = 0; i < n; ++i) {
                rhs[i] = prob.grid.widths[i] / dt * y.values[i] -
                         (1.0 - sg) * (dn.hL[i + 1] - dn.hL[i]) -
                         (1.0 - sg) *
                             (fl.alpha_n[i + 1] * dn.hd[i + 1] - fl.alpha_n[i] * dn.hd[i]) -
                         sg * (fl.alpha_np1[i + 1] * dp.hd[i + 1] -
                               fl.alpha_np1[i] * dp.hd[i]);
            }
            return solve_implicit_nonlinear(prob, cfg.low_flux, sg, dt, rhs, yp);
        };
        std::vector<double> y_new = solve_with(f);

        if (cfg.mode == LimiterMode::LE) {
            // Same pullback as the explicit path, re-solving the implicit
            // system along the scaling segment.
            const double target = 0.5 * cfg.entropy_tol;
            const auto res = cell_entropy_residual(*prob.entropy, prob.flux, y.values, y_new,
                                                   f.alpha_n, f.alpha_np1, sg, prob.grid,
                                                   prob.bc, dt);
            std::vector<int> violating;
            for (int i = 0; i < n; ++i)
                if (res[i] > target) violating.push_back(i);
            if (!violating.empty()) {
                if (p < kFreezeStall && ctx.entropy_rows.size() < kMaxEntropyCuts) {
                    const ConsData dcand =
                        build_cons_data(prob, cfg.low_flux, y_new, want_entropy);
                    fill_entropy_rows(prob, cfg, y.values, y_new, dn, &dcand, ctx, &violating);
                }
                double lo = 0.0, hi = 1.0;
                for (int b = 0; b < 24; ++b) {
                    const double t = 0.5 * (lo + hi);
                    LimiterField ft = f;
                    scale_limiters(ft, t);
                    std::vector<double> yt = solve_with(ft);
                    if (residual_max(prob, cfg, y.values, yt, ft) <= target)
                        lo = t;
                    else
                        hi = t;
                }
                scale_limiters(f, lo);
                y_new = solve_with(f);
            }
        }
        entropy_cuts = std::move(ctx.entropy_rows);
        tadmor_cuts = std::move(ctx.tadmor_rows);

        bool done =
            picard_converged(cfg.picard, y_new, yp, f, a_prev, p < kAlphaCriterionCap);
        if (done && (cfg.mode == LimiterMode::LE || cfg.mode == LimiterMode::AE))
            done = residual_max(prob, cfg, y.values, y_new, f) <= cfg.entropy_tol;
        yp = std::move(y_new);
        a_prev = f;
        iters = p + 1;
        if (done) {
            converged = true;
            break;
        }
    }
    if (!converged) throw SolverError("picard iteration did not converge in max_iters");

    Field out;
    out.time = y.time + dt;
    out.values = yp;
    if (report) {
        report->picard_iterations = iters;
        report->converged = true;
        report->mass = mass_of(prob.grid, out.values);
        alpha_stats(ctx, f.alpha_n, report);
        if (want_entropy && cfg.low_flux == LowFluxKind::Rusanov) {
            report->has_entropy_residual = true;
            report->entropy_residual_max = residual_max(prob, cfg, y.values, out.values, f);
            report->entropy_dt_ok = dt <= entropy_dt_bound(prob, cfg, y) * kCflSlack;
        }
    }
    if (limiters) *limiters = f;
    return out;
}

Field step(const LinearProblem1D& prob, const SchemeConfig& cfg, const Field& y,
           LimiterField* limiters, StepReport* report) {
    return cfg.sigma > 0.0 ? picard_step(prob, cfg, y, limiters, report)
                           : explicit_step(prob, cfg, y, limiters, report);
}

Field step(const ConservationProblem1D& prob, const SchemeConfig& cfg, const Field& y,
           LimiterField* limiters, StepReport* report) {
    return cfg.sigma > 0.0 ? picard_step(prob, cfg, y, limiters, report)
                           : explicit_step(prob, cfg, y, limiters, report);
}

}  // namespace fct
