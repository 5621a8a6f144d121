#include "fct/scheme2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fct/simd.hpp"

namespace fct {

namespace {

constexpr double kCflSlack = 1.0 + 1e-9;

double up(double v) { return 0.5 * (v + std::abs(v)); }
double um(double v) { return 0.5 * (v - std::abs(v)); }

}  // namespace

Operator2D assemble_2d(const LinearProblem2D& prob, double t) {
    const Grid1D& gx = prob.grid.gx;
    const Grid1D& gy = prob.grid.gy;
    const int nx = gx.n(), ny = gy.n();
    if (prob.bc.x.kind != BoundarySpec::Kind::Dirichlet ||
        prob.bc.y.kind != BoundarySpec::Kind::Dirichlet)
        throw SolverError("2d scheme supports dirichlet boundaries");

    Operator2D op;
    op.nx = nx;
    op.ny = ny;
    const int n1 = (nx + 1) * ny, n2 = nx * (ny + 1);
    op.u1.resize(n1);
    op.d1.resize(n1);
    op.u2.resize(n2);
    op.d2.resize(n2);
    auto& u1 = op.u1;
    auto& d1 = op.d1;
    auto& u2 = op.u2;
    auto& d2 = op.d2;
    op.b1.assign(n1, 0.0);
    op.b2.assign(n2, 0.0);

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int k = i + j * (nx + 1);
            const double x = gx.interfaces[i], y = gy.centers[j];
            const double u = prob.u1(x, y, t);
            const double kd = prob.k1 ? prob.k1(x, y, t) : 0.0;
            if (kd < 0.0) throw SolverError("negative diffusivity");
            const double sp = gx.interface_spacing(i == 0 ? 1 : (i == nx ? nx - 1 : i));
            u1[k] = u;
            d1[k] = std::max(0.0, kd / sp - 0.5 * std::abs(u));
            op.b1[k] = (i == 0 || i == nx) ? 0.0 : std::max(0.0, 0.5 * std::abs(u) - kd / sp);
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int k = i + j * nx;
            const double x = gx.centers[i], y = gy.interfaces[j];
            const double u = prob.u2(x, y, t);
            const double kd = prob.k2 ? prob.k2(x, y, t) : 0.0;
            if (kd < 0.0) throw SolverError("negative diffusivity");
            const double sp = gy.interface_spacing(j == 0 ? 1 : (j == ny ? ny - 1 : j));
            u2[k] = u;
            d2[k] = std::max(0.0, kd / sp - 0.5 * std::abs(u));
            op.b2[k] = (j == 0 || j == ny) ? 0.0 : std::max(0.0, 0.5 * std::abs(u) - kd / sp);
        }

    const int n = nx * ny;
    op.aC.assign(n, 0.0);
    op.aW.assign(n, 0.0);
    op.aE.assign(n, 0.0);
    op.aS.assign(n, 0.0);
    op.aN.assign(n, 0.0);
    op.g.assign(n, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int r = i + j * nx;
            const int kw = i + j * (nx + 1), ke = kw + 1;
            const int ks = i + j * nx, kn = i + (j + 1) * nx;
            const double dx = gx.widths[i], dy = gy.widths[j];
            op.aC[r] = (up(u1[ke]) - um(u1[kw]) + d1[ke] + d1[kw]) / dx +
                       (up(u2[kn]) - um(u2[ks]) + d2[kn] + d2[ks]) / dy;
            const double cw = (up(u1[kw]) + d1[kw]) / dx;
            const double ce = (-um(u1[ke]) + d1[ke]) / dx;
            const double cs = (up(u2[ks]) + d2[ks]) / dy;
            const double cn = (-um(u2[kn]) + d2[kn]) / dy;
            if (i > 0)
                op.aW[r] = -cw;
            else
                op.g[r] += cw * prob.bc.x.left;
            if (i + 1 < nx)
                op.aE[r] = -ce;
            else
                op.g[r] += ce * prob.bc.x.right;
            if (j > 0)
                op.aS[r] = -cs;
            else
                op.g[r] += cs * prob.bc.y.left;
            if (j + 1 < ny)
                op.aN[r] = -cn;
            else
                op.g[r] += cn * prob.bc.y.right;
            op.max_aii = std::max(op.max_aii, op.aC[r]);
        }
    return op;
}

namespace {

std::vector<double> apply_operator(const Operator2D& op, const std::vector<double>& y) {
    const int nx = op.nx, ny = op.ny;
    std::vector<double> r(nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int q = i + j * nx;
            double s = op.aC[q] * y[q];
            if (i > 0) s += op.aW[q] * y[q - 1];
            if (i + 1 < nx) s += op.aE[q] * y[q + 1];
            if (j > 0) s += op.aS[q] * y[q - nx];
            if (j + 1 < ny) s += op.aN[q] * y[q + nx];
            r[q] = s;
        }
    return r;
}

/// Transverse-width-scaled antidiffusive interface fluxes (area-scaled rows).
void antidiffusion_2d(const LinearProblem2D& prob, const Operator2D& op, HighFluxKind high,
                      const Grid2D& grid, const std::vector<double>& y, std::vector<double>& hd1,
                      std::vector<double>& hd2) {
    const int nx = op.nx, ny = op.ny;
    hd1.assign((nx + 1) * ny, 0.0);
    hd2.assign(nx * (ny + 1), 0.0);
    const double eps = 1e-14 * simd::kernels().max_abs(y.data(), nx * ny);
    if (high == HighFluxKind::Quick) {
        for (double d : op.d1)
            if (d > 0.0) throw SolverError("QUICK high-order flux requires pure advection");
        for (double d : op.d2)
            if (d > 0.0) throw SolverError("QUICK high-order flux requires pure advection");
        // Dirichlet ghosts for the wide stencil.
        std::vector<double> col(ny + 4), row(nx + 4);
        for (int j = 0; j < ny; ++j) {
            const double wy = grid.gy.widths[j];
            row[0] = row[1] = prob.bc.x.left;
            for (int i = 0; i < nx; ++i) row[i + 2] = y[i + j * nx];
            row[nx + 2] = row[nx + 3] = prob.bc.x.right;
            for (int i = 1; i < nx; ++i) {
                const int k = i + j * (nx + 1);
                const double v = quick_antidiffusive(op.u1[k], row[i], row[i + 1], row[i + 2],
                                                     row[i + 3]);
                if (std::abs(v) > eps) hd1[k] = v * wy;
            }
        }
        for (int i = 0; i < nx; ++i) {
            const double wx = grid.gx.widths[i];
            col[0] = col[1] = prob.bc.y.left;
            for (int j = 0; j < ny; ++j) col[j + 2] = y[i + j * nx];
            col[ny + 2] = col[ny + 3] = prob.bc.y.right;
            for (int j = 1; j < ny; ++j) {
                const int k = i + j * nx;
                const double v = quick_antidiffusive(op.u2[k], col[j], col[j + 1], col[j + 2],
                                                     col[j + 3]);
                if (std::abs(v) > eps) hd2[k] = v * wx;
            }
        }
        return;
    }
    for (int j = 0; j < ny; ++j) {
        const double wy = grid.gy.widths[j];
        for (int i = 1; i < nx; ++i) {
            const int k = i + j * (nx + 1);
            if (op.b1[k] == 0.0) continue;
            const double dyv = y[i + j * nx] - y[i - 1 + j * nx];
            if (std::abs(dyv) <= eps) continue;
            hd1[k] = op.b1[k] * dyv * wy;
        }
    }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int k = i + j * nx;
            if (op.b2[k] == 0.0) continue;
            const double dyv = y[i + j * nx] - y[i + (j - 1) * nx];
            if (std::abs(dyv) <= eps) continue;
            hd2[k] = op.b2[k] * dyv * grid.gx.widths[i];
        }
}

/// Five-point stencil extrema; Dirichlet boundary values stay out of the
/// stencil, matching the matrix rows.
void stencil_extrema_2d(const std::vector<double>& y, int nx, int ny, std::vector<double>& mn,
                        std::vector<double>& mx) {
    const int n = nx * ny;
    mn.resize(n);
    mx.resize(n);
    std::vector<double> row(nx + 2);
    for (int j = 0; j < ny; ++j) {
        const double* yr = y.data() + j * nx;
        row[0] = yr[0];
        for (int i = 0; i < nx; ++i) row[i + 1] = yr[i];
        row[nx + 1] = yr[nx - 1];
        simd::kernels().window3_minmax(row.data(), mn.data() + j * nx, mx.data() + j * nx, nx);
        if (j > 0) {
            simd::kernels().min_inplace(mn.data() + j * nx, y.data() + (j - 1) * nx, nx);
            simd::kernels().max_inplace(mx.data() + j * nx, y.data() + (j - 1) * nx, nx);
        }
    }
    for (int j = 0; j + 1 < ny; ++j) {
        simd::kernels().min_inplace(mn.data() + j * nx, y.data() + (j + 1) * nx, nx);
        simd::kernels().max_inplace(mx.data() + j * nx, y.data() + (j + 1) * nx, nx);
    }
}

std::vector<double> offdiag_weighted_diff_2d(const Operator2D& op, const Grid2D& grid,
                                             const std::vector<double>& y) {
    const int nx = op.nx, ny = op.ny;
    std::vector<double> r(nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int q = i + j * nx;
            double s = 0.0;
            if (i > 0) s += op.aW[q] * (y[q - 1] - y[q]);
            if (i + 1 < nx) s += op.aE[q] * (y[q + 1] - y[q]);
            if (j > 0) s += op.aS[q] * (y[q - nx] - y[q]);
            if (j + 1 < ny) s += op.aN[q] * (y[q + nx] - y[q]);
            r[q] = s * grid.gx.widths[i] * grid.gy.widths[j];
        }
    return r;
}

LimiterContext2D context_2d(const LinearProblem2D& prob, const SchemeConfig& cfg,
                            const Operator2D& op_n, const std::vector<double>& y) {
    LimiterContext2D ctx;
    ctx.grid = &prob.grid;
    ctx.sigma = cfg.sigma;
    ctx.dt = cfg.dt;
    ctx.y_n = y;
    stencil_extrema_2d(y, op_n.nx, op_n.ny, ctx.smin, ctx.smax);
    ctx.lowdiff_n = offdiag_weighted_diff_2d(op_n, prob.grid, y);
    antidiffusion_2d(prob, op_n, cfg.high_flux, prob.grid, y, ctx.hd1_n, ctx.hd2_n);
    return ctx;
}

LimiterField2D limiters_2d(const LimiterContext2D& ctx, LimiterMode mode, StepReport* report) {
    const int nx = ctx.grid->nx(), ny = ctx.grid->ny();
    LimiterField2D f;
    switch (mode) {
        case LimiterMode::LowOrder:
        case LimiterMode::HighOrder: {
            const double a = mode == LimiterMode::HighOrder ? 1.0 : 0.0;
            f.a1_n.assign((nx + 1) * ny, a);
            f.a2_n.assign(nx * (ny + 1), a);
            f.a1_np1 = f.a1_n;
            f.a2_np1 = f.a2_n;
            return f;
        }
        case LimiterMode::AP:
            return approximate_limiters_2d(ctx, limiter_bounds_2d(ctx));
        case LimiterMode::LP: {
            int it = 0;
            f = solve_lp_limiters_2d(ctx, &it);
            if (report) report->lp_iterations += it;
            return f;
        }
        default:
            throw SolverError("entropy-constrained limiting needs a conservation-law problem");
    }
}

/// Flux-correction term per cell (1/time units).
void correction_2d(const Grid2D& grid, const std::vector<double>& hd1,
                   const std::vector<double>& hd2, const std::vector<double>& a1,
                   const std::vector<double>& a2, std::vector<double>& corr) {
    const int nx = grid.nx(), ny = grid.ny();
    corr.assign(nx * ny, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int q = i + j * nx;
            const int kw = i + j * (nx + 1), ke = kw + 1;
            const int ks = i + j * nx, kn = i + (j + 1) * nx;
            const double area = grid.gx.widths[i] * grid.gy.widths[j];
            corr[q] = (a1[kw] * hd1[kw] - a1[ke] * hd1[ke] + a2[ks] * hd2[ks] -
                       a2[kn] * hd2[kn]) /
                      area;
        }
}

void alpha_stats_2d(const LimiterField2D& f, int nx, int ny, StepReport* report) {
    if (!report) return;
    double mn = 1.0, sum = 0.0;
    long count = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double a = f.a1_n[i + j * (nx + 1)];
            mn = std::min(mn, a);
            sum += a;
            ++count;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double a = f.a2_n[i + j * nx];
            mn = std::min(mn, a);
            sum += a;
            ++count;
        }
    report->alpha_min = mn;
    report->alpha_mean = count ? sum / count : 1.0;
}

bool rel_change_small(const std::vector<double>& y_new, const std::vector<double>& y_old,
                      const PicardParams& pp) {
    for (size_t i = 0; i < y_new.size(); ++i) {
        const double rel = std::abs(y_new[i] - y_old[i]) / std::max(pp.delta, std::abs(y_new[i]));
        if (!(rel < pp.eps1)) return false;
    }
    return true;
}

bool alpha_change_small(const LimiterField2D& a, const LimiterField2D& b,
                        const PicardParams& pp) {
    auto ok = [&](const std::vector<double>& u, const std::vector<double>& v) {
        for (size_t k = 0; k < u.size(); ++k)
            if (!(std::abs(u[k] - v[k]) < pp.eps2)) return false;
        return true;
    };
    return ok(a.a1_n, b.a1_n) && ok(a.a2_n, b.a2_n) && ok(a.a1_np1, b.a1_np1) &&
           ok(a.a2_np1, b.a2_np1);
}

}  // namespace

double max_stable_dt_2d(const LinearProblem2D& prob, const SchemeConfig& cfg, const Field& y) {
    if (cfg.sigma >= 1.0) return std::numeric_limits<double>::infinity();
    const Operator2D op = assemble_2d(prob, y.time);
    if (op.max_aii <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / ((1.0 - cfg.sigma) * op.max_aii);
}

Field step_2d(const LinearProblem2D& prob, const SchemeConfig& cfg, const Field& y,
              LimiterField2D* limiters, StepReport* report, Workspace2D* ws) {
    const int nx = prob.grid.nx(), ny = prob.grid.ny();
    const int n = nx * ny;
    const double dt = cfg.dt, sg = cfg.sigma;
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    const bool guarded = sg == 0.0 || (cfg.mode != LimiterMode::LowOrder &&
                                       cfg.mode != LimiterMode::HighOrder);
    if (guarded && dt > max_stable_dt_2d(prob, cfg, y) * kCflSlack)
        throw SolverError("explicit part exceeds the monotone time-step bound");

    const Operator2D op_n = assemble_2d(prob, y.time);
    const auto ay_n = apply_operator(op_n, y.values);
    LimiterContext2D ctx = context_2d(prob, cfg, op_n, y.values);

    Field out;
    out.time = y.time + dt;
    LimiterField2D f;

    if (sg == 0.0) {
        f = limiters_2d(ctx, cfg.mode, report);
        std::vector<double> corr;
        correction_2d(prob.grid, ctx.hd1_n, ctx.hd2_n, f.a1_n, f.a2_n, corr);
        out.values.resize(n);
        for (int q = 0; q < n; ++q)
            out.values[q] = y.values[q] - dt * (ay_n[q] - op_n.g[q]) + dt * corr[q];
        if (report) report->picard_iterations = 1;
    } else {
        const Operator2D op_p = prob.time_independent ? op_n : assemble_2d(prob, y.time + dt);
        // Banded factorization of the implicit operator, cached across steps
        // when coefficients are time-independent.
        BandedMatrix* mat = nullptr;
        BandedMatrix local(n, nx);
        const bool reuse = ws && prob.time_independent && ws->factored && ws->dt == dt &&
                           ws->sigma == sg && ws->factored->n() == n;
        if (reuse) {
            mat = &*ws->factored;
        } else {
            BandedMatrix m(n, nx);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const int q = i + j * nx;
                    m.at(q, q) = 1.0 + dt * sg * op_p.aC[q];
                    if (i > 0) m.at(q, q - 1) = dt * sg * op_p.aW[q];
                    if (i + 1 < nx) m.at(q, q + 1) = dt * sg * op_p.aE[q];
                    if (j > 0) m.at(q, q - nx) = dt * sg * op_p.aS[q];
                    if (j + 1 < ny) m.at(q, q + nx) = dt * sg * op_p.aN[q];
                }
            m.factor();
            if (ws && prob.time_independent) {
                ws->factored = std::move(m);
                ws->dt = dt;
                ws->sigma = sg;
                mat = &*ws->factored;
            } else {
                local = std::move(m);
                mat = &local;
            }
        }

        std::vector<double> yp = y.values;
        LimiterField2D a_prev;
        a_prev.a1_n.assign((nx + 1) * ny, 0.0);
        a_prev.a2_n.assign(nx * (ny + 1), 0.0);
        a_prev.a1_np1 = a_prev.a1_n;
        a_prev.a2_np1 = a_prev.a2_n;
        std::vector<double> corr_n, corr_p, hd1_p, hd2_p, rhs(n);
        bool converged = false;
        int iters = 0;
        for (int p = 0; p < cfg.picard.max_iters; ++p) {
            antidiffusion_2d(prob, op_p, cfg.high_flux, prob.grid, yp, hd1_p, hd2_p);
            ctx.hd1_np1 = hd1_p;
            ctx.hd2_np1 = hd2_p;
            f = limiters_2d(ctx, cfg.mode, report);
            correction_2d(prob.grid, ctx.hd1_n, ctx.hd2_n, f.a1_n, f.a2_n, corr_n);
            correction_2d(prob.grid, hd1_p, hd2_p, f.a1_np1, f.a2_np1, corr_p);
            for (int q = 0; q < n; ++q)
                rhs[q] = y.values[q] - dt * (1.0 - sg) * ay_n[q] + dt * (1.0 - sg) * corr_n[q] +
                         dt * sg * corr_p[q] +
                         dt * (sg * op_p.g[q] + (1.0 - sg) * op_n.g[q]);
            std::vector<double> y_new = mat->solve(rhs);
            const bool done =
                rel_change_small(y_new, yp, cfg.picard) && alpha_change_small(f, a_prev, cfg.picard);
            yp = std::move(y_new);
            a_prev = f;
            iters = p + 1;
            if (done) {
                converged = true;
                break;
            }
        }
        if (!converged) throw SolverError("picard iteration did not converge in max_iters");
        out.values = std::move(yp);
        if (report) report->picard_iterations = iters;
    }

    if (report) {
        double mass = 0.0;
        for (int j = 0; j < ny; ++j)
            mass += prob.grid.gy.widths[j] *
                    simd::kernels().dot(prob.grid.gx.widths.data(), out.values.data() + j * nx,
                                        nx);
        report->mass = mass;
        report->converged = true;
        alpha_stats_2d(f, nx, ny, report);
    }
    if (limiters) *limiters = f;
    return out;
}

}  // namespace fct
