#include "fct/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fct {

bool mode_uses_lp(LimiterMode m) {
    return m == LimiterMode::LP || m == LimiterMode::LE || m == LimiterMode::LET;
}

bool mode_uses_entropy(LimiterMode m) {
    return m == LimiterMode::LE || m == LimiterMode::AE || m == LimiterMode::LET;
}

const char* to_string(LimiterMode m) {
    switch (m) {
        case LimiterMode::LowOrder: return "low";
        case LimiterMode::HighOrder: return "high";
        case LimiterMode::LP: return "LP";
        case LimiterMode::AP: return "AP";
        case LimiterMode::LE: return "LE";
        case LimiterMode::AE: return "AE";
        case LimiterMode::LET: return "LET";
    }
    return "?";
}

std::optional<LimiterMode> limiter_mode_from_string(const std::string& s) {
    if (s == "low") return LimiterMode::LowOrder;
    if (s == "high") return LimiterMode::HighOrder;
    if (s == "LP" || s == "lp") return LimiterMode::LP;
    if (s == "AP" || s == "ap") return LimiterMode::AP;
    if (s == "LE" || s == "le") return LimiterMode::LE;
    if (s == "AE" || s == "ae") return LimiterMode::AE;
    if (s == "LET" || s == "let") return LimiterMode::LET;
    return std::nullopt;
}

void snap_small_jumps(std::vector<double>& hd, double y_scale) {
    const double eps = 1e-14 * y_scale;
    for (double& v : hd)
        if (std::abs(v) <= eps) v = 0.0;
}

AntidiffusiveStencil antidiffusive_flux_conservation(const FluxFunction& flux, LowFluxKind low,
                                                     const std::vector<double>& y_ghost) {
    const int n = static_cast<int>(y_ghost.size()) - 2;
    AntidiffusiveStencil st;
    st.hd.resize(n + 1);
    double scale = 0.0;
    for (double v : y_ghost) scale = std::max(scale, std::abs(v));
    const double eps = 1e-14 * scale;
    for (int k = 0; k <= n; ++k) {
        const double yl = y_ghost[k], yr = y_ghost[k + 1];
        if (std::abs(yr - yl) <= eps) {
            st.hd[k] = 0.0;
            continue;
        }
        const double high = 0.5 * (flux.f(yl) + flux.f(yr));
        const double lo = low == LowFluxKind::Godunov ? godunov_flux(flux, yl, yr)
                                                      : rusanov_flux(flux, yl, yr);
        st.hd[k] = high - lo;
    }
    return st;
}

namespace {

// Interface k lies between cells k-1 and k. Canonical variable index per
// interface: periodic problems fold the wrap interface n onto 0; boundary
// interfaces of non-periodic problems hold no variable.
int canonical_iface(int k, int n, bool periodic) {
    if (periodic) return k % n;
    if (k == 0 || k == n) return -1;
    return k;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

LimiterBounds limiter_bounds(const LimiterContext1D& ctx) {
    const int n = ctx.grid->n();
    const double sg = ctx.sigma;
    LimiterBounds b;
    b.Qp.resize(n);
    b.Qm.resize(n);
    b.Pp.resize(n);
    b.Pm.resize(n);
    b.Rp.resize(n);
    b.Rm.resize(n);
    for (int i = 0; i < n; ++i) {
        const double vol = ctx.grid->widths[i] / ctx.dt;
        b.Qp[i] = vol * (ctx.smax[i] - ctx.y_n[i]) + (1.0 - sg) * ctx.lowdiff_n[i];
        b.Qm[i] = vol * (ctx.smin[i] - ctx.y_n[i]) + (1.0 - sg) * ctx.lowdiff_n[i];
        // Row coefficients of cell i are +hd at the left interface, -hd at the right.
        const double cl_n = ctx.hd_n.hd[i], cr_n = -ctx.hd_n.hd[i + 1];
        double pp = (1.0 - sg) * (std::max(0.0, cl_n) + std::max(0.0, cr_n));
        double pm = (1.0 - sg) * (std::min(0.0, cl_n) + std::min(0.0, cr_n));
        if (ctx.two_levels()) {
            const double cl_p = ctx.hd_np1.hd[i], cr_p = -ctx.hd_np1.hd[i + 1];
            pp += sg * (std::max(0.0, cl_p) + std::max(0.0, cr_p));
            pm += sg * (std::min(0.0, cl_p) + std::min(0.0, cr_p));
        }
        b.Pp[i] = pp;
        b.Pm[i] = pm;
        b.Rp[i] = pp > 0.0 ? clamp01(b.Qp[i] / pp) : 1.0;
        b.Rm[i] = pm < 0.0 ? clamp01(b.Qm[i] / pm) : 1.0;
    }
    return b;
}

LimiterField approximate_limiters(const LimiterContext1D& ctx, const LimiterBounds& bounds) {
    const int n = ctx.grid->n();
    const bool per = ctx.periodic();
    LimiterField f;
    f.alpha_n.assign(n + 1, 1.0);
    for (int k = per ? 0 : 1; k < n; ++k) {
        const int L = per ? (k + n - 1) % n : k - 1;
        const int R = k;
        double hdc = (1.0 - ctx.sigma) * ctx.hd_n.hd[k];
        if (ctx.two_levels()) hdc += ctx.sigma * ctx.hd_np1.hd[k];
        double a = 1.0;
        if (hdc < 0.0)
            a = std::min(bounds.Rp[L], bounds.Rm[R]);
        else if (hdc > 0.0)
            a = std::min(bounds.Rm[L], bounds.Rp[R]);
        f.alpha_n[k] = a;
    }
    if (per) f.alpha_n[n] = f.alpha_n[0];
    f.alpha_np1 = f.alpha_n;  // the approximate solution is a single field
    return f;
}

std::vector<double> entropy_limiter_cap(const LimiterContext1D& ctx) {
    const int n = ctx.grid->n();
    const double sg = ctx.sigma;
    const auto& rows = ctx.entropy_rows.front();  // full linearization set
    if (static_cast<int>(rows.cells.size()) != n)
        throw LPError("entropy cap needs a full linearization row set");
    std::vector<double> Y(n, 0.0);
    auto neg = [](double v) { return std::min(0.0, v); };
    for (int i = 0; i < n; ++i) {
        Y[i] = (1.0 - sg) * (neg(rows.lam_n_left[i]) + neg(rows.lam_n_right[i]));
        if (ctx.two_levels()) Y[i] += sg * (neg(rows.lam_p_left[i]) + neg(rows.lam_p_right[i]));
    }
    auto cell_term = [&](int i, bool right) {
        double lamc = (1.0 - sg) * (right ? rows.lam_n_right[i] : rows.lam_n_left[i]);
        if (ctx.two_levels()) lamc += sg * (right ? rows.lam_p_right[i] : rows.lam_p_left[i]);
        if (lamc >= 0.0) return 1.0;  // this interface only helps the inequality
        if (!(Y[i] < 0.0)) return 1.0;
        return clamp01(rows.W[i] / Y[i]);
    };
    const bool per = ctx.periodic();
    std::vector<double> cap(n + 1, 1.0);
    for (int k = per ? 0 : 1; k < n; ++k) {
        const int L = per ? (k + n - 1) % n : k - 1;
        const int R = k;
        cap[k] = std::min(1.0, std::min(cell_term(L, /*right=*/true), cell_term(R, false)));
    }
    if (per) cap[n] = cap[0];
    return cap;
}

namespace {

struct VarRegistry {
    // var_of[level][canonical interface] -> LP variable or -1
    std::vector<int> var0, var1;
    LpVarMap map;
    int count = 0;

    void init(int n_ifaces, bool two_levels) {
        var0.assign(n_ifaces, -1);
        var1.assign(n_ifaces, two_levels ? -1 : -2);
    }
    int add(int level, int k, double mag) {
        auto& v = level == 0 ? var0 : var1;
        if (v[k] == -1) {
            v[k] = count++;
            map.iface.push_back(k);
            map.level.push_back(level);
            map.mag.push_back(mag);
        }
        return v[k];
    }
    int get(int level, int k) const { return (level == 0 ? var0 : var1)[k]; }
};

}  // namespace

LinearProgram build_lp(const LimiterContext1D& ctx, LpVarMap* map_out) {
    const int n = ctx.grid->n();
    const bool per = ctx.periodic();
    const int n_ifaces = per ? n : n + 1;

    VarRegistry reg;
    reg.init(n_ifaces, ctx.two_levels());
    auto hd_at = [&](int level, int k) {
        const auto& hd = level == 0 ? ctx.hd_n.hd : ctx.hd_np1.hd;
        return hd[k];
    };
    auto register_iface = [&](int level, int k_raw) {
        const int k = canonical_iface(k_raw, n, per);
        if (k < 0) return -1;
        const double hd = hd_at(level, k);
        if (hd == 0.0) return -1;  // no antidiffusion, no variable
        return reg.add(level, k, ctx.beta_form ? std::abs(hd) : 1.0);
    };
    const int levels = ctx.two_levels() ? 2 : 1;
    for (int level = 0; level < levels; ++level)
        for (int k = 0; k < n_ifaces; ++k) register_iface(level, k);

    LinearProgram lp(reg.count);
    for (int j = 0; j < reg.count; ++j) {
        lp.objective[j] = 1.0;
        lp.var_lo[j] = 0.0;
        lp.var_hi[j] = ctx.beta_form ? reg.map.mag[j] : 1.0;
    }

    const LimiterBounds bounds = limiter_bounds(ctx);
    const double sg = ctx.sigma;
    auto level_weight = [&](int level) { return level == 0 ? 1.0 - sg : sg; };
    auto bound_coef = [&](int level, int k, double side) {
        // side: +1 left interface of the cell, -1 right
        const double hd = hd_at(level, k);
        const double base = ctx.beta_form ? (hd > 0 ? 1.0 : -1.0) : hd;
        return side * level_weight(level) * base;
    };

    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> coeffs;
        for (int level = 0; level < levels; ++level) {
            const int kl = canonical_iface(i, n, per);
            const int kr = canonical_iface(i + 1, n, per);
            if (kl >= 0) {
                const int v = reg.get(level, kl);
                if (v >= 0) coeffs.emplace_back(v, bound_coef(level, kl, +1.0));
            }
            if (kr >= 0) {
                const int v = reg.get(level, kr);
                if (v >= 0) coeffs.emplace_back(v, bound_coef(level, kr, -1.0));
            }
        }
        lp.add_row_sparse(std::move(coeffs), bounds.Qm[i], bounds.Qp[i]);
    }

    for (const auto& rows : ctx.entropy_rows) {
        const int m = rows.cells.empty() ? n : static_cast<int>(rows.cells.size());
        for (int t = 0; t < m; ++t) {
            const int i = rows.cells.empty() ? t : rows.cells[t];
            std::vector<std::pair<int, double>> coeffs;
            auto put = [&](int level, int k_raw, double lam) {
                const int k = canonical_iface(k_raw, n, per);
                if (k < 0 || lam == 0.0) return;
                const int v = reg.get(level, k);
                if (v >= 0) coeffs.emplace_back(v, level_weight(level) * lam);
            };
            put(0, i, rows.lam_n_left[t]);
            put(0, i + 1, rows.lam_n_right[t]);
            if (ctx.two_levels()) {
                put(1, i, rows.lam_p_left[t]);
                put(1, i + 1, rows.lam_p_right[t]);
            }
            lp.add_row_sparse(std::move(coeffs), rows.W[t], kLpInf);
        }
    }

    for (const auto& rows : ctx.tadmor_rows) {
        for (int i = 0; i < n; ++i) {
            std::vector<std::pair<int, double>> coeffs;
            auto put = [&](int level, int k_raw, double c) {
                const int k = canonical_iface(k_raw, n, per);
                if (k < 0 || c == 0.0) return;
                const int v = reg.get(level, k);
                if (v >= 0) coeffs.emplace_back(v, level_weight(level) * c);
            };
            put(0, i, rows.n_left[i]);
            put(0, i + 1, rows.n_right[i]);
            if (ctx.two_levels()) {
                put(1, i, rows.p_left[i]);
                put(1, i + 1, rows.p_right[i]);
            }
            lp.add_row_sparse(std::move(coeffs), -kLpInf, rows.rhs[i]);
        }
    }

    if (map_out) *map_out = reg.map;
    return lp;
}

LimiterField limiters_from_lp(const LimiterContext1D& ctx, const LpVarMap& map,
                              const LPSolution& sol) {
    const int n = ctx.grid->n();
    LimiterField f;
    f.alpha_n.assign(n + 1, 1.0);
    f.alpha_np1.assign(n + 1, 1.0);
    for (size_t j = 0; j < map.iface.size(); ++j) {
        const double a = clamp01(sol.x[j] / map.mag[j]);
        auto& dst = map.level[j] == 0 ? f.alpha_n : f.alpha_np1;
        dst[map.iface[j]] = a;
        if (ctx.periodic() && map.iface[j] == 0) dst[n] = a;
    }
    return f;
}

LimiterField solve_lp_limiters(const LimiterContext1D& ctx, int* lp_iterations) {
    LpVarMap map;
    const LinearProgram lp = build_lp(ctx, &map);
    const LPSolution sol = solve_reduced(lp);
    if (sol.status != LPSolution::Status::Optimal)
        throw LPError("limiter LP unexpectedly infeasible");
    if (lp_iterations) *lp_iterations += sol.iterations;
    return limiters_from_lp(ctx, map, sol);
}

// ---------------------------------------------------------------------------
// 2D machinery on the flattened tensor grid
// ---------------------------------------------------------------------------

LimiterBounds limiter_bounds_2d(const LimiterContext2D& ctx) {
    const int nx = ctx.grid->nx(), ny = ctx.grid->ny();
    const double sg = ctx.sigma;
    const int n = nx * ny;
    LimiterBounds b;
    b.Qp.resize(n);
    b.Qm.resize(n);
    b.Pp.assign(n, 0.0);
    b.Pm.assign(n, 0.0);
    b.Rp.resize(n);
    b.Rm.resize(n);
    auto accumulate = [&](const std::vector<double>& hd1, const std::vector<double>& hd2,
                          double wgt) {
        if (wgt == 0.0) return;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int r = i + j * nx;
                const double c[4] = {hd1[i + j * (nx + 1)], -hd1[i + 1 + j * (nx + 1)],
                                     hd2[i + j * nx], -hd2[i + (j + 1) * nx]};
                double pp = 0.0, pm = 0.0;
                for (double v : c) {
                    pp += std::max(0.0, v);
                    pm += std::min(0.0, v);
                }
                b.Pp[r] += wgt * pp;
                b.Pm[r] += wgt * pm;
            }
    };
    accumulate(ctx.hd1_n, ctx.hd2_n, 1.0 - sg);
    if (ctx.two_levels()) accumulate(ctx.hd1_np1, ctx.hd2_np1, sg);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int r = i + j * nx;
            const double vol = ctx.grid->gx.widths[i] * ctx.grid->gy.widths[j] / ctx.dt;
            b.Qp[r] = vol * (ctx.smax[r] - ctx.y_n[r]) + (1.0 - sg) * ctx.lowdiff_n[r];
            b.Qm[r] = vol * (ctx.smin[r] - ctx.y_n[r]) + (1.0 - sg) * ctx.lowdiff_n[r];
            b.Rp[r] = b.Pp[r] > 0.0 ? clamp01(b.Qp[r] / b.Pp[r]) : 1.0;
            b.Rm[r] = b.Pm[r] < 0.0 ? clamp01(b.Qm[r] / b.Pm[r]) : 1.0;
        }
    return b;
}

LimiterField2D approximate_limiters_2d(const LimiterContext2D& ctx, const LimiterBounds& bounds) {
    const int nx = ctx.grid->nx(), ny = ctx.grid->ny();
    const double sg = ctx.sigma;
    LimiterField2D f;
    f.a1_n.assign((nx + 1) * ny, 1.0);
    f.a2_n.assign(nx * (ny + 1), 1.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const int k = i + j * (nx + 1);
            double hdc = (1.0 - sg) * ctx.hd1_n[k];
            if (ctx.two_levels()) hdc += sg * ctx.hd1_np1[k];
            if (hdc == 0.0) continue;
            const int L = (i - 1) + j * nx, R = i + j * nx;
            f.a1_n[k] = hdc < 0.0 ? std::min(bounds.Rp[L], bounds.Rm[R])
                                  : std::min(bounds.Rm[L], bounds.Rp[R]);
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int k = i + j * nx;
            double hdc = (1.0 - sg) * ctx.hd2_n[k];
            if (ctx.two_levels()) hdc += sg * ctx.hd2_np1[k];
            if (hdc == 0.0) continue;
            const int L = i + (j - 1) * nx, R = i + j * nx;
            f.a2_n[k] = hdc < 0.0 ? std::min(bounds.Rp[L], bounds.Rm[R])
                                  : std::min(bounds.Rm[L], bounds.Rp[R]);
        }
    f.a1_np1 = f.a1_n;
    f.a2_np1 = f.a2_n;
    return f;
}

LimiterField2D solve_lp_limiters_2d(const LimiterContext2D& ctx, int* lp_iterations) {
    const int nx = ctx.grid->nx(), ny = ctx.grid->ny();
    const int n1 = (nx + 1) * ny;
    const int n2 = nx * (ny + 1);
    const int levels = ctx.two_levels() ? 2 : 1;

    // Variables: beta = alpha*|hd| per interface and level, x-axis block first.
    std::vector<int> var(static_cast<size_t>(levels) * (n1 + n2), -1);
    auto hd_of = [&](int level, int axis, int k) {
        if (axis == 0) return level == 0 ? ctx.hd1_n[k] : ctx.hd1_np1[k];
        return level == 0 ? ctx.hd2_n[k] : ctx.hd2_np1[k];
    };
    auto slot = [&](int level, int axis, int k) { return level * (n1 + n2) + axis * n1 + k; };

    int count = 0;
    std::vector<double> mags;
    for (int level = 0; level < levels; ++level)
        for (int axis = 0; axis < 2; ++axis) {
            const int kn = axis == 0 ? n1 : n2;
            for (int k = 0; k < kn; ++k) {
                const double hd = hd_of(level, axis, k);
                if (hd == 0.0) continue;
                var[slot(level, axis, k)] = count++;
                mags.push_back(std::abs(hd));
            }
        }

    LinearProgram lp(count);
    for (int j = 0; j < count; ++j) {
        lp.objective[j] = 1.0;
        lp.var_hi[j] = mags[j];
    }

    const LimiterBounds bounds = limiter_bounds_2d(ctx);
    const double sg = ctx.sigma;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int r = i + j * nx;
            std::vector<std::pair<int, double>> coeffs;
            for (int level = 0; level < levels; ++level) {
                const double wgt = level == 0 ? 1.0 - sg : sg;
                const int ks[4] = {i + j * (nx + 1), i + 1 + j * (nx + 1), i + j * nx,
                                   i + (j + 1) * nx};
                const int axes[4] = {0, 0, 1, 1};
                const double sides[4] = {+1.0, -1.0, +1.0, -1.0};
                for (int t = 0; t < 4; ++t) {
                    const int v = var[slot(level, axes[t], ks[t])];
                    if (v < 0) continue;
                    const double hd = hd_of(level, axes[t], ks[t]);
                    coeffs.emplace_back(v, sides[t] * wgt * (hd > 0 ? 1.0 : -1.0));
                }
            }
            lp.add_row_sparse(std::move(coeffs), bounds.Qm[r], bounds.Qp[r]);
        }

    const LPSolution sol = solve_reduced(lp);
    if (sol.status != LPSolution::Status::Optimal)
        throw LPError("2d limiter LP unexpectedly infeasible");
    if (lp_iterations) *lp_iterations += sol.iterations;

    LimiterField2D f;
    f.a1_n.assign(n1, 1.0);
    f.a2_n.assign(n2, 1.0);
    f.a1_np1.assign(n1, 1.0);
    f.a2_np1.assign(n2, 1.0);
    for (int level = 0; level < levels; ++level)
        for (int axis = 0; axis < 2; ++axis) {
            const int kn = axis == 0 ? n1 : n2;
            for (int k = 0; k < kn; ++k) {
                const int v = var[slot(level, axis, k)];
                if (v < 0) continue;
                const double a = clamp01(sol.x[v] / mags[v]);
                auto& dst = axis == 0 ? (level == 0 ? f.a1_n : f.a1_np1)
                                      : (level == 0 ? f.a2_n : f.a2_np1);
                dst[k] = a;
            }
        }
    if (levels == 1) {
        f.a1_np1 = f.a1_n;
        f.a2_np1 = f.a2_n;
    }
    return f;
}

}  // namespace fct
