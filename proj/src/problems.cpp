#include "fct/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "fct/simd.hpp"

namespace fct {

std::vector<std::string> problem_names() {
    return {"advection-shapes", "solid-rotation",    "nonconvex-riemann",
            "burgers",          "buckley-leverett", "convection-diffusion"};
}

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec advection_shapes(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "advection-shapes";
    p.dim = 1;
    p.cells = ov.cells.value_or(400);
    p.dt = ov.dt.value_or(0.002);
    p.t_end = ov.t_end.value_or(0.8);
    p.advect_speed = 1.0;

    LinearProblem1D lin;
    lin.grid = Grid1D::uniform(0.0, 4.0, p.cells);
    lin.bc = BoundarySpec::periodic();
    lin.velocity = [](double, double) { return 1.0; };
    p.lin1d = lin;

    const double dx = 4.0 / p.cells;
    const double gsig = 2.5 * dx;
    p.ic1d = [gsig](double x) -> double {
        if (x >= 0.05 && x <= 0.25) return 1.0;
        if (x >= 0.85 && x <= 1.05) {
            const double s = std::sin(kPi / 0.2 * (x - 0.85));
            return s * s;
        }
        if (x >= 1.6 && x <= 1.9) {
            const double r = (x - 1.75) / 0.15;
            return std::sqrt(std::max(0.0, 1.0 - r * r));
        }
        if (x >= 2.6 && x <= 2.7) {
            const double d = x - 2.65;
            return std::exp(-d * d / (2.0 * gsig * gsig));
        }
        if (x >= 3.3 && x <= 3.4) return 10.0 * (x - 3.3);
        if (x > 3.4 && x <= 3.5) return 1.0 - 10.0 * (x - 3.4);
        return 0.0;
    };
    p.shapes = {{"square", 0.05, 0.25, 0, 0},
                {"sine-squared", 0.85, 1.05, 0, 0},
                {"semi-ellipse", 1.6, 1.9, 0, 0},
                {"gaussian", 2.6, 2.7, 0, 0},
                {"triangle", 3.3, 3.5, 0, 0}};
    return p;
}

ProblemSpec solid_rotation(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "solid-rotation";
    p.dim = 2;
    p.cells = ov.cells.value_or(128);
    p.dt = ov.dt.value_or(1.0 / 5000.0);
    p.t_end = ov.t_end.value_or(1.0);

    LinearProblem2D lin;
    lin.grid = Grid2D::uniform(0.0, 1.0, p.cells, 0.0, 1.0, p.cells);
    lin.bc.x = BoundarySpec::dirichlet(0.0, 0.0);
    lin.bc.y = BoundarySpec::dirichlet(0.0, 0.0);
    lin.u1 = [](double, double y, double) { return -2.0 * kPi * (y - 0.5); };
    lin.u2 = [](double x, double, double) { return 2.0 * kPi * (x - 0.5); };
    p.lin2d = lin;

    p.ic2d = [](double x, double y) -> double {
        // slotted cylinder
        {
            const double dx = x - 0.5, dy = y - 0.75;
            if (dx * dx + dy * dy <= 0.15 * 0.15) {
                if (std::abs(dx) >= 0.025 || y >= 0.85) return 1.0;
                return 0.0;
            }
        }
        // cone
        {
            const double dx = x - 0.25, dy = y - 0.5;
            const double r = std::sqrt(dx * dx + dy * dy);
            if (r <= 0.15) return 1.0 - r / 0.15;
        }
        // smooth hump
        {
            const double dx = x - 0.5, dy = y - 0.25;
            const double r = std::min(std::sqrt(dx * dx + dy * dy), 0.1) / 0.1;
            if (r < 1.0) return 0.25 * (1.0 + std::cos(kPi * r));
        }
        return 0.0;
    };
    p.shapes = {{"slotted-cylinder", 0, 0, 0.5, 0.75},
                {"cone", 0, 0, 0.25, 0.5},
                {"hump", 0, 0, 0.5, 0.25}};
    return p;
}

ProblemSpec nonconvex_riemann(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "nonconvex-riemann";
    p.dim = 1;
    p.cells = ov.cells.value_or(200);
    p.dt = ov.dt.value_or(0.002);
    p.t_end = ov.t_end.value_or(1.2);
    p.low_default = LowFluxKind::Rusanov;

    ConservationProblem1D cons;
    cons.grid = Grid1D::uniform(-1.0, 3.0, p.cells);
    cons.bc = BoundarySpec::extend_constant();
    cons.flux = FluxFunction::quartic();
    cons.entropy = square_entropy(cons.flux);
    p.cons1d = std::move(cons);

    p.ic1d = [](double x) { return x <= 1.0 ? 2.0 : -2.0; };
    p.has_entropy_range = true;
    p.entropy_lo = 0.0;
    p.entropy_hi = 2.0;
    p.shapes = {{"all", -1.0, 3.0, 0, 0}};
    return p;
}

ProblemSpec burgers_box(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "burgers";
    p.dim = 1;
    p.cells = ov.cells.value_or(500);
    p.dt = ov.dt.value_or(0.002);
    p.t_end = ov.t_end.value_or(3.0);
    p.low_default = LowFluxKind::Rusanov;

    ConservationProblem1D cons;
    cons.grid = Grid1D::uniform(-1.0, 4.0, p.cells);
    cons.bc = BoundarySpec::extend_constant();
    cons.flux = FluxFunction::burgers();
    cons.entropy = square_entropy(cons.flux);
    p.cons1d = std::move(cons);

    p.ic1d = [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; };
    p.has_entropy_range = true;
    p.entropy_lo = -1.0;
    p.entropy_hi = 4.0;
    p.shapes = {{"all", -1.0, 4.0, 0, 0}};
    return p;
}

ProblemSpec buckley_leverett(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "buckley-leverett";
    p.dim = 1;
    p.cells = ov.cells.value_or(80);
    p.dt = ov.dt.value_or(0.004);
    p.t_end = ov.t_end.value_or(1.0);
    p.low_default = LowFluxKind::Rusanov;

    ConservationProblem1D cons;
    cons.grid = Grid1D::uniform(-0.5, 0.5, p.cells);
    cons.bc = BoundarySpec::extend_constant();
    cons.flux = FluxFunction::buckley_leverett(-3.0, 3.0);
    cons.entropy = square_entropy(cons.flux);
    p.cons1d = std::move(cons);

    p.ic1d = [](double x) { return x < 0.0 ? -3.0 : 3.0; };
    p.has_entropy_range = true;
    p.entropy_lo = -0.5;
    p.entropy_hi = 0.5;
    p.shapes = {{"all", -0.5, 0.5, 0, 0}};
    return p;
}

ProblemSpec convection_diffusion(const ProblemOverrides& ov) {
    ProblemSpec p;
    p.name = "convection-diffusion";
    p.dim = 1;
    p.cells = ov.cells.value_or(100);
    p.dt = ov.dt.value_or(0.01);
    p.t_end = ov.t_end.value_or(1.0);

    LinearProblem1D lin;
    lin.grid = Grid1D::uniform(0.0, 1.0, p.cells);
    lin.bc = BoundarySpec::dirichlet(0.0, 0.0);
    lin.velocity = [](double, double) { return 0.1; };
    lin.diffusivity = [](double, double) { return 0.005; };
    p.lin1d = lin;

    p.ic1d = [](double x) -> double {
        if (x >= 0.3 && x <= 0.5) return 2.0 * std::sin(5.0 * kPi * (x - 0.3));
        return 0.0;
    };
    p.shapes = {{"all", 0.0, 1.0, 0, 0}};
    return p;
}

}  // namespace

ProblemSpec make_problem(const std::string& name, const ProblemOverrides& ov) {
    if (name == "advection-shapes") return advection_shapes(ov);
    if (name == "solid-rotation") return solid_rotation(ov);
    if (name == "nonconvex-riemann") return nonconvex_riemann(ov);
    if (name == "burgers") return burgers_box(ov);
    if (name == "buckley-leverett") return buckley_leverett(ov);
    if (name == "convection-diffusion") return convection_diffusion(ov);
    throw ValidationError("unknown problem: " + name);
}

Field initial_field(const ProblemSpec& prob) {
    Field f;
    f.time = 0.0;
    if (prob.dim == 1) {
        const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
        f.values.resize(g.n());
        for (int i = 0; i < g.n(); ++i) f.values[i] = prob.ic1d(g.centers[i]);
    } else {
        const Grid2D& g = prob.lin2d->grid;
        f.values.resize(g.cells());
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                f.values[g.index(i, j)] = prob.ic2d(g.gx.centers[i], g.gy.centers[j]);
    }
    return f;
}

double burgers_box_exact(double x, double t) {
    if (t <= 0.0) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    if (t <= 2.0) {
        if (x < 0.0) return 0.0;
        if (x <= t) return x / t;
        if (x < 1.0 + 0.5 * t) return 1.0;
        return 0.0;
    }
    const double xs = std::sqrt(2.0 * t);
    if (x < 0.0) return 0.0;
    if (x < xs) return x / t;
    return 0.0;
}

namespace {

/// Conservative restriction of a refined-grid field to the coarse grid.
Field restrict_field(const Field& fine, int factor, int n_coarse) {
    Field out;
    out.time = fine.time;
    out.values.resize(n_coarse);
    for (int i = 0; i < n_coarse; ++i) {
        double s = 0.0;
        for (int k = 0; k < factor; ++k) s += fine.values[i * factor + k];
        out.values[i] = s / factor;
    }
    return out;
}

Field refined_godunov_reference(const ProblemSpec& prob, double t) {
    const int R = prob.refine_factor;
    ProblemOverrides ov;
    ov.cells = prob.cells * R;
    ov.dt = prob.dt / R;
    ProblemSpec fine = make_problem(prob.name, ov);
    SchemeConfig cfg;
    cfg.sigma = 0.0;
    cfg.dt = fine.dt;
    cfg.mode = LimiterMode::LowOrder;
    cfg.low_flux = LowFluxKind::Godunov;
    Field y = initial_field(fine);
    const long steps = std::lround(t / cfg.dt);
    for (long s = 0; s < steps; ++s) y = explicit_step(*fine.cons1d, cfg, y);
    y.time = t;
    return restrict_field(y, R, prob.cells);
}

Field refined_crank_nicolson_reference(const ProblemSpec& prob, double t) {
    // Direct half-weighted centered solve on a refined grid: an independent
    // tridiagonal march rather than a pass through the stepper.
    auto solve_at = [&](int R) {
        ProblemOverrides ov;
        ov.cells = prob.cells * R;
        ov.dt = prob.dt / R;
        ProblemSpec fine = make_problem(prob.name, ov);
        const Grid1D& g = fine.lin1d->grid;
        const int n = g.n();
        const double dt = fine.dt;
        std::vector<double> lower(n), diag(n), upper(n), gvec(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const double dx = g.widths[i];
            auto coef = [&](int k) {
                const double x = g.interfaces[k];
                const double u = fine.lin1d->velocity(x, 0.0);
                const double kd = fine.lin1d->diffusivity ? fine.lin1d->diffusivity(x, 0.0) : 0.0;
                const int ks = k == 0 ? 1 : (k == n ? n - 1 : k);
                return std::pair<double, double>{u, kd / g.interface_spacing(ks)};
            };
            const auto [ul, dl] = coef(i);
            const auto [ur, dr] = coef(i + 1);
            diag[i] = (0.5 * ur - 0.5 * ul + dr + dl) / dx;
            lower[i] = (-0.5 * ul - dl) / dx;
            upper[i] = (0.5 * ur - dr) / dx;
            if (i == 0) {
                gvec[i] += (0.5 * ul + dl) * fine.lin1d->bc.left / dx;
                lower[i] = 0.0;
            }
            if (i == n - 1) {
                gvec[i] += (-0.5 * ur + dr) * fine.lin1d->bc.right / dx;
                upper[i] = 0.0;
            }
        }
        std::vector<double> ld(n), dd(n), ud(n);
        for (int i = 0; i < n; ++i) {
            ld[i] = 0.5 * dt * lower[i];
            dd[i] = 1.0 + 0.5 * dt * diag[i];
            ud[i] = 0.5 * dt * upper[i];
        }
        Field y = initial_field(fine);
        std::vector<double> rhs(n);
        const long steps = std::lround(t / dt);
        for (long sstep = 0; sstep < steps; ++sstep) {
            for (int i = 0; i < n; ++i) {
                double ay = diag[i] * y.values[i];
                if (i > 0) ay += lower[i] * y.values[i - 1];
                if (i + 1 < n) ay += upper[i] * y.values[i + 1];
                rhs[i] = y.values[i] - 0.5 * dt * ay + dt * gvec[i];
            }
            y.values = tridiagonal_solve(ld, dd, ud, rhs);
        }
        y.time = t;
        return restrict_field(y, R, prob.cells);
    };
    const Grid1D& g = prob.lin1d->grid;
    // Escalate the refinement until two successive levels agree to 1e-6.
    // Once the wall layer is active (t >= 2) the pair difference plateaus
    // near 1e-5; that is still two orders below the errors being measured,
    // so the finest level is accepted up to a hard cap.
    Field a = solve_at(10);
    double diff = 1.0;
    for (int r = 20; r <= 80; r *= 2) {
        Field b = solve_at(r);
        diff = l1_error(a, b, g);
        a = std::move(b);
        if (diff <= 1e-6) return a;
    }
    if (diff > 1e-4) throw SolverError("refined reference failed its convergence check");
    return a;
}

std::mutex g_ref_mutex;
std::map<std::string, Field> g_ref_cache;

}  // namespace

Field reference_solution(const ProblemSpec& prob, double t) {
    if (prob.name == "advection-shapes") {
        const Grid1D& g = prob.lin1d->grid;
        const double period = g.b - g.a;
        Field f;
        f.time = t;
        f.values.resize(g.n());
        for (int i = 0; i < g.n(); ++i) {
            double x = g.centers[i] - prob.advect_speed * t - g.a;
            x -= period * std::floor(x / period);
            f.values[i] = prob.ic1d(g.a + x);
        }
        return f;
    }
    if (prob.name == "solid-rotation") {
        // Exactly the initial profile after whole revolutions; otherwise the
        // initial data evaluated at the back-rotated point.
        if (std::abs(t - std::round(t)) < 1e-12) {
            Field f = initial_field(prob);
            f.time = t;
            return f;
        }
        const double th = -2.0 * kPi * t;
        const double c = std::cos(th), sn = std::sin(th);
        const Grid2D& g = prob.lin2d->grid;
        Field f;
        f.time = t;
        f.values.resize(g.cells());
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                const double x = g.gx.centers[i] - 0.5, y = g.gy.centers[j] - 0.5;
                f.values[g.index(i, j)] =
                    prob.ic2d(0.5 + c * x - sn * y, 0.5 + sn * x + c * y);
            }
        return f;
    }
    if (prob.name == "burgers") {
        const Grid1D& g = prob.cons1d->grid;
        Field f;
        f.time = t;
        f.values.resize(g.n());
        for (int i = 0; i < g.n(); ++i) f.values[i] = burgers_box_exact(g.centers[i], t);
        return f;
    }
    // Refined-grid references, cached per problem configuration and time.
    char key[160];
    std::snprintf(key, sizeof key, "%s|%d|%.12g|%.12g", prob.name.c_str(), prob.cells, prob.dt,
                  t);
    {
        std::lock_guard<std::mutex> lock(g_ref_mutex);
        auto it = g_ref_cache.find(key);
        if (it != g_ref_cache.end()) return it->second;
    }
    Field ref;
    if (prob.name == "convection-diffusion")
        ref = refined_crank_nicolson_reference(prob, t);
    else
        ref = refined_godunov_reference(prob, t);
    std::lock_guard<std::mutex> lock(g_ref_mutex);
    g_ref_cache[key] = ref;
    return ref;
}

double l1_error(const Field& field, const Field& reference, const Grid1D& grid) {
    return simd::kernels().weighted_abs_diff(grid.widths.data(), field.values.data(),
                                             reference.values.data(), grid.n());
}

double l1_error_2d(const Field& field, const Field& reference, const Grid2D& grid) {
    double s = 0.0;
    const int nx = grid.nx();
    for (int j = 0; j < grid.ny(); ++j)
        s += grid.gy.widths[j] *
             simd::kernels().weighted_abs_diff(grid.gx.widths.data(),
                                               field.values.data() + j * nx,
                                               reference.values.data() + j * nx, nx);
    return s;
}

double entropy_integral(const Field& field, const Grid1D& grid, const EntropyPair& pair,
                        double x_lo, double x_hi) {
    double s = 0.0;
    for (int i = 0; i < grid.n(); ++i)
        if (grid.centers[i] >= x_lo && grid.centers[i] <= x_hi)
            s += grid.widths[i] * pair.U(field.values[i]);
    return s;
}

std::vector<ShapeError> shape_errors(const ProblemSpec& prob, const Field& field,
                                     const Field& reference, double t) {
    std::vector<ShapeError> out;
    if (prob.dim == 2) {
        const Grid2D& g = prob.lin2d->grid;
        out.resize(prob.shapes.size());
        for (size_t s = 0; s < prob.shapes.size(); ++s) out[s].name = prob.shapes[s].name;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                const double x = g.gx.centers[i], y = g.gy.centers[j];
                size_t best = 0;
                double bd = 1e300;
                for (size_t s = 0; s < prob.shapes.size(); ++s) {
                    const double dx = x - prob.shapes[s].cx, dy = y - prob.shapes[s].cy;
                    const double d = dx * dx + dy * dy;
                    if (d < bd) {
                        bd = d;
                        best = s;
                    }
                }
                const int r = g.index(i, j);
                out[best].l1 += g.gx.widths[i] * g.gy.widths[j] *
                                std::abs(field.values[r] - reference.values[r]);
                out[best].y_max = std::max(out[best].y_max, field.values[r]);
            }
        return out;
    }

    const Grid1D& g = prob.lin1d ? prob.lin1d->grid : prob.cons1d->grid;
    if (prob.shapes.size() == 1) {
        ShapeError e;
        e.name = prob.shapes[0].name;
        e.l1 = l1_error(field, reference, g);
        e.y_max = simd::kernels().max_val(field.values.data(), g.n());
        return {e};
    }

    // Translate the supports to time t and split the periodic domain at
    // midpoints between neighboring supports.
    const double period = g.b - g.a;
    const size_t m = prob.shapes.size();
    std::vector<double> lo(m), hi(m);
    std::vector<size_t> order(m);
    for (size_t s = 0; s < m; ++s) {
        double shift = prob.advect_speed * t;
        lo[s] = g.a + std::fmod(prob.shapes[s].lo + shift - g.a, period);
        if (lo[s] < g.a) lo[s] += period;
        hi[s] = lo[s] + (prob.shapes[s].hi - prob.shapes[s].lo);
        order[s] = s;
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lo[a] < lo[b]; });
    std::vector<double> cut(m);  // cut[k] = boundary before the k-th ordered shape
    for (size_t k = 0; k < m; ++k) {
        const size_t cur = order[k], prev = order[(k + m - 1) % m];
        double gap_start = hi[prev];
        double gap_end = lo[cur];
        if (gap_end < gap_start) gap_end += period;
        double c = 0.5 * (gap_start + gap_end);
        c = g.a + std::fmod(c - g.a, period);
        if (c < g.a) c += period;
        cut[k] = c;
    }
    out.resize(m);
    for (size_t s = 0; s < m; ++s) out[s].name = prob.shapes[s].name;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.centers[i];
        // Find the ordered shape whose region [cut[k], cut[k+1]) contains x.
        size_t k = 0;
        bool found = false;
        for (; k < m; ++k) {
            const double c0 = cut[k], c1 = cut[(k + 1) % m];
            const bool inside = c0 <= c1 ? (x >= c0 && x < c1) : (x >= c0 || x < c1);
            if (inside) {
                found = true;
                break;
            }
        }
        const size_t s = found ? order[k] : order[0];
        out[s].l1 += g.widths[i] * std::abs(field.values[i] - reference.values[i]);
        out[s].y_max = std::max(out[s].y_max, field.values[i]);
    }
    return out;
}

}  // namespace fct
