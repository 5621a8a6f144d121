#include "fct/flux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fct {

std::vector<double> bracketed_roots(const std::function<double(double)>& fn, double lo, double hi,
                                    int scan_points, double tol) {
    std::vector<double> roots;
    double x0 = lo, f0 = fn(lo);
    for (int s = 1; s <= scan_points; ++s) {
        const double x1 = lo + (hi - lo) * s / scan_points;
        const double f1 = fn(x1);
        if (f0 == 0.0) roots.push_back(x0);
        if (f0 * f1 < 0.0) {
            double a = x0, b = x1, fa = f0;
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                const double fm = fn(m);
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);
    return roots;
}

FluxFunction FluxFunction::linear(double u) {
    FluxFunction fx;
    fx.f = [u](double r) { return u * r; };
    fx.df = [u](double) { return u; };
    fx.is_convex = true;
    fx.name = "linear";
    fx.square_entropy_flux = [u](double r) { return 0.5 * u * r * r; };
    return fx;
}

FluxFunction FluxFunction::burgers() {
    FluxFunction fx;
    fx.f = [](double r) { return 0.5 * r * r; };
    fx.df = [](double r) { return r; };
    fx.flux_critical_points = {0.0};
    fx.is_convex = true;
    fx.name = "burgers";
    fx.square_entropy_flux = [](double r) { return r * r * r / 3.0; };
    return fx;
}

FluxFunction FluxFunction::quartic() {
    FluxFunction fx;
    fx.f = [](double r) { return 0.25 * (r * r - 1.0) * (r * r - 4.0); };
    fx.df = [](double r) { return r * r * r - 2.5 * r; };
    // f'' = 3 r^2 - 5/2 vanishes at +-sqrt(5/6); f' vanishes at 0, +-sqrt(5/2).
    const double c = std::sqrt(5.0 / 6.0);
    const double s = std::sqrt(2.5);
    fx.deriv_critical_points = {-c, c};
    fx.flux_critical_points = {-s, 0.0, s};
    fx.is_convex = false;
    fx.name = "quartic";
    fx.square_entropy_flux = [](double r) {
        const double r3 = r * r * r;
        return (r * r / 5.0 - 5.0 / 6.0) * r3;
    };
    return fx;
}

FluxFunction FluxFunction::buckley_leverett(double lo, double hi) {
    FluxFunction fx;
    auto den = [](double r) {
        const double q = 1.0 - r;
        return 4.0 * r * r + q * q;
    };
    fx.f = [den](double r) { return 4.0 * r * r / den(r); };
    fx.df = [den](double r) {
        const double d = den(r);
        return 8.0 * r * (1.0 - r) / (d * d);
    };
    // f'' = 8 (10 r^3 - 15 r^2 + 1) / den^3
    auto d2f = [den](double r) {
        const double d = den(r);
        return 8.0 * (10.0 * r * r * r - 15.0 * r * r + 1.0) / (d * d * d);
    };
    fx.deriv_critical_points = bracketed_roots(d2f, lo, hi);
    fx.flux_critical_points = {0.0, 1.0};
    fx.is_convex = false;
    fx.name = "buckley-leverett";
    return fx;
}

double upwind_flux(double u, double y_left, double y_right) {
    const double up = 0.5 * (u + std::abs(u));
    const double um = 0.5 * (u - std::abs(u));
    return up * y_left + um * y_right;
}

double centered_flux(double u, double y_left, double y_right) {
    return 0.5 * u * (y_left + y_right);
}

double quick_flux(double u, double y_mm, double y_m, double y_p, double y_pp) {
    const double up = 0.5 * (u + std::abs(u));
    const double um = 0.5 * (u - std::abs(u));
    return up * (0.375 * y_p + 0.75 * y_m - 0.125 * y_mm) +
           um * (0.375 * y_m + 0.75 * y_p - 0.125 * y_pp);
}

double quick_antidiffusive(double u, double y_mm, double y_m, double y_p, double y_pp) {
    const double up = 0.5 * (u + std::abs(u));
    const double um = 0.5 * (u - std::abs(u));
    return 0.375 * std::abs(u) * (y_p - y_m) + 0.125 * up * (y_m - y_mm) +
           0.125 * um * (y_p - y_pp);
}

double interval_max_abs_deriv(const FluxFunction& flux, double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    double m = std::max(std::abs(flux.df(lo)), std::abs(flux.df(hi)));
    if (flux.is_convex || lo == hi) return m;
    if (!flux.deriv_critical_points.empty()) {
        for (double c : flux.deriv_critical_points)
            if (c > lo && c < hi) m = std::max(m, std::abs(flux.df(c)));
        return m;
    }
    // No critical point list: dense sampling fallback.
    const int samples = 10000;
    for (int s = 1; s < samples; ++s) {
        const double x = lo + (hi - lo) * s / samples;
        m = std::max(m, std::abs(flux.df(x)));
    }
    return m;
}

double rusanov_flux(const FluxFunction& flux, double y_left, double y_right) {
    const double nu = interval_max_abs_deriv(flux, y_left, y_right);
    return 0.5 * (flux.f(y_left) + flux.f(y_right) - nu * (y_right - y_left));
}

namespace {

double interval_extremum(const FluxFunction& flux, double lo, double hi, bool want_min) {
    double m = flux.f(lo);
    const double fr = flux.f(hi);
    m = want_min ? std::min(m, fr) : std::max(m, fr);
    if (!flux.flux_critical_points.empty()) {
        for (double c : flux.flux_critical_points)
            if (c > lo && c < hi) {
                const double v = flux.f(c);
                m = want_min ? std::min(m, v) : std::max(m, v);
            }
        return m;
    }
    const int samples = 10000;
    for (int s = 1; s < samples; ++s) {
        const double v = flux.f(lo + (hi - lo) * s / samples);
        m = want_min ? std::min(m, v) : std::max(m, v);
    }
    return m;
}

}  // namespace

double godunov_flux(const FluxFunction& flux, double y_left, double y_right) {
    if (y_left <= y_right) return interval_extremum(flux, y_left, y_right, /*want_min=*/true);
    return interval_extremum(flux, y_right, y_left, /*want_min=*/false);
}

double diffusive_flux(double k, double y_left, double y_right, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("diffusive_flux: dx must be positive");
    if (k < 0.0) throw std::invalid_argument("diffusive_flux: k must be nonnegative");
    return k * (y_right - y_left) / dx;
}

}  // namespace fct
