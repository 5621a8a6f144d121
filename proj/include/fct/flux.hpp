#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fct {

/// Differential flux f(rho) together with the structural data the interval
/// extrema computations need: stationary points of f' (for the Rusanov
/// dissipation coefficient) and of f (for the Godunov flux). Critical point
/// lists may be empty, in which case a dense-sampling fallback is used.
struct FluxFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::vector<double> deriv_critical_points;  // roots of f'' inside the data range
    std::vector<double> flux_critical_points;   // roots of f'
    bool is_convex = false;
    std::string name;

    /// Closed-form entropy flux for the square entropy U = rho^2/2, when known.
    std::function<double(double)> square_entropy_flux;

    static FluxFunction linear(double u);
    static FluxFunction burgers();
    /// f = (rho^2-1)(rho^2-4)/4, the nonconvex quartic.
    static FluxFunction quartic();
    /// f = 4 rho^2 / (4 rho^2 + (1-rho)^2); critical points located on [lo,hi].
    static FluxFunction buckley_leverett(double lo = -3.0, double hi = 3.0);
};

/// Locates roots of `fn` on [lo,hi] by scanning for sign changes and
/// bisecting each bracket to `tol`.
std::vector<double> bracketed_roots(const std::function<double(double)>& fn, double lo, double hi,
                                    int scan_points = 4096, double tol = 1e-12);

double upwind_flux(double u, double y_left, double y_right);
double centered_flux(double u, double y_left, double y_right);

/// Third-order QUICK flux; y_mm..y_pp are the four states around the
/// interface (y_{i-1}, y_i, y_{i+1}, y_{i+2}).
double quick_flux(double u, double y_mm, double y_m, double y_p, double y_pp);
/// The part of the QUICK flux beyond first-order upwind.
double quick_antidiffusive(double u, double y_mm, double y_m, double y_p, double y_pp);

/// Exact max of |f'| over the closed interval spanned by a and b.
double interval_max_abs_deriv(const FluxFunction& flux, double a, double b);

double rusanov_flux(const FluxFunction& flux, double y_left, double y_right);
double godunov_flux(const FluxFunction& flux, double y_left, double y_right);

double diffusive_flux(double k, double y_left, double y_right, double dx);

}  // namespace fct
