#pragma once

#include <functional>
#include <vector>

#include "fct/flux.hpp"
#include "fct/grid.hpp"

namespace fct {

/// Convex entropy U with compatible entropy flux F (F' = U' f').
struct EntropyPair {
    std::function<double(double)> U;
    std::function<double(double)> dU;
    std::function<double(double)> d2U;
    std::function<double(double)> F;
};

/// Entropy variable v = U'(rho), the flux g(v) = f(rho(v)) and the potential
/// psi(v) = v g(v) - F(rho(v)). rho_of_v must invert U'; for the square
/// entropy it is the identity.
struct TadmorPotential {
    std::function<double(double)> v;
    std::function<double(double)> g;
    std::function<double(double)> psi;
    std::function<double(double)> rho_of_v;
};

/// The square entropy U = rho^2/2 paired with a compatible F. Uses the flux's
/// closed form when available, otherwise integrates U' f' cumulatively on
/// [lo,hi] and interpolates from a Hermite table.
EntropyPair square_entropy(const FluxFunction& flux, double lo = -4.0, double hi = 4.0,
                           int table_points = 8192);

TadmorPotential tadmor_potential(const EntropyPair& pair, const FluxFunction& flux);

/// Proper numerical entropy flux paired with the Rusanov flux.
double rusanov_entropy_flux(const EntropyPair& pair, const FluxFunction& flux, double y_left,
                            double y_right);

/// Difference between the centered-pair and Rusanov entropy fluxes,
/// H^d = max|f'|/2 * (U(y_right) - U(y_left)).
double antidiffusive_entropy_term(const EntropyPair& pair, const FluxFunction& flux, double y_left,
                                  double y_right);

double tadmor_entropy_flux(const TadmorPotential& pot, const EntropyPair& pair, double y_left,
                           double y_right, double g_value);

/// Per-cell residual of the discrete entropy inequality for the weighted
/// Rusanov/centered scheme: U(y^{n+1}) - U(y^n) + (dt/dx) * (limited entropy
/// flux difference). Nonpositive residuals mark entropy-admissible cells.
std::vector<double> cell_entropy_residual(const EntropyPair& pair, const FluxFunction& flux,
                                          const std::vector<double>& y_n,
                                          const std::vector<double>& y_np1,
                                          const std::vector<double>& alpha_n,
                                          const std::vector<double>& alpha_np1, double sigma,
                                          const Grid1D& grid, const BoundarySpec& bc, double dt);

}  // namespace fct
