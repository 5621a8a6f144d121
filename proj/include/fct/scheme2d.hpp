#pragma once

#include <functional>
#include <optional>

#include "fct/banded.hpp"
#include "fct/grid.hpp"
#include "fct/limiter.hpp"
#include "fct/stepper.hpp"

namespace fct {

/// 2D convection-diffusion with interface-sampled coefficients on a
/// tensor-product grid; Dirichlet boundaries on all four sides.
struct LinearProblem2D {
    Grid2D grid;
    BoundarySpec2D bc;  // kinds must be Dirichlet; values per side
    std::function<double(double, double, double)> u1, u2;  // (x, y, t)
    std::function<double(double, double, double)> k1, k2;  // diffusivities, may be empty
    bool time_independent = true;
};

/// Five-point operator data: matrix stencils of the monotone part, boundary
/// vector, and per-interface antidiffusion coefficients.
struct Operator2D {
    int nx = 0, ny = 0;
    std::vector<double> aC, aW, aE, aS, aN;  // per cell, 1/time units
    std::vector<double> g;                   // boundary contributions
    std::vector<double> u1, u2;              // interface velocities
    std::vector<double> d1, d2;              // absorbed-diffusion excess per interface
    std::vector<double> b1;                  // x-interface antidiffusion coef, (nx+1)*ny
    std::vector<double> b2;                  // y-interface, nx*(ny+1)
    double max_aii = 0.0;
};

Operator2D assemble_2d(const LinearProblem2D& prob, double t);

/// Caches the banded factorization of the implicit operator across steps of
/// time-independent problems.
struct Workspace2D {
    std::optional<BandedMatrix> factored;
    double dt = 0.0;
    double sigma = 0.0;
};

double max_stable_dt_2d(const LinearProblem2D& prob, const SchemeConfig& cfg, const Field& y);

Field step_2d(const LinearProblem2D& prob, const SchemeConfig& cfg, const Field& y,
              LimiterField2D* limiters = nullptr, StepReport* report = nullptr,
              Workspace2D* ws = nullptr);

}  // namespace fct
