#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fct/scheme2d.hpp"
#include "fct/stepper.hpp"

namespace fct {

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemOverrides {
    std::optional<int> cells;
    std::optional<double> dt;
    std::optional<double> t_end;
};

/// One benchmark problem with its defaults, initial data, and reference
/// solution handle.
struct ProblemSpec {
    std::string name;
    int dim = 1;

    std::optional<LinearProblem1D> lin1d;
    std::optional<ConservationProblem1D> cons1d;
    std::optional<LinearProblem2D> lin2d;

    std::function<double(double)> ic1d;
    std::function<double(double, double)> ic2d;

    int cells = 0;  // per axis
    double dt = 0.0;
    double t_end = 0.0;
    LowFluxKind low_default = LowFluxKind::Upwind;

    // Range of the entropy integral diagnostic, when meaningful.
    bool has_entropy_range = false;
    double entropy_lo = 0.0, entropy_hi = 0.0;

    // Sub-regions for per-shape error reporting.
    struct ShapeSupport {
        std::string name;
        double lo = 0.0, hi = 0.0;  // initial support (1D)
        double cx = 0.0, cy = 0.0;  // body center (2D)
    };
    std::vector<ShapeSupport> shapes;
    double advect_speed = 0.0;  // translation speed of the 1D shape supports

    int refine_factor = 16;
};

std::vector<std::string> problem_names();
ProblemSpec make_problem(const std::string& name, const ProblemOverrides& ov = {});

Field initial_field(const ProblemSpec& prob);
Field reference_solution(const ProblemSpec& prob, double t);

double l1_error(const Field& field, const Field& reference, const Grid1D& grid);
double l1_error_2d(const Field& field, const Field& reference, const Grid2D& grid);

double entropy_integral(const Field& field, const Grid1D& grid, const EntropyPair& pair,
                        double x_lo, double x_hi);

struct ShapeError {
    std::string name;
    double l1 = 0.0;
    double y_max = 0.0;
};

/// Per-shape errors: 1D supports are translated to time t and the domain is
/// split at midpoints between neighboring supports; 2D cells go to the
/// nearest body center.
std::vector<ShapeError> shape_errors(const ProblemSpec& prob, const Field& field,
                                     const Field& reference, double t);

/// Exact profile of the expanding-box problem for the quadratic flux:
/// rarefaction fan plus a right-moving shock that accelerates after the
/// merger point.
double burgers_box_exact(double x, double t);

}  // namespace fct
