#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fct {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

/// Box-bounded maximization problem with two-sided linear inequality rows
///     max c'x   s.t.  row_lo <= a'x <= row_hi,  lo <= x <= hi.
/// Rows are stored sparsely; one-sided rows use +-infinity bounds.
struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
        double lo = -kLpInf;
        double hi = kLpInf;
    };

    int n_vars = 0;
    std::vector<double> objective;
    std::vector<double> var_lo;
    std::vector<double> var_hi;
    std::vector<Row> rows;

    explicit LinearProgram(int n = 0) { resize(n); }
    void resize(int n) {
        n_vars = n;
        objective.assign(n, 0.0);
        var_lo.assign(n, 0.0);
        var_hi.assign(n, 0.0);
    }
    void add_row(std::span<const double> dense, double lo, double hi);
    void add_row_sparse(std::vector<std::pair<int, double>> coeffs, double lo, double hi);
    void validate() const;
};

struct LPSolution {
    enum class Status { Optimal, Infeasible };
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    int iterations = 0;
};

class LPError : public std::runtime_error {
  public:
    explicit LPError(const std::string& what) : std::runtime_error(what) {}
};

/// Bounded-variable primal simplex, two phases, deterministic pivoting
/// (largest reduced cost, lowest index on ties, Bland's rule after runs of
/// degenerate pivots).
LPSolution solve(const LinearProgram& lp);

/// Exhaustive basic-point enumeration for cross-checking `solve` on tiny
/// problems. Requires n_vars <= 8 and rows <= 12.
LPSolution vertex_oracle(const LinearProgram& lp);

/// Presolve + decomposition front end for the scheme-generated limiter LPs:
/// drops rows that no admissible point can violate, fixes variables outside
/// the remaining rows at their upper bound, and solves each connected
/// component separately. Requires a nonnegative objective.
LPSolution solve_reduced(const LinearProgram& lp);

}  // namespace fct
