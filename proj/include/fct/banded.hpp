#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fct {

class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Thomas elimination for a tridiagonal system. lower[0] and upper[n-1] are
/// ignored. No pivoting; callers guarantee diagonal dominance.
std::vector<double> tridiagonal_solve(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs);

/// Tridiagonal system with periodic wrap couplings (corner entries
/// a[0,n-1] = lower[0], a[n-1,0] = upper[n-1]) via Sherman-Morrison.
std::vector<double> cyclic_tridiagonal_solve(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs);

/// General banded matrix in LAPACK-style band storage with an in-place LU
/// (no pivoting) and repeated back-substitutions against the factored form.
class BandedMatrix {
  public:
    BandedMatrix(int n, int bandwidth);

    int n() const { return n_; }
    int bandwidth() const { return kb_; }
    double& at(int i, int j);
    double at(int i, int j) const;

    /// Factor once; solve() may be called repeatedly afterwards.
    void factor();
    std::vector<double> solve(const std::vector<double>& rhs) const;
    bool factored() const { return factored_; }

  private:
    int n_;
    int kb_;
    bool factored_ = false;
    std::vector<double> a_;  // (2*kb+1) diagonals, row-major per column offset
};

}  // namespace fct
