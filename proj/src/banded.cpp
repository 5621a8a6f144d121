#include "fct/banded.hpp"

#include <cmath>

namespace fct {

namespace {
constexpr double kPivotFloor = 1e-14;
}

std::vector<double> tridiagonal_solve(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> c(n), d(n), x(n);
    if (std::abs(diag[0]) < kPivotFloor) throw SolverError("tridiagonal pivot underflow");
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * c[i - 1];
        if (std::abs(m) < kPivotFloor) throw SolverError("tridiagonal pivot underflow");
        c[i] = (i + 1 < n ? upper[i] : 0.0) / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

std::vector<double> cyclic_tridiagonal_solve(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    if (n < 3) throw SolverError("cyclic tridiagonal needs n >= 3");
    const double cl = lower[0];    // couples row 0 to column n-1
    const double cu = upper[n - 1];  // couples row n-1 to column 0
    if (cl == 0.0 && cu == 0.0) return tridiagonal_solve(lower, diag, upper, rhs);

    // Rank-one correction A = T + u v' with u = (gamma, 0,..., cu*? ) --
    // classic choice: perturb first and last diagonal entries.
    const double gamma = -diag[0];
    std::vector<double> d2(diag);
    d2[0] -= gamma;
    d2[n - 1] -= cl * cu / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = cu;
    const auto y = tridiagonal_solve(lower, d2, upper, rhs);
    const auto z = tridiagonal_solve(lower, d2, upper, u);
    const double vy = y[0] + cl / gamma * y[n - 1];
    const double vz = 1.0 + z[0] + cl / gamma * z[n - 1];
    if (std::abs(vz) < kPivotFloor) throw SolverError("cyclic correction underflow");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = y[i] - vy / vz * z[i];
    return x;
}

BandedMatrix::BandedMatrix(int n, int bandwidth) : n_(n), kb_(bandwidth) {
    a_.assign(static_cast<size_t>(n_) * (2 * kb_ + 1), 0.0);
}

double& BandedMatrix::at(int i, int j) {
    const int off = j - i + kb_;
    if (off < 0 || off > 2 * kb_) throw SolverError("band access outside bandwidth");
    return a_[static_cast<size_t>(i) * (2 * kb_ + 1) + off];
}

double BandedMatrix::at(int i, int j) const {
    const int off = j - i + kb_;
    if (off < 0 || off > 2 * kb_) return 0.0;
    return a_[static_cast<size_t>(i) * (2 * kb_ + 1) + off];
}

void BandedMatrix::factor() {
    for (int k = 0; k < n_ - 1; ++k) {
        const double piv = at(k, k);
        if (std::abs(piv) < kPivotFloor) throw SolverError("banded pivot underflow");
        const int iend = std::min(n_ - 1, k + kb_);
        for (int i = k + 1; i <= iend; ++i) {
            const double f = at(i, k) / piv;
            if (f == 0.0) continue;
            at(i, k) = f;  // store the multiplier in place
            const int jend = std::min(n_ - 1, k + kb_);
            for (int j = k + 1; j <= jend; ++j) at(i, j) -= f * at(k, j);
        }
    }
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(const std::vector<double>& rhs) const {
    if (!factored_) throw SolverError("solve before factor");
    std::vector<double> x(rhs);
    for (int k = 0; k < n_ - 1; ++k) {
        const int iend = std::min(n_ - 1, k + kb_);
        for (int i = k + 1; i <= iend; ++i) x[i] -= at(i, k) * x[k];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        const int jend = std::min(n_ - 1, i + kb_);
        for (int j = i + 1; j <= jend; ++j) s -= at(i, j) * x[j];
        x[i] = s / at(i, i);
    }
    return x;
}

}  // namespace fct
