#include <doctest.h>

#include <random>
#include <vector>

#include "fct/banded.hpp"

using namespace fct;

namespace {

// Plain dense Gaussian elimination used as the comparison oracle.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

TEST_CASE("tridiagonal elimination") {
    const std::vector<double> lower{0, -1, -1}, diag{2, 2, 2}, upper{-1, -1, 0};
    const auto x = tridiagonal_solve(lower, diag, upper, {1, 0, 1});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
    CHECK(x[2] == doctest::Approx(1.0));

    const std::vector<double> id_lower(4, 0.0), id_diag(4, 1.0), id_upper(4, 0.0);
    const std::vector<double> rhs{3, -1, 2, 7};
    CHECK(tridiagonal_solve(id_lower, id_diag, id_upper, rhs) == rhs);
}

TEST_CASE("cyclic tridiagonal matches the dense oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const int n = 3 + static_cast<int>(rng() % 20);
        std::vector<double> lower(n), diag(n), upper(n), rhs(n);
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            lower[i] = u(rng);
            upper[i] = u(rng);
            diag[i] = 4.0 + u(rng);  // diagonally dominant
            rhs[i] = u(rng);
            dense[i][i] = diag[i];
            dense[i][(i + n - 1) % n] += lower[i];
            dense[i][(i + 1) % n] += upper[i];
        }
        const auto x = cyclic_tridiagonal_solve(lower, diag, upper, rhs);
        const auto want = dense_solve(dense, rhs);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}

TEST_CASE("banded factorization against the dense oracle") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 50, kb = 6;
    BandedMatrix m(n, kb);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = std::max(0, i - kb); j <= std::min(n - 1, i + kb); ++j) {
            if (j == i) continue;
            const double v = 0.2 * u(rng);
            m.at(i, j) = v;
            dense[i][j] = v;
            off += std::abs(v);
        }
        const double d = off + 1.0 + std::abs(u(rng));
        m.at(i, i) = d;
        dense[i][i] = d;
    }
    m.factor();
    std::vector<double> rhs(n);
    for (auto& v : rhs) v = u(rng);
    const auto x = m.solve(rhs);
    const auto want = dense_solve(dense, rhs);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("singular pivot is reported") {
    const std::vector<double> lower{0, 0}, diag{0, 1}, upper{0, 0};
    CHECK_THROWS_AS(tridiagonal_solve(lower, diag, upper, {1, 1}), SolverError);
    BandedMatrix m(3, 1);
    m.at(0, 0) = 0.0;
    m.at(1, 1) = 1.0;
    m.at(2, 2) = 1.0;
    CHECK_THROWS_AS(m.factor(), SolverError);
}
