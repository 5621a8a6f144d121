#include <doctest.h>

#include <cmath>
#include <random>

#include "fct/lp.hpp"

using namespace fct;

namespace {

LinearProgram random_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const int n = 1 + static_cast<int>(rng() % max_vars);
    const int m = static_cast<int>(rng() % (max_rows + 1));
    LinearProgram lp(n);
    for (int j = 0; j < n; ++j) {
        lp.objective[j] = coef(rng);
        const double a = coef(rng), b = coef(rng);
        lp.var_lo[j] = std::min(a, b);
        lp.var_hi[j] = std::max(a, b);
    }
    for (int i = 0; i < m; ++i) {
        std::vector<double> row(n);
        for (auto& v : row) v = coef(rng);
        const double a = coef(rng), b = coef(rng);
        lp.add_row(row, std::min(a, b), std::max(a, b));
    }
    return lp;
}

void check_solution_certificate(const LinearProgram& lp, const LPSolution& sol) {
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    for (int j = 0; j < lp.n_vars; ++j) {
        CHECK(sol.x[j] >= lp.var_lo[j] - 1e-9);
        CHECK(sol.x[j] <= lp.var_hi[j] + 1e-9);
    }
    for (const auto& r : lp.rows) {
        double v = 0.0, scale = 1.0;
        for (auto [j, a] : r.coeffs) {
            v += a * sol.x[j];
            scale = std::max(scale, std::abs(a * sol.x[j]));
        }
        CHECK(v >= r.lo - 1e-9 * scale);
        CHECK(v <= r.hi + 1e-9 * scale);
    }
}

}  // namespace

TEST_CASE("simple maximization examples") {
    {
        LinearProgram lp(2);
        lp.objective = {1, 1};
        lp.var_lo = {0, 0};
        lp.var_hi = {1, 1};
        lp.add_row(std::vector<double>{1, 1}, -kLpInf, 1.0);
        const auto s = solve(lp);
        REQUIRE(s.status == LPSolution::Status::Optimal);
        CHECK(s.objective_value == doctest::Approx(1.0));
    }
    {
        LinearProgram lp(2);
        lp.objective = {2, 1};
        lp.var_lo = {0, 0};
        lp.var_hi = {1, 1};
        lp.add_row(std::vector<double>{1, 0}, -kLpInf, 0.5);
        lp.add_row(std::vector<double>{1, 1}, -kLpInf, 1.0);
        const auto s = solve(lp);
        REQUIRE(s.status == LPSolution::Status::Optimal);
        CHECK(s.x[0] == doctest::Approx(0.5));
        CHECK(s.x[1] == doctest::Approx(0.5));
        CHECK(s.objective_value == doctest::Approx(1.5));
        const auto o = vertex_oracle(lp);
        CHECK(o.objective_value == doctest::Approx(1.5));
    }
    {
        LinearProgram lp(1);
        lp.objective = {1};
        lp.var_lo = {0};
        lp.var_hi = {1};
        lp.add_row(std::vector<double>{1}, 2.0, 3.0);
        CHECK(solve(lp).status == LPSolution::Status::Infeasible);
        CHECK(vertex_oracle(lp).status == LPSolution::Status::Infeasible);
    }
}

TEST_CASE("bounds-only problem maximizes at the box corner") {
    LinearProgram lp(4);
    for (int j = 0; j < 4; ++j) {
        lp.objective[j] = 1.0;
        lp.var_lo[j] = 0.0;
        lp.var_hi[j] = 1.0;
    }
    const auto s = solve(lp);
    REQUIRE(s.status == LPSolution::Status::Optimal);
    for (double x : s.x) CHECK(x == doctest::Approx(1.0));
    const auto o = vertex_oracle(lp);
    CHECK(o.objective_value == doctest::Approx(4.0));
}

TEST_CASE("simplex agrees with the enumeration oracle on random problems") {
    std::mt19937_64 rng(20240817);
    int optimal = 0, infeasible = 0;
    for (int t = 0; t < 1000; ++t) {
        const LinearProgram lp = random_lp(rng, 6, 10);
        const auto s = solve(lp);
        const auto o = vertex_oracle(lp);
        REQUIRE(s.status == o.status);
        if (s.status == LPSolution::Status::Optimal) {
            ++optimal;
            const double scale = std::max(1.0, std::abs(o.objective_value));
            CHECK(std::abs(s.objective_value - o.objective_value) <= 1e-7 * scale);
            check_solution_certificate(lp, s);
        } else {
            ++infeasible;
        }
    }
    CHECK(optimal > 150);  // the generator produces a healthy mix
    CHECK(infeasible > 50);
}

TEST_CASE("degenerate and duplicated rows terminate") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 4);
        LinearProgram lp(n);
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = coef(rng);
            lp.var_lo[j] = 0.0;
            lp.var_hi[j] = 1.0;
        }
        std::vector<double> base(n);
        for (auto& v : base) v = coef(rng);
        lp.add_row(base, -1.0, 1.0);
        lp.add_row(base, -1.0, 1.0);  // exact duplicate
        std::vector<double> scaled(n);
        for (int j = 0; j < n; ++j) scaled[j] = 2.0 * base[j];
        lp.add_row(scaled, -2.0, 2.0);  // linearly dependent
        lp.add_row(std::vector<double>(n, 0.0), -1.0, 1.0);  // null row
        const auto s = solve(lp);
        const auto o = vertex_oracle(lp);
        REQUIRE(s.status == o.status);
        if (s.status == LPSolution::Status::Optimal)
            CHECK(s.objective_value ==
                  doctest::Approx(o.objective_value).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("presolved solve matches the direct solve") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const int m = static_cast<int>(rng() % 8);
        LinearProgram lp(n);
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = std::abs(coef(rng));  // nonnegative objective
            lp.var_lo[j] = 0.0;
            lp.var_hi[j] = std::abs(coef(rng));
        }
        for (int i = 0; i < m; ++i) {
            std::vector<double> row(n);
            for (auto& v : row) v = coef(rng);
            double a = coef(rng), b = coef(rng);
            if (rng() % 3 == 0) a = -1e30;  // effectively one-sided
            lp.add_row(row, std::min(a, b), std::max(a, b));
        }
        const auto direct = solve(lp);
        const auto reduced = solve_reduced(lp);
        REQUIRE(direct.status == reduced.status);
        if (direct.status == LPSolution::Status::Optimal) {
            CHECK(reduced.objective_value ==
                  doctest::Approx(direct.objective_value).epsilon(1e-7).scale(1.0));
            check_solution_certificate(lp, reduced);
        }
    }
}

TEST_CASE("zero-variable problems") {
    LinearProgram lp(0);
    lp.add_row_sparse({}, -1.0, 1.0);
    CHECK(solve(lp).status == LPSolution::Status::Optimal);
    LinearProgram bad(0);
    bad.add_row_sparse({}, 0.5, 1.0);
    CHECK(solve(bad).status == LPSolution::Status::Infeasible);
}

TEST_CASE("validation rejects malformed input") {
    LinearProgram lp(1);
    lp.var_lo = {1.0};
    lp.var_hi = {0.0};
    CHECK_THROWS_AS(solve(lp), LPError);
    LinearProgram nan_obj(1);
    nan_obj.var_hi = {1.0};
    nan_obj.objective = {std::nan("")};
    CHECK_THROWS_AS(solve(nan_obj), LPError);
}
