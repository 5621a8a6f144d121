#include <doctest.h>

#include <cmath>

#include "fct/scheme2d.hpp"

using namespace fct;

namespace {

LinearProblem2D make_2d(int nx, int ny, double u, double v, double kx, double ky) {
    LinearProblem2D p;
    p.grid = Grid2D::uniform(0, nx, nx, 0, ny, ny);  // unit cells
    p.bc.x = BoundarySpec::dirichlet(0, 0);
    p.bc.y = BoundarySpec::dirichlet(0, 0);
    p.u1 = [u](double, double, double) { return u; };
    p.u2 = [v](double, double, double) { return v; };
    if (kx > 0) p.k1 = [kx](double, double, double) { return kx; };
    if (ky > 0) p.k2 = [ky](double, double, double) { return ky; };
    return p;
}

}  // namespace

TEST_CASE("five-point operator entries") {
    SUBCASE("pure advection collapses to upwind") {
        const auto p = make_2d(5, 5, 1.0, 0.0, 0.0, 0.0);
        const auto op = assemble_2d(p, 0.0);
        const int r = 2 + 2 * 5;  // interior cell
        CHECK(op.aC[r] == doctest::Approx(1.0));
        CHECK(op.aW[r] == doctest::Approx(-1.0));
        CHECK(op.aE[r] == doctest::Approx(0.0));
        CHECK(op.aS[r] == doctest::Approx(0.0));
        CHECK(op.aN[r] == doctest::Approx(0.0));
    }
    SUBCASE("pure diffusion gives the discrete five-point stencil") {
        const auto p = make_2d(5, 5, 0.0, 0.0, 1.0, 1.0);
        const auto op = assemble_2d(p, 0.0);
        const int r = 2 + 2 * 5;
        CHECK(op.aC[r] == doctest::Approx(4.0));
        CHECK(op.aW[r] == doctest::Approx(-1.0));
        CHECK(op.aE[r] == doctest::Approx(-1.0));
        CHECK(op.aS[r] == doctest::Approx(-1.0));
        CHECK(op.aN[r] == doctest::Approx(-1.0));
    }
    SUBCASE("sign structure holds everywhere") {
        const auto p = make_2d(6, 4, 0.7, -0.4, 0.3, 0.2);
        const auto op = assemble_2d(p, 0.0);
        for (int r = 0; r < 24; ++r) {
            CHECK(op.aC[r] >= 0.0);
            CHECK(op.aW[r] <= 0.0);
            CHECK(op.aE[r] <= 0.0);
            CHECK(op.aS[r] <= 0.0);
            CHECK(op.aN[r] <= 0.0);
        }
    }
    SUBCASE("negative diffusivity is rejected") {
        auto p = make_2d(4, 4, 0.0, 0.0, 0.0, 0.0);
        p.k1 = [](double, double, double) { return -1.0; };
        CHECK_THROWS_AS(assemble_2d(p, 0.0), SolverError);
    }
}

TEST_CASE("constant field is a fixed point of the 2d step") {
    // Zero velocity so the Dirichlet boundary exerts no advective pull.
    auto p = make_2d(6, 6, 0.0, 0.0, 0.1, 0.1);
    p.bc.x = BoundarySpec::dirichlet(0.9, 0.9);
    p.bc.y = BoundarySpec::dirichlet(0.9, 0.9);
    Field y;
    y.values.assign(36, 0.9);
    SchemeConfig cfg;
    cfg.sigma = 0.0;
    cfg.dt = 0.5;
    cfg.mode = LimiterMode::AP;
    LimiterField2D f;
    const Field out = step_2d(p, cfg, y, &f);
    for (double v : out.values) CHECK(v == doctest::Approx(0.9).epsilon(1e-13));
}

TEST_CASE("diffusion-only step matches the direct stencil update") {
    const auto p = make_2d(7, 7, 0.0, 0.0, 0.2, 0.2);
    Field y;
    y.values.resize(49);
    for (int j = 0; j < 7; ++j)
        for (int i = 0; i < 7; ++i)
            y.values[i + 7 * j] = std::sin(0.9 * i) * std::cos(1.3 * j);
    SchemeConfig cfg;
    cfg.sigma = 0.0;
    cfg.dt = 0.4;
    cfg.mode = LimiterMode::AP;  // no advection, so nothing is limited
    const Field out = step_2d(p, cfg, y, nullptr);
    auto at = [&](int i, int j) {
        if (i < 0 || i >= 7 || j < 0 || j >= 7) return 0.0;  // boundary value
        return y.values[i + 7 * j];
    };
    for (int j = 1; j < 6; ++j)
        for (int i = 1; i < 6; ++i) {
            const double lap = at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) -
                               4.0 * at(i, j);
            CHECK(out.values[i + 7 * j] ==
                  doctest::Approx(at(i, j) + 0.4 * 0.2 * lap).epsilon(1e-12));
        }
}

TEST_CASE("fields constant along the second axis reduce to the 1d scheme") {
    // Same coefficients run through the 1d path and the 2d path row-wise.
    const int n = 16;
    LinearProblem2D p2;
    p2.grid = Grid2D::uniform(0, 1, n, 0, 1, 5);
    p2.bc.x = BoundarySpec::dirichlet(0, 0);
    p2.bc.y = BoundarySpec::dirichlet(0, 0);
    p2.u1 = [](double, double, double) { return 0.4; };
    p2.u2 = [](double, double, double) { return 0.0; };
    p2.k1 = [](double, double, double) { return 0.003; };
    LinearProblem1D p1;
    p1.grid = Grid1D::uniform(0, 1, n);
    p1.bc = BoundarySpec::dirichlet(0, 0);
    p1.velocity = [](double, double) { return 0.4; };
    p1.diffusivity = [](double, double) { return 0.003; };

    Field y1;
    y1.values.resize(n);
    for (int i = 0; i < n; ++i) y1.values[i] = std::exp(-20.0 * std::pow((i + 0.5) / n - 0.5, 2));
    Field y2;
    y2.values.resize(n * 5);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < n; ++i) y2.values[i + j * n] = y1.values[i];

    SchemeConfig cfg;
    cfg.sigma = 0.0;
    cfg.dt = 0.004;
    cfg.mode = LimiterMode::AP;
    const Field o1 = explicit_step(p1, cfg, y1);
    const Field o2 = step_2d(p2, cfg, y2);
    const int j = 2;  // middle row, unaffected by the transverse boundary
    for (int i = 0; i < n; ++i)
        CHECK(o2.values[i + j * n] == doctest::Approx(o1.values[i]).epsilon(1e-13));
}

TEST_CASE("2d explicit limited steps preserve five-point bounds and mass") {
    // Rotating field with compact support away from the boundary.
    LinearProblem2D p;
    const int n = 32;
    p.grid = Grid2D::uniform(0, 1, n, 0, 1, n);
    p.bc.x = BoundarySpec::dirichlet(0, 0);
    p.bc.y = BoundarySpec::dirichlet(0, 0);
    p.u1 = [](double, double yy, double) { return -2 * M_PI * (yy - 0.5); };
    p.u2 = [](double xx, double, double) { return 2 * M_PI * (xx - 0.5); };
    Field y;
    y.values.resize(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) / n - 0.5, yy = (j + 0.5) / n - 0.55;
            y.values[i + j * n] = std::max(0.0, 1.0 - 40.0 * (x * x + yy * yy));
        }
    double m0 = 0.0;
    for (double v : y.values) m0 += v;
    SchemeConfig cfg;
    cfg.sigma = 0.0;
    cfg.dt = 0.0008;
    for (auto mode : {LimiterMode::AP, LimiterMode::LP}) {
        cfg.mode = mode;
        Field cur = y;
        for (int s = 0; s < 25; ++s) {
            const Field next = step_2d(p, cfg, cur);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    auto at = [&](int ii, int jj) {
                        if (ii < 0 || ii >= n || jj < 0 || jj >= n) return 0.0;
                        return cur.values[ii + jj * n];
                    };
                    const double lo = std::min({at(i, j), at(i - 1, j), at(i + 1, j),
                                                at(i, j - 1), at(i, j + 1)});
                    const double hi = std::max({at(i, j), at(i - 1, j), at(i + 1, j),
                                                at(i, j - 1), at(i, j + 1)});
                    CHECK(next.values[i + j * n] >= lo - 1e-10);
                    CHECK(next.values[i + j * n] <= hi + 1e-10);
                }
            cur = next;
        }
        double m1 = 0.0;
        for (double v : cur.values) m1 += v;
        CHECK(m1 == doctest::Approx(m0).epsilon(1e-10));
    }
}

TEST_CASE("weighted 2d step converges and reuses the factorization") {
    auto p = make_2d(12, 12, 0.5, 0.25, 0.0, 0.0);
    Field y;
    y.values.resize(144);
    for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 12; ++i)
            y.values[i + 12 * j] =
                std::max(0.0, 1.0 - 0.2 * (std::abs(i - 6.0) + std::abs(j - 6.0)));
    SchemeConfig cfg;
    cfg.sigma = 0.5;
    cfg.dt = 0.25;
    cfg.mode = LimiterMode::AP;
    Workspace2D ws;
    StepReport rep;
    Field out = step_2d(p, cfg, y, nullptr, &rep, &ws);
    CHECK(rep.converged);
    REQUIRE(ws.factored.has_value());
    const Field out2 = step_2d(p, cfg, out, nullptr, &rep, &ws);
    CHECK(out2.all_finite());
}
