#include <doctest.h>

#include <cmath>

#include "fct/grid.hpp"

using namespace fct;

TEST_CASE("uniform grid partitions the interval") {
    const Grid1D g = Grid1D::uniform(0.0, 1.0, 4);
    REQUIRE(g.n() == 4);
    CHECK(g.centers[0] == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.centers[1] == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(g.centers[2] == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(g.centers[3] == doctest::Approx(0.875).epsilon(1e-15));
    for (double w : g.widths) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.interfaces.front() == 0.0);
    CHECK(g.interfaces.back() == 1.0);
}

TEST_CASE("benchmark grid sizes") {
    const Grid1D g = Grid1D::uniform(0.0, 4.0, 400);
    for (double w : g.widths) CHECK(w == doctest::Approx(0.01).epsilon(1e-14));
    const Grid1D b = Grid1D::uniform(-0.5, 0.5, 80);
    CHECK(b.n() == 80);
    CHECK(b.widths[0] == doctest::Approx(0.0125).epsilon(1e-14));
}

TEST_CASE("grid construction rejects bad input") {
    CHECK_THROWS_AS(Grid1D::uniform(0.0, 1.0, 2), GridError);
    CHECK_THROWS_AS(Grid1D::uniform(1.0, 1.0, 10), GridError);
    CHECK_THROWS_AS(Grid1D::uniform(2.0, 1.0, 10), GridError);
}

TEST_CASE("cell widths sum to the domain length") {
    for (int n : {3, 7, 100, 401}) {
        const Grid1D g = Grid1D::uniform(-2.0, 5.0, n);
        double sum = 0.0;
        for (double w : g.widths) sum += w;
        CHECK(sum == doctest::Approx(7.0).epsilon(1e-12));
    }
}

TEST_CASE("nonuniform grid uses half neighbor distances") {
    const Grid1D g = Grid1D::from_centers(0.0, 1.0, {0.1, 0.3, 0.4, 0.8});
    CHECK(g.widths[1] == doctest::Approx(0.5 * (0.4 - 0.1)));
    CHECK(g.widths[2] == doctest::Approx(0.5 * (0.8 - 0.3)));
    CHECK(g.widths[0] == doctest::Approx(0.2));  // one-sided at the ends
    CHECK(g.widths[3] == doctest::Approx(0.4));
    CHECK(g.interfaces[1] == doctest::Approx(0.2));
    CHECK_THROWS_AS(Grid1D::from_centers(0.0, 1.0, {0.1, 0.05, 0.4}), GridError);
}

TEST_CASE("ghost extension per boundary kind") {
    const std::vector<double> v{1, 2, 3};
    const auto per = ghost_extend(v, BoundarySpec::periodic(), 1);
    CHECK(per == std::vector<double>{3, 1, 2, 3, 1});
    const auto dir = ghost_extend(v, BoundarySpec::dirichlet(0, 0), 1);
    CHECK(dir == std::vector<double>{0, 1, 2, 3, 0});
    const auto ext = ghost_extend({5, 5}, BoundarySpec::extend_constant(), 2);
    CHECK(ext == std::vector<double>{5, 5, 5, 5, 5, 5});
}

TEST_CASE("periodic ghosts wrap consistently at width 2") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto g = ghost_extend(v, BoundarySpec::periodic(), 2);
    CHECK(g == std::vector<double>{4, 5, 1, 2, 3, 4, 5, 1, 2});
    for (int i = 0; i < 5; ++i) CHECK(g[i + 2] == v[i]);
}

TEST_CASE("2d index map is a bijection") {
    const Grid2D g = Grid2D::uniform(0, 1, 5, 0, 1, 7);
    std::vector<int> seen(g.cells(), 0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const int r = g.index(i, j);
            REQUIRE(r >= 0);
            REQUIRE(r < g.cells());
            ++seen[r];
        }
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("field finiteness check") {
    Field f({1.0, 2.0});
    CHECK(f.all_finite());
    f.values.push_back(std::nan(""));
    CHECK(!f.all_finite());
}
