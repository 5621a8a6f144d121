#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "fct/flux.hpp"

using namespace fct;

TEST_CASE("upwind flux picks the upstream state") {
    CHECK(upwind_flux(2, 1, 3) == doctest::Approx(2.0));
    CHECK(upwind_flux(-2, 1, 3) == doctest::Approx(-6.0));
    CHECK(upwind_flux(0, 1, 3) == doctest::Approx(0.0));
}

TEST_CASE("centered flux") {
    CHECK(centered_flux(2, 1, 3) == doctest::Approx(4.0));
    CHECK(centered_flux(1, 0.7, 0.7) == doctest::Approx(0.7));
    CHECK(centered_flux(-1, 2, 4) == doctest::Approx(-3.0));
}

TEST_CASE("QUICK flux and its antidiffusive part") {
    CHECK(quick_flux(1, 0, 1, 1, 1) == doctest::Approx(1.125));
    CHECK(quick_flux(-1, 1, 1, 1, 0) == doctest::Approx(-1.125));  // flux of u=-1 state 1
    for (double r : {-0.5, 0.0, 2.0})
        CHECK(quick_flux(1.3, r, r, r, r) == doctest::Approx(1.3 * r).epsilon(1e-14));
    CHECK(quick_antidiffusive(1, 0, 1, 1, 1) == doctest::Approx(0.125));
    // upwind plus the bracketed correction reproduces the full flux
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 50; ++t) {
        const double vel = u(rng), a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const double total = upwind_flux(vel, b, c) + quick_antidiffusive(vel, a, b, c, d);
        CHECK(std::abs(total - quick_flux(vel, a, b, c, d)) <= 1e-13);
    }
}

TEST_CASE("interval max derivative from registered critical points") {
    const auto burgers = FluxFunction::burgers();
    CHECK(interval_max_abs_deriv(burgers, 0, 1) == doctest::Approx(1.0));
    const auto quartic = FluxFunction::quartic();
    CHECK(interval_max_abs_deriv(quartic, -2, 2) == doctest::Approx(3.0));
    CHECK(interval_max_abs_deriv(quartic, 0.7, 0.7) ==
          doctest::Approx(std::abs(quartic.df(0.7))));
}

TEST_CASE("interval max derivative matches dense sampling") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.8, 2.8);
    for (const auto& fx :
         {FluxFunction::burgers(), FluxFunction::quartic(), FluxFunction::buckley_leverett()}) {
        for (int t = 0; t < 40; ++t) {
            const double a = u(rng), b = u(rng);
            const double lo = std::min(a, b), hi = std::max(a, b);
            double dense = 0.0;
            for (int s = 0; s <= 10000; ++s)
                dense = std::max(dense, std::abs(fx.df(lo + (hi - lo) * s / 10000)));
            const double exact = interval_max_abs_deriv(fx, a, b);
            CHECK(exact >= dense - 1e-9);
            CHECK(exact == doctest::Approx(dense).epsilon(1e-6));
        }
    }
}

TEST_CASE("rusanov flux values") {
    const auto burgers = FluxFunction::burgers();
    CHECK(rusanov_flux(burgers, 1, 0) == doctest::Approx(0.75));
    const auto quartic = FluxFunction::quartic();
    CHECK(rusanov_flux(quartic, 2, -2) == doctest::Approx(6.0));
    for (double r : {-1.5, 0.0, 0.9}) {
        CHECK(rusanov_flux(burgers, r, r) == doctest::Approx(burgers.f(r)).epsilon(1e-14));
        CHECK(rusanov_flux(quartic, r, r) == doctest::Approx(quartic.f(r)).epsilon(1e-14));
    }
}

TEST_CASE("godunov flux values") {
    const auto burgers = FluxFunction::burgers();
    CHECK(godunov_flux(burgers, -1, 1) == doctest::Approx(0.0));
    CHECK(godunov_flux(burgers, 1, -1) == doctest::Approx(0.5));
    CHECK(godunov_flux(burgers, 1, 2) == doctest::Approx(0.5));
}

TEST_CASE("godunov flux agrees with a sampling-plus-refinement oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.8, 2.8);
    for (const auto& fx :
         {FluxFunction::burgers(), FluxFunction::quartic(), FluxFunction::buckley_leverett()}) {
        for (int t = 0; t < 1000; ++t) {
            const double a = u(rng), b = u(rng);
            const double lo = std::min(a, b), hi = std::max(a, b);
            const bool want_min = a <= b;
            auto value = [&](double x) { return want_min ? fx.f(x) : -fx.f(x); };
            // coarse scan for the global basin, then ternary refinement
            const int S = 2000;
            int best = 0;
            double bv = value(lo);
            for (int s = 1; s <= S; ++s) {
                const double v = value(lo + (hi - lo) * s / S);
                if (v < bv) {
                    bv = v;
                    best = s;
                }
            }
            double l = lo + (hi - lo) * std::max(0, best - 1) / S;
            double r = lo + (hi - lo) * std::min(S, best + 1) / S;
            for (int it = 0; it < 80; ++it) {
                const double m1 = l + (r - l) / 3, m2 = r - (r - l) / 3;
                if (value(m1) <= value(m2))
                    r = m2;
                else
                    l = m1;
            }
            const double refined = std::min({bv, value(l), value(0.5 * (l + r))});
            const double want = want_min ? refined : -refined;
            const double g = godunov_flux(fx, a, b);
            CHECK(std::abs(g - want) <= 1e-8);
        }
    }
}

TEST_CASE("numerical flux consistency") {
    for (const auto& fx :
         {FluxFunction::burgers(), FluxFunction::quartic(), FluxFunction::buckley_leverett()}) {
        for (int s = 0; s <= 20; ++s) {
            const double r = -2.5 + 5.0 * s / 20.0;
            CHECK(rusanov_flux(fx, r, r) == doctest::Approx(fx.f(r)).epsilon(1e-12));
            CHECK(godunov_flux(fx, r, r) == doctest::Approx(fx.f(r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rusanov flux is monotone in its arguments") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    const double h = 1e-6;
    for (const auto& fx : {FluxFunction::burgers(), FluxFunction::quartic()}) {
        for (int t = 0; t < 100; ++t) {
            const double a = u(rng), b = u(rng);
            const double dl = (rusanov_flux(fx, a + h, b) - rusanov_flux(fx, a - h, b)) / (2 * h);
            const double dr = (rusanov_flux(fx, a, b + h) - rusanov_flux(fx, a, b - h)) / (2 * h);
            CHECK(dl >= -1e-6);
            CHECK(dr <= 1e-6);
        }
    }
}

TEST_CASE("registered critical points satisfy their defining equations") {
    const auto bl = FluxFunction::buckley_leverett();
    const double h = 1e-5;
    for (double c : bl.deriv_critical_points) {
        const double d2 = (bl.df(c + h) - bl.df(c - h)) / (2 * h);
        CHECK(std::abs(d2) <= 1e-8);
    }
    for (double c : bl.flux_critical_points) CHECK(std::abs(bl.df(c)) <= 1e-8);
    const auto quartic = FluxFunction::quartic();
    for (double c : quartic.flux_critical_points) CHECK(std::abs(quartic.df(c)) <= 1e-12);
}

TEST_CASE("diffusive flux") {
    CHECK(diffusive_flux(0.005, 0, 1, 0.01) == doctest::Approx(0.5));
    CHECK(diffusive_flux(0.3, 0.7, 0.7, 0.1) == doctest::Approx(0.0));
    CHECK(diffusive_flux(0.0, -1, 4, 0.1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(diffusive_flux(0.1, 0, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(diffusive_flux(-0.1, 0, 1, 0.5), std::invalid_argument);
}
