#include <doctest.h>

#include <cmath>
#include <random>

#include "fct/entropy.hpp"
#include "fct/stepper.hpp"

using namespace fct;

TEST_CASE("square entropy flux closed forms") {
    const auto burgers = FluxFunction::burgers();
    const auto pb = square_entropy(burgers);
    CHECK(pb.F(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(pb.U(0.0) == 0.0);
    CHECK(pb.F(0.0) == 0.0);
    const auto quartic = FluxFunction::quartic();
    const auto pq = square_entropy(quartic);
    CHECK(pq.F(1.0) == doctest::Approx(-19.0 / 30.0));
}

TEST_CASE("entropy flux compatibility F' = U' f'") {
    const double h = 1e-5;
    for (const auto& fx :
         {FluxFunction::burgers(), FluxFunction::quartic(), FluxFunction::buckley_leverett()}) {
        const auto pair = square_entropy(fx);
        for (int s = 0; s <= 100; ++s) {
            const double r = -2.9 + 5.8 * s / 100.0;
            const double fd = (pair.F(r + h) - pair.F(r - h)) / (2 * h);
            CHECK(fd == doctest::Approx(pair.dU(r) * fx.df(r)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("entropy convexity") {
    const auto pair = square_entropy(FluxFunction::burgers());
    for (int s = 0; s <= 50; ++s) CHECK(pair.d2U(-3.0 + 6.0 * s / 50.0) >= 0.0);
}

TEST_CASE("rusanov entropy flux values") {
    const auto burgers = FluxFunction::burgers();
    const auto pair = square_entropy(burgers);
    CHECK(rusanov_entropy_flux(pair, burgers, 1, 0) == doctest::Approx(5.0 / 12.0));
    CHECK(rusanov_entropy_flux(pair, burgers, 0, 0) == doctest::Approx(0.0));
    for (double r : {-1.0, 0.3, 2.0})
        CHECK(rusanov_entropy_flux(pair, burgers, r, r) ==
              doctest::Approx(pair.F(r)).epsilon(1e-12));
}

TEST_CASE("antidiffusive entropy term") {
    const auto burgers = FluxFunction::burgers();
    const auto pair = square_entropy(burgers);
    CHECK(antidiffusive_entropy_term(pair, burgers, 1, 0) == doctest::Approx(-0.25));
    CHECK(antidiffusive_entropy_term(pair, burgers, 0, 1) == doctest::Approx(0.25));
    CHECK(antidiffusive_entropy_term(pair, burgers, 0.4, 0.4) == doctest::Approx(0.0));
}

TEST_CASE("potential-based entropy flux") {
    const auto burgers = FluxFunction::burgers();
    const auto pair = square_entropy(burgers);
    const auto pot = tadmor_potential(pair, burgers);
    CHECK(pot.psi(1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(tadmor_entropy_flux(pot, pair, 1, 1, 0.5) == doctest::Approx(1.0 / 3.0));
    CHECK(tadmor_entropy_flux(pot, pair, 0, 0, 0) == doctest::Approx(0.0));
    const auto quartic = FluxFunction::quartic();
    const auto potq = tadmor_potential(square_entropy(quartic), quartic);
    CHECK(potq.psi(1.0) == doctest::Approx(1.0 / 20.0 - 5.0 / 12.0 + 1.0));
}

TEST_CASE("potential derivative matches the flux") {
    const auto quartic = FluxFunction::quartic();
    const auto pair = square_entropy(quartic);
    const auto pot = tadmor_potential(pair, quartic);
    const double h = 1e-5;
    for (int s = 0; s <= 40; ++s) {
        const double v = -2.0 + 4.0 * s / 40.0;
        const double fd = (pot.psi(v + h) - pot.psi(v - h)) / (2 * h);
        CHECK(fd == doctest::Approx(pot.g(v)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("rusanov entropy flux satisfies the proper-flux identity") {
    // The identity holds in the argument whose flux derivative does not carry
    // the interval maximum, where the dissipation coefficient is locally
    // independent of the differentiated state.
    const auto burgers = FluxFunction::burgers();
    const auto pair = square_entropy(burgers);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2, 2);
    const double h = 1e-5;
    int checked = 0;
    for (int t = 0; t < 200 && checked < 100; ++t) {
        const double a = u(rng), b = u(rng);
        if (std::abs(std::abs(a) - std::abs(b)) < 0.05) continue;  // smooth max
        ++checked;
        if (std::abs(a) < std::abs(b)) {
            const double dHl =
                (rusanov_entropy_flux(pair, burgers, a + h, b) -
                 rusanov_entropy_flux(pair, burgers, a - h, b)) /
                (2 * h);
            const double dhl =
                (rusanov_flux(burgers, a + h, b) - rusanov_flux(burgers, a - h, b)) / (2 * h);
            CHECK(dHl == doctest::Approx(pair.dU(a) * dhl).epsilon(1e-5).scale(1.0));
        } else {
            const double dHr =
                (rusanov_entropy_flux(pair, burgers, a, b + h) -
                 rusanov_entropy_flux(pair, burgers, a, b - h)) /
                (2 * h);
            const double dhr =
                (rusanov_flux(burgers, a, b + h) - rusanov_flux(burgers, a, b - h)) / (2 * h);
            CHECK(dHr == doctest::Approx(pair.dU(b) * dhr).epsilon(1e-5).scale(1.0));
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("potential-based flux is not proper") {
    const auto burgers = FluxFunction::burgers();
    const auto pair = square_entropy(burgers);
    const auto pot = tadmor_potential(pair, burgers);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2, 2);
    const double h = 1e-5;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double a = u(rng), b = u(rng);
        auto H = [&](double l, double r) {
            return tadmor_entropy_flux(pot, pair, l, r, rusanov_flux(burgers, l, r));
        };
        const double dH = (H(a + h, b) - H(a - h, b)) / (2 * h);
        const double dh =
            (rusanov_flux(burgers, a + h, b) - rusanov_flux(burgers, a - h, b)) / (2 * h);
        worst = std::max(worst, std::abs(dH - pair.dU(a) * dh));
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("cell entropy residual vanishes on constant data") {
    const auto fx = FluxFunction::burgers();
    const auto pair = square_entropy(fx);
    const Grid1D grid = Grid1D::uniform(0, 1, 10);
    const std::vector<double> y(10, 0.7);
    const std::vector<double> alpha(11, 0.3);
    const auto res = cell_entropy_residual(pair, fx, y, y, alpha, alpha, 0.5, grid,
                                           BoundarySpec::extend_constant(), 0.01);
    for (double r : res) CHECK(std::abs(r) <= 1e-15);
}

TEST_CASE("monotone explicit steps satisfy the cell entropy inequality") {
    // Random data stepped by the unlimited low-order scheme at a time step
    // within both admissibility bounds.
    const auto fx = FluxFunction::quartic();
    ConservationProblem1D prob;
    prob.grid = Grid1D::uniform(-1, 1, 60);
    prob.bc = BoundarySpec::extend_constant();
    prob.flux = fx;
    prob.entropy = square_entropy(fx);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.8, 1.8);
    for (int trial = 0; trial < 5; ++trial) {
        Field y;
        y.values.resize(60);
        double prev = u(rng);
        for (auto& v : y.values) prev = v = 0.7 * prev + 0.3 * u(rng);
        SchemeConfig cfg;
        cfg.mode = LimiterMode::LowOrder;
        cfg.low_flux = LowFluxKind::Rusanov;
        cfg.sigma = 0.0;
        const double dt_mono = max_stable_dt(prob, cfg, y);
        const double dt_ent = entropy_dt_bound(prob, cfg, y);
        cfg.dt = 0.5 * std::min(dt_mono, dt_ent);
        StepReport rep;
        const Field out = explicit_step(prob, cfg, y, nullptr, &rep);
        const std::vector<double> a0(61, 0.0);
        const auto res = cell_entropy_residual(*prob.entropy, fx, y.values, out.values, a0, a0,
                                               0.0, prob.grid, prob.bc, cfg.dt);
        for (double r : res) CHECK(r <= 1e-12);
    }
}
