#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fct/simd.hpp"

using namespace fct::simd;

namespace {

std::vector<double> randvec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Every kernel set must agree with the scalar reference; elementwise ops
// bitwise, reductions up to summation-order differences.
void check_against_scalar(const Kernels& k, int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    const auto& ref = scalar_kernels();
    const auto a = randvec(rng, n + 2);
    const auto b = randvec(rng, n + 2);
    const auto w = randvec(rng, n);

    {
        auto y1 = a, y2 = a;
        k.axpy(1.7, b.data(), y1.data(), n);
        ref.axpy(1.7, b.data(), y2.data(), n);
        for (int i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
    }
    {
        auto y1 = a, y2 = a;
        k.flux_update(y1.data(), b.data(), w.data(), n);
        ref.flux_update(y2.data(), b.data(), w.data(), n);
        for (int i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
    }
    {
        std::vector<double> o1(n), o2(n);
        k.scaled_jump(w.data(), a.data(), o1.data(), n);
        ref.scaled_jump(w.data(), a.data(), o2.data(), n);
        for (int i = 0; i < n; ++i) CHECK(o1[i] == o2[i]);
    }
    {
        std::vector<double> mn1(n), mx1(n), mn2(n), mx2(n);
        k.window3_minmax(a.data(), mn1.data(), mx1.data(), n);
        ref.window3_minmax(a.data(), mn2.data(), mx2.data(), n);
        CHECK(mn1 == mn2);
        CHECK(mx1 == mx2);
    }
    {
        auto m1 = a, m2 = a;
        k.min_inplace(m1.data(), b.data(), n);
        ref.min_inplace(m2.data(), b.data(), n);
        CHECK(m1 == m2);
        auto x1 = a, x2 = a;
        k.max_inplace(x1.data(), b.data(), n);
        ref.max_inplace(x2.data(), b.data(), n);
        CHECK(x1 == x2);
    }
    {
        auto c1 = a, c2 = a;
        k.clamp01(c1.data(), n);
        ref.clamp01(c2.data(), n);
        CHECK(c1 == c2);
    }
    const double tol = 1e-13 * n;
    CHECK(k.sum(a.data(), n) == doctest::Approx(ref.sum(a.data(), n)).epsilon(tol));
    CHECK(k.dot(a.data(), b.data(), n) ==
          doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
    CHECK(k.weighted_abs_diff(w.data(), a.data(), b.data(), n) ==
          doctest::Approx(ref.weighted_abs_diff(w.data(), a.data(), b.data(), n)).epsilon(tol));
    CHECK(k.max_abs(a.data(), n) == ref.max_abs(a.data(), n));
    CHECK(k.max_val(a.data(), n) == ref.max_val(a.data(), n));
}

}  // namespace

TEST_CASE("active kernel set matches the scalar reference") {
    for (int n : {1, 2, 3, 4, 5, 7, 8, 16, 63, 64, 65, 1000})
        check_against_scalar(kernels(), n, 1000 + n);
}

TEST_CASE("wide kernels match the scalar reference when available") {
    const Kernels* wide = avx2_kernels();
    if (!wide) return;  // build or CPU without the wide path
    for (int n : {1, 3, 4, 6, 17, 128, 1001}) check_against_scalar(*wide, n, 2000 + n);
}

TEST_CASE("reductions handle empty and single-element input") {
    const auto& k = kernels();
    const double x = 5.0;
    CHECK(k.sum(&x, 0) == 0.0);
    CHECK(k.sum(&x, 1) == 5.0);
    CHECK(k.max_abs(&x, 1) == 5.0);
    CHECK(k.max_val(&x, 1) == 5.0);
}
