#include "fct/simd.hpp"

#ifdef FCT_SIMD_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace fct::simd {

namespace {

void a_axpy(double a, const double* x, double* y, int n) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void a_flux_update(double* y, const double* f, const double* r, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d df = _mm256_sub_pd(_mm256_loadu_pd(f + i + 1), _mm256_loadu_pd(f + i));
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_sub_pd(vy, _mm256_mul_pd(_mm256_loadu_pd(r + i), df));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] -= r[i] * (f[i + 1] - f[i]);
}

void a_scaled_jump(const double* c, const double* y, double* out, int n) {
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + k + 1), _mm256_loadu_pd(y + k));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(c + k), dy));
    }
    for (; k < n; ++k) out[k] = c[k] * (y[k + 1] - y[k]);
}

void a_window3_minmax(const double* y, double* mn, double* mx, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(y + i);
        __m256d v1 = _mm256_loadu_pd(y + i + 1);
        __m256d v2 = _mm256_loadu_pd(y + i + 2);
        _mm256_storeu_pd(mn + i, _mm256_min_pd(_mm256_min_pd(v0, v1), v2));
        _mm256_storeu_pd(mx + i, _mm256_max_pd(_mm256_max_pd(v0, v1), v2));
    }
    for (; i < n; ++i) {
        mn[i] = std::min(std::min(y[i], y[i + 1]), y[i + 2]);
        mx[i] = std::max(std::max(y[i], y[i + 1]), y[i + 2]);
    }
}

void a_min_inplace(double* a, const double* b, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(a + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) a[i] = std::min(a[i], b[i]);
}

void a_max_inplace(double* a, const double* b, int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(a + i, _mm256_max_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) a[i] = std::max(a[i], b[i]);
}

void a_clamp01(double* x, int n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_min_pd(one, _mm256_max_pd(zero, _mm256_loadu_pd(x + i))));
    for (; i < n; ++i) x[i] = std::min(1.0, std::max(0.0, x[i]));
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double a_sum(const double* x, int n) {
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double a_dot(const double* x, const double* y, int n) {
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double a_weighted_abs_diff(const double* w, const double* a, const double* b, int n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        d = _mm256_andnot_pd(sign, d);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::abs(a[i] - b[i]);
    return s;
}

double a_max_abs(const double* x, int n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double a_max_val(const double* x, int n) {
    double m = -HUGE_VAL;
    int i = 0;
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
        double lanes[4];
        _mm256_storeu_pd(lanes, acc);
        m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    }
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

}  // namespace

const Kernels* avx2_kernels() {
    static const Kernels k = {
        "avx2",       a_axpy,        a_flux_update,       a_scaled_jump, a_window3_minmax,
        a_min_inplace, a_max_inplace, a_clamp01,          a_sum,         a_dot,
        a_weighted_abs_diff, a_max_abs, a_max_val,
    };
    static const bool ok = cpu_has_avx2();
    return ok ? &k : nullptr;
}

}  // namespace fct::simd

#endif  // FCT_SIMD_AVX2
