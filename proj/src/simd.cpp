#include "fct/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace fct::simd {

namespace {

void s_axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_flux_update(double* y, const double* f, const double* r, int n) {
    for (int i = 0; i < n; ++i) y[i] -= r[i] * (f[i + 1] - f[i]);
}

void s_scaled_jump(const double* c, const double* y, double* out, int n) {
    for (int k = 0; k < n; ++k) out[k] = c[k] * (y[k + 1] - y[k]);
}

void s_window3_minmax(const double* y, double* mn, double* mx, int n) {
    for (int i = 0; i < n; ++i) {
        mn[i] = std::min(std::min(y[i], y[i + 1]), y[i + 2]);
        mx[i] = std::max(std::max(y[i], y[i + 1]), y[i + 2]);
    }
}

void s_min_inplace(double* a, const double* b, int n) {
    for (int i = 0; i < n; ++i) a[i] = std::min(a[i], b[i]);
}

void s_max_inplace(double* a, const double* b, int n) {
    for (int i = 0; i < n; ++i) a[i] = std::max(a[i], b[i]);
}

void s_clamp01(double* x, int n) {
    for (int i = 0; i < n; ++i) x[i] = std::min(1.0, std::max(0.0, x[i]));
}

double s_sum(const double* x, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i];
    return s;
}

double s_dot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double s_weighted_abs_diff(const double* w, const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * std::abs(a[i] - b[i]);
    return s;
}

double s_max_abs(const double* x, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double s_max_val(const double* x, int n) {
    double m = -HUGE_VAL;
    for (int i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar",     s_axpy,        s_flux_update,       s_scaled_jump, s_window3_minmax,
        s_min_inplace, s_max_inplace, s_clamp01,          s_sum,         s_dot,
        s_weighted_abs_diff, s_max_abs, s_max_val,
    };
    return k;
}

const Kernels& kernels() {
    static const Kernels* active = [] {
        const char* env = std::getenv("FCT_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const Kernels* wide = avx2_kernels();
        if (env && std::strcmp(env, "avx2") == 0 && wide) return wide;
        if (!env && wide) return wide;
        return &scalar_kernels();
    }();
    return *active;
}

#ifndef FCT_SIMD_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif

}  // namespace fct::simd
