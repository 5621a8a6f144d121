#pragma once

namespace fct::simd {

/// Data-parallel inner-loop kernels. A scalar reference implementation always
/// exists; wider variants are selected once at startup based on CPU support
/// (override with FCT_SIMD=scalar|avx2). All variants agree with the scalar
/// kernels elementwise up to reduction reordering.
struct Kernels {
    const char* name;

    /// y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, int n);
    /// y[i] -= r[i] * (f[i+1] - f[i])   (f has n+1 entries)
    void (*flux_update)(double* y, const double* f, const double* r, int n);
    /// out[k] = c[k] * (y[k+1] - y[k])  (y has n+1 entries)
    void (*scaled_jump)(const double* c, const double* y, double* out, int n);
    /// mn[i] = min(y[i], y[i+1], y[i+2]), mx likewise (y has n+2 entries)
    void (*window3_minmax)(const double* y, double* mn, double* mx, int n);
    void (*min_inplace)(double* a, const double* b, int n);
    void (*max_inplace)(double* a, const double* b, int n);
    void (*clamp01)(double* x, int n);

    double (*sum)(const double* x, int n);
    double (*dot)(const double* x, const double* y, int n);
    /// sum_i w[i] * |a[i] - b[i]|
    double (*weighted_abs_diff)(const double* w, const double* a, const double* b, int n);
    double (*max_abs)(const double* x, int n);
    double (*max_val)(const double* x, int n);
};

const Kernels& scalar_kernels();

/// Null when this build or CPU lacks AVX2.
const Kernels* avx2_kernels();

/// The active kernel set.
const Kernels& kernels();

}  // namespace fct::simd
