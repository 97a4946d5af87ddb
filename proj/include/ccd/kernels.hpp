#pragma once

#include <cstddef>

// Data-parallel inner-loop kernels. The scalar implementations are the
// reference; an AVX2 variant is selected at runtime when the CPU supports it
// and must agree with the reference (see test_kernels.cpp). The geodesic
// tracer uses mul/add-only arithmetic so scalar and vector lanes follow the
// same rounding sequence.

namespace ccd::kernels {

struct Dispatch {
    const char* name;

    void (*exp_batch)(const double* x, double* out, size_t n);
    void (*sin_batch)(const double* x, double* out, size_t n);

    double (*sum)(const double* x, size_t n);
    double (*dot)(const double* x, const double* y, size_t n);
    double (*sumsq)(const double* x, size_t n);

    // acc[i] += w * exp(-((x-cx)^2 + (y-cy)^2) * inv2s2)
    void (*gauss_accum)(const double* xs, const double* ys, size_t n, double cx, double cy,
                        double inv2s2, double w, double* acc);
    // acc[i] += sin(x*kx + y*ky) * exp(-((x-cx)^2 + (y-cy)^2) * inv2h)
    void (*packet_accum)(const double* xs, const double* ys, size_t n, double cx, double cy,
                         double inv2h, double kx, double ky, double* acc);

    // Backward geodesic trace to the boundary for a batch of (x, y, theta).
    // Outputs boundary arclength and fiber angle; NaN when no crossing found.
    void (*trace_entry)(double R, double kappa, double L, double step, int max_steps,
                        const double* x, const double* y, const double* theta, int n,
                        double* out_s, double* out_a);
};

const Dispatch& active();
const Dispatch& scalar();
bool have_avx2();

// Force the scalar path (tests and --no-simd); returns previous setting.
bool use_scalar_only(bool on);

}  // namespace ccd::kernels
