#include "ccd/kernels.hpp"

#include <atomic>
#include <cmath>

#include "ccd/geometry.hpp"

namespace ccd::kernels {

namespace {

void exp_batch_s(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void sin_batch_s(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::sin(x[i]);
}

double sum_s(const double* x, size_t n) {
    double a = 0.0;
    for (size_t i = 0; i < n; ++i) a += x[i];
    return a;
}

double dot_s(const double* x, const double* y, size_t n) {
    double a = 0.0;
    for (size_t i = 0; i < n; ++i) a += x[i] * y[i];
    return a;
}

double sumsq_s(const double* x, size_t n) {
    double a = 0.0;
    for (size_t i = 0; i < n; ++i) a += x[i] * x[i];
    return a;
}

void gauss_accum_s(const double* xs, const double* ys, size_t n, double cx, double cy,
                   double inv2s2, double w, double* acc) {
    for (size_t i = 0; i < n; ++i) {
        double dx = xs[i] - cx, dy = ys[i] - cy;
        acc[i] += w * std::exp(-(dx * dx + dy * dy) * inv2s2);
    }
}

void packet_accum_s(const double* xs, const double* ys, size_t n, double cx, double cy,
                    double inv2h, double kx, double ky, double* acc) {
    for (size_t i = 0; i < n; ++i) {
        double dx = xs[i] - cx, dy = ys[i] - cy;
        acc[i] += std::sin(xs[i] * kx + ys[i] * ky) * std::exp(-(dx * dx + dy * dy) * inv2h);
    }
}

void trace_entry_s(double R, double kappa, double L, double step, int max_steps,
                   const double* x, const double* y, const double* theta, int n,
                   double* out_s, double* out_a) {
    (void)L;
    (void)step;
    (void)max_steps;
    Disk d(R, kappa);
    for (int i = 0; i < n; ++i) {
        TraceResult r = trace_to_entry(d, cplx(x[i], y[i]), theta[i]);
        out_s[i] = r.ok ? r.s : std::nan("");
        out_a[i] = r.ok ? r.a : std::nan("");
    }
}

const Dispatch scalar_table = {
    "scalar", exp_batch_s, sin_batch_s, sum_s,       dot_s,
    sumsq_s,  gauss_accum_s, packet_accum_s, trace_entry_s,
};

std::atomic<bool> scalar_only{false};

}  // namespace

const Dispatch& scalar() { return scalar_table; }

#ifdef CCD_AVX2_TU
const Dispatch& avx2_table();  // kernels_avx2.cpp
bool have_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
bool have_avx2() { return false; }
#endif

const Dispatch& active() {
#ifdef CCD_AVX2_TU
    if (!scalar_only.load(std::memory_order_relaxed) && have_avx2()) return avx2_table();
#endif
    return scalar_table;
}

bool use_scalar_only(bool on) { return scalar_only.exchange(on); }

}  // namespace ccd::kernels

namespace ccd {

namespace {
std::atomic<int> g_threads{1};
}

int thread_budget() { return g_threads.load(std::memory_order_relaxed); }
void set_thread_budget(int n) { g_threads.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

}  // namespace ccd
