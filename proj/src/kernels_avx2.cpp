// AVX2 variants of the batch kernels. Arithmetic in the tracer is mul/add-only
// in the same order as the scalar reference (geometry.cpp), so lanes reproduce
// the scalar rounding sequence; transcendentals come from glibc's libmvec.
// Built with -mavx2 -mfma; selected at runtime (see kernels.cpp).

#include <immintrin.h>

#include <cmath>

#include "ccd/geometry.hpp"
#include "ccd/kernels.hpp"

extern "C" {
__m256d _ZGVdN4v_exp(__m256d);
__m256d _ZGVdN4v_sin(__m256d);
__m256d _ZGVdN4vv_atan2(__m256d, __m256d);
}

namespace ccd::kernels {

namespace {

inline __m256d vexp(__m256d x) { return _ZGVdN4v_exp(x); }
inline __m256d vsin(__m256d x) { return _ZGVdN4v_sin(x); }

void exp_batch_v(const double* x, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vexp(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void sin_batch_v(const double* x, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vsin(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::sin(x[i]);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_v(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double a = hsum(acc);
    for (; i < n; ++i) a += x[i];
    return a;
}

double dot_v(const double* x, const double* y, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double a = hsum(acc);
    for (; i < n; ++i) a += x[i] * y[i];
    return a;
}

double sumsq_v(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double a = hsum(acc);
    for (; i < n; ++i) a += x[i] * x[i];
    return a;
}

void gauss_accum_v(const double* xs, const double* ys, size_t n, double cx, double cy,
                   double inv2s2, double w, double* acc) {
    __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
    __m256d vs = _mm256_set1_pd(-inv2s2), vw = _mm256_set1_pd(w);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
        __m256d q = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), vs);
        __m256d r = _mm256_mul_pd(vw, vexp(q));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), r));
    }
    for (; i < n; ++i) {
        double dx = xs[i] - cx, dy = ys[i] - cy;
        acc[i] += w * std::exp(-(dx * dx + dy * dy) * inv2s2);
    }
}

void packet_accum_v(const double* xs, const double* ys, size_t n, double cx, double cy,
                    double inv2h, double kx, double ky, double* acc) {
    __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
    __m256d vh = _mm256_set1_pd(-inv2h);
    __m256d vkx = _mm256_set1_pd(kx), vky = _mm256_set1_pd(ky);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i), y = _mm256_loadu_pd(ys + i);
        __m256d dx = _mm256_sub_pd(x, vcx), dy = _mm256_sub_pd(y, vcy);
        __m256d q = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), vh);
        __m256d ph = _mm256_add_pd(_mm256_mul_pd(x, vkx), _mm256_mul_pd(y, vky));
        __m256d r = _mm256_mul_pd(vsin(ph), vexp(q));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), r));
    }
    for (; i < n; ++i) {
        double dx = xs[i] - cx, dy = ys[i] - cy;
        acc[i] += std::sin(xs[i] * kx + ys[i] * ky) * std::exp(-(dx * dx + dy * dy) * inv2h);
    }
}

struct Ray4 {
    __m256d x, y, vx, vy;
};

// Same operation order as ray_rhs/rk4_step in geometry.cpp; mul/add only.
inline void ray_rhs4(__m256d kap, const Ray4& s, Ray4& out) {
    __m256d one = _mm256_set1_pd(1.0);
    __m256d c = _mm256_add_pd(
        one, _mm256_mul_pd(kap, _mm256_add_pd(_mm256_mul_pd(s.x, s.x), _mm256_mul_pd(s.y, s.y))));
    __m256d two = _mm256_set1_pd(2.0);
    __m256d om = _mm256_mul_pd(
        _mm256_mul_pd(two, kap),
        _mm256_sub_pd(_mm256_mul_pd(s.x, s.vy), _mm256_mul_pd(s.y, s.vx)));
    out.x = _mm256_mul_pd(c, s.vx);
    out.y = _mm256_mul_pd(c, s.vy);
    out.vx = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(om, s.vy));
    out.vy = _mm256_mul_pd(om, s.vx);
}

inline Ray4 rk4_step4(__m256d kap, const Ray4& s, __m256d h) {
    __m256d half = _mm256_set1_pd(0.5), sixth = _mm256_set1_pd(1.0 / 6.0),
            two = _mm256_set1_pd(2.0);
    __m256d hh = _mm256_mul_pd(half, h);
    Ray4 k1, k2, k3, k4, t;
    ray_rhs4(kap, s, k1);
    t = {_mm256_add_pd(s.x, _mm256_mul_pd(hh, k1.x)), _mm256_add_pd(s.y, _mm256_mul_pd(hh, k1.y)),
         _mm256_add_pd(s.vx, _mm256_mul_pd(hh, k1.vx)),
         _mm256_add_pd(s.vy, _mm256_mul_pd(hh, k1.vy))};
    ray_rhs4(kap, t, k2);
    t = {_mm256_add_pd(s.x, _mm256_mul_pd(hh, k2.x)), _mm256_add_pd(s.y, _mm256_mul_pd(hh, k2.y)),
         _mm256_add_pd(s.vx, _mm256_mul_pd(hh, k2.vx)),
         _mm256_add_pd(s.vy, _mm256_mul_pd(hh, k2.vy))};
    ray_rhs4(kap, t, k3);
    t = {_mm256_add_pd(s.x, _mm256_mul_pd(h, k3.x)), _mm256_add_pd(s.y, _mm256_mul_pd(h, k3.y)),
         _mm256_add_pd(s.vx, _mm256_mul_pd(h, k3.vx)),
         _mm256_add_pd(s.vy, _mm256_mul_pd(h, k3.vy))};
    ray_rhs4(kap, t, k4);
    __m256d h6 = _mm256_mul_pd(h, sixth);
    Ray4 r;
    r.x = _mm256_add_pd(
        s.x, _mm256_mul_pd(h6, _mm256_add_pd(_mm256_add_pd(k1.x, _mm256_mul_pd(two, k2.x)),
                                             _mm256_add_pd(_mm256_mul_pd(two, k3.x), k4.x))));
    r.y = _mm256_add_pd(
        s.y, _mm256_mul_pd(h6, _mm256_add_pd(_mm256_add_pd(k1.y, _mm256_mul_pd(two, k2.y)),
                                             _mm256_add_pd(_mm256_mul_pd(two, k3.y), k4.y))));
    r.vx = _mm256_add_pd(
        s.vx, _mm256_mul_pd(h6, _mm256_add_pd(_mm256_add_pd(k1.vx, _mm256_mul_pd(two, k2.vx)),
                                              _mm256_add_pd(_mm256_mul_pd(two, k3.vx), k4.vx))));
    r.vy = _mm256_add_pd(
        s.vy, _mm256_mul_pd(h6, _mm256_add_pd(_mm256_add_pd(k1.vy, _mm256_mul_pd(two, k2.vy)),
                                              _mm256_add_pd(_mm256_mul_pd(two, k3.vy), k4.vy))));
    __m256d nrm = _mm256_sqrt_pd(
        _mm256_add_pd(_mm256_mul_pd(r.vx, r.vx), _mm256_mul_pd(r.vy, r.vy)));
    r.vx = _mm256_div_pd(r.vx, nrm);
    r.vy = _mm256_div_pd(r.vy, nrm);
    return r;
}

inline __m256d blend(__m256d keep_old, __m256d old_v, __m256d new_v) {
    return _mm256_blendv_pd(new_v, old_v, keep_old);
}

void trace_entry_v(double R, double kappa, double L, double step, int max_steps,
                   const double* px, const double* py, const double* pth, int n,
                   double* out_s, double* out_a) {
    const double R2 = R * R;
    __m256d vR2 = _mm256_set1_pd(R2);
    __m256d kap = _mm256_set1_pd(kappa);
    __m256d vh = _mm256_set1_pd(-step);  // backward
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        Ray4 s;
        double cth[4], sth[4];
        for (int l = 0; l < 4; ++l) {
            cth[l] = std::cos(pth[i + l]);
            sth[l] = std::sin(pth[i + l]);
        }
        s.x = _mm256_loadu_pd(px + i);
        s.y = _mm256_loadu_pd(py + i);
        s.vx = _mm256_loadu_pd(cth);
        s.vy = _mm256_loadu_pd(sth);

        __m256d r2 = _mm256_add_pd(_mm256_mul_pd(s.x, s.x), _mm256_mul_pd(s.y, s.y));
        __m256d started_out =
            _mm256_cmp_pd(r2, _mm256_set1_pd(R2 * (1.0 + 1e-9)), _CMP_GT_OQ);
        __m256d crossed = _mm256_setzero_pd();
        Ray4 prev = s;
        for (int it = 0; it < max_steps; ++it) {
            __m256d frozen = _mm256_or_pd(crossed, started_out);
            if (_mm256_movemask_pd(frozen) == 0xF) break;
            Ray4 nxt = rk4_step4(kap, s, vh);
            prev.x = blend(frozen, prev.x, s.x);
            prev.y = blend(frozen, prev.y, s.y);
            prev.vx = blend(frozen, prev.vx, s.vx);
            prev.vy = blend(frozen, prev.vy, s.vy);
            s.x = blend(frozen, s.x, nxt.x);
            s.y = blend(frozen, s.y, nxt.y);
            s.vx = blend(frozen, s.vx, nxt.vx);
            s.vy = blend(frozen, s.vy, nxt.vy);
            r2 = _mm256_add_pd(_mm256_mul_pd(s.x, s.x), _mm256_mul_pd(s.y, s.y));
            __m256d now = _mm256_cmp_pd(r2, vR2, _CMP_GE_OQ);
            crossed = _mm256_or_pd(crossed, _mm256_andnot_pd(started_out, now));
        }
        // bisection inside the crossing step (fixed 40 iterations, as in the reference)
        __m256d lo = _mm256_setzero_pd(), hi = _mm256_set1_pd(step);
        for (int it = 0; it < 40; ++it) {
            __m256d mid = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_add_pd(lo, hi));
            Ray4 m = rk4_step4(kap, prev, _mm256_sub_pd(_mm256_setzero_pd(), mid));
            __m256d g = _mm256_sub_pd(
                _mm256_add_pd(_mm256_mul_pd(m.x, m.x), _mm256_mul_pd(m.y, m.y)), vR2);
            __m256d out = _mm256_cmp_pd(g, _mm256_setzero_pd(), _CMP_GE_OQ);
            hi = _mm256_blendv_pd(hi, mid, out);
            lo = _mm256_blendv_pd(mid, lo, out);
        }
        Ray4 fin = rk4_step4(kap, prev, _mm256_sub_pd(_mm256_setzero_pd(), hi));
        __m256d phi = _ZGVdN4vv_atan2(fin.y, fin.x);
        __m256d thv = _ZGVdN4vv_atan2(fin.vy, fin.vx);
        double phis[4], ths[4], ok[4];
        _mm256_storeu_pd(phis, phi);
        _mm256_storeu_pd(ths, thv);
        _mm256_storeu_pd(ok, _mm256_andnot_pd(started_out, crossed));
        Disk d(R, kappa);
        for (int l = 0; l < 4; ++l) {
            if (ok[l] != 0.0) {
                out_s[i + l] = d.wrap_s(phis[l] * L / (2.0 * kPi));
                out_a[i + l] = wrap_fiber(ths[l] - phis[l] - kPi);
            } else {
                out_s[i + l] = std::nan("");
                out_a[i + l] = std::nan("");
            }
        }
    }
    if (i < n) {
        Disk d(R, kappa);
        for (; i < n; ++i) {
            TraceResult r = trace_to_entry(d, cplx(px[i], py[i]), pth[i]);
            out_s[i] = r.ok ? r.s : std::nan("");
            out_a[i] = r.ok ? r.a : std::nan("");
        }
    }
}

const Dispatch avx2_table_ = {
    "avx2",  exp_batch_v,   sin_batch_v,    sum_v,         dot_v,
    sumsq_v, gauss_accum_v, packet_accum_v, trace_entry_v,
};

}  // namespace

const Dispatch& avx2_table() { return avx2_table_; }

}  // namespace ccd::kernels
