#include "ccd/inversion.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ccd/fft.hpp"
#include "ccd/forward.hpp"
#include "ccd/kernels.hpp"
#include "ccd/log.hpp"
#include "ccd/threads.hpp"

namespace ccd {

namespace {

std::atomic<size_t> g_trace_failures{0};

bool is_fanbeam_axis(const Grid2& g) {
    return g.chart == Chart::FanBeam && std::abs(g.ax2.origin + kPi / 2.0) < 1e-12 &&
           std::abs(g.ax2.span() - kPi) < 1e-9;
}

}  // namespace

Grid2 extend_odd(const Disk& d, const Grid2& sino_plus) {
    if (!is_fanbeam_axis(sino_plus))
        throw std::invalid_argument("extend_odd: expects fan-beam data on [-pi/2, pi/2)");
    int n1 = sino_plus.ax1.n, n2 = sino_plus.ax2.n;
    Axis a1 = sino_plus.ax1;
    Axis a2{-kPi / 2.0, sino_plus.ax2.step, 2 * n2, true};
    Grid2 full(Chart::Boundary, a1, a2, d.kappa(), d.R());
    for (int i = 0; i < n1; ++i) {
        double s = a1.node(i);
        for (int j = 0; j < 2 * n2; ++j) {
            double a = a2.node(j);
            if (j < n2) {
                full.at(i, j) = sino_plus.at(i, j);
            } else {
                BoundaryDir pre = scattering(d, {s, a});  // inward preimage
                full.at(i, j) = -lanczos3(sino_plus, pre.s, pre.a);
            }
        }
    }
    return full;
}

Grid2 fiber_hilbert_odd(const Grid2& full) {
    int n1 = full.ax1.n, na = full.ax2.n;
    if (na % 2 != 0) throw std::invalid_argument("fiber_hilbert_odd: even fiber count required");
    std::vector<std::complex<double>> buf(full.v.begin(), full.v.end());
    fft::fft_axis(buf, n1, na, 1, false);
    for (int i = 0; i < n1; ++i) {
        for (int b = 0; b < na; ++b) {
            int k = b <= na / 2 ? b : b - na;
            std::complex<double> m(0.0, 0.0);
            if (k % 2 != 0 && b != na / 2) m = std::complex<double>(0.0, k > 0 ? -1.0 : 1.0);
            buf[static_cast<size_t>(i) * na + b] *= m;
        }
    }
    fft::fft_axis(buf, n1, na, 1, true);
    Grid2 out = full;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = buf[i].real();
    return out;
}

Grid2 apply_aplus_star(const Disk& d, const Grid2& full) {
    if (full.chart != Chart::Boundary || !full.ax2.periodic)
        throw std::invalid_argument("apply_aplus_star: expects a full-fiber grid");
    Grid2 out = full;
    for (int i = 0; i < full.ax1.n; ++i) {
        double s = full.ax1.node(i);
        for (int j = 0; j < full.ax2.n; ++j) {
            BoundaryDir im = scattering(d, {s, full.ax2.node(j)});
            out.at(i, j) = full.at(i, j) + lanczos3(full, im.s, im.a);
        }
    }
    return out;
}

namespace {

// S-even extension of an inward-half field onto the full fiber grid.
Grid2 even_extend(const Disk& d, const Grid2& w_plus) {
    if (!is_fanbeam_axis(w_plus))
        throw std::invalid_argument("backproject_perp: expects fan-beam or boundary grid");
    int n2 = w_plus.ax2.n;
    Axis a2{-kPi / 2.0, w_plus.ax2.step, 2 * n2, true};
    Grid2 full(Chart::Boundary, w_plus.ax1, a2, d.kappa(), d.R());
    for (int i = 0; i < w_plus.ax1.n; ++i) {
        double s = w_plus.ax1.node(i);
        for (int j = 0; j < 2 * n2; ++j) {
            if (j < n2) {
                full.at(i, j) = w_plus.at(i, j);
            } else {
                BoundaryDir pre = scattering(d, {s, a2.node(j)});
                full.at(i, j) = lanczos3(w_plus, pre.s, pre.a);
            }
        }
    }
    return full;
}

}  // namespace

size_t backprojection_trace_failures() { return g_trace_failures.load(); }

Grid2 backproject_perp(const Disk& d, const Grid2& w_in, const ReconstructionConfig& cfg) {
    if (cfg.n_theta % 2 != 0) throw std::invalid_argument("backproject_perp: even n_theta");
    const Grid2 w = (w_in.chart == Chart::Boundary) ? w_in : even_extend(d, w_in);
    g_trace_failures.store(0);

    const int n = cfg.n;
    Grid2 img = make_image_grid(n, d.R(), d.kappa());
    const double hx = img.ax1.step;
    const double dth = 2.0 * kPi / cfg.n_theta;
    const double R = d.R(), kap = d.kappa();

    // Traceable pixels: the disk plus a thin outside ring, radially clamped to
    // the boundary so psi extends continuously across the rim. The entry map
    // degenerates like 1/mu at the boundary, so the outermost pixel layer
    // cannot be resolved by grid-step differences: pixels within 1.5 h of the
    // rim stay zero (counted, reconstruction-circle convention).
    const double ring = R + 2.5 * hx;
    const double fov = R - 1.5 * hx;
    size_t rim_masked = 0;
    std::vector<int> pix_i, pix_j;
    std::vector<double> px, py;
    std::vector<char> inside;
    pix_i.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        double x = img.ax1.node(i);
        for (int j = 0; j < n; ++j) {
            double y = img.ax2.node(j);
            double r = std::hypot(x, y);
            if (r > ring) continue;
            double clamp = r >= R ? R * (1.0 - 1e-12) / r : 1.0;
            pix_i.push_back(i);
            pix_j.push_back(j);
            px.push_back(x * clamp);
            py.push_back(y * clamp);
            inside.push_back(r < fov ? 1 : 0);
            if (r >= fov && r < R) ++rim_masked;
        }
    }
    const int npix = static_cast<int>(px.size());
    if (rim_masked)
        log_warning("backproject_perp: " + std::to_string(rim_masked) +
                    " rim pixels left zero (within 1.5 px of the boundary)");

    // psi slab at a single fiber angle; traced in parallel pixel chunks
    auto make_slab = [&](int k, std::vector<double>& slab) {
        double th = k * dth;
        slab.assign(static_cast<size_t>(n) * n, 0.0);
        std::atomic<size_t> fails{0};
        parallel_for(npix, [&](int b, int e) {
            int cnt = e - b;
            std::vector<double> ths(cnt, th), es(cnt), ea(cnt);
            trace_to_entry_batch(d, px.data() + b, py.data() + b, ths.data(), cnt, es.data(),
                                 ea.data());
            size_t f = 0;
            for (int m = 0; m < cnt; ++m) {
                double v = 0.0;
                if (std::isfinite(es[m]))
                    v = lanczos3(w, es[m], ea[m]);
                else
                    ++f;
                slab[static_cast<size_t>(pix_i[b + m]) * n + pix_j[b + m]] = v;
            }
            if (f) fails.fetch_add(f);
        });
        g_trace_failures.fetch_add(fails.load());
    };

    // rolling three-slab window around theta_k, fiber-periodic
    std::vector<double> acc(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> s_prev, s_cur, s_next, s_first;
    make_slab(cfg.n_theta - 1, s_prev);
    make_slab(0, s_cur);
    s_first = s_cur;
    for (int k = 0; k < cfg.n_theta; ++k) {
        if (k + 1 < cfg.n_theta)
            make_slab(k + 1, s_next);
        else
            s_next = s_first;
        double th = k * dth;
        double ct = std::cos(th), st = std::sin(th);
        const auto& s0 = s_cur;
        parallel_for(npix, [&](int b, int e) {
            for (int m = b; m < e; ++m) {
                if (!inside[m]) continue;
                int i = pix_i[m], j = pix_j[m];
                size_t idx = static_cast<size_t>(i) * n + j;
                double c = 1.0 + kap * (px[m] * px[m] + py[m] * py[m]);
                double dxv = ((i + 1 < n ? s0[idx + n] : 0.0) - (i > 0 ? s0[idx - n] : 0.0)) /
                             (2.0 * hx);
                double dyv = ((j + 1 < n ? s0[idx + 1] : 0.0) - (j > 0 ? s0[idx - 1] : 0.0)) /
                             (2.0 * hx);
                double dtv = (s_next[idx] - s_prev[idx]) / (2.0 * dth);
                acc[idx] += c * st * dxv - c * ct * dyv -
                            2.0 * kap * (px[m] * ct + py[m] * st) * dtv;
            }
        });
        std::swap(s_prev, s_cur);
        std::swap(s_cur, s_next);
    }
    for (int m = 0; m < npix; ++m) {
        if (!inside[m]) continue;
        size_t idx = static_cast<size_t>(pix_i[m]) * n + pix_j[m];
        img.v[idx] = acc[idx] * dth;
    }
    if (g_trace_failures.load())
        log_warning("backproject_perp: " + std::to_string(g_trace_failures.load()) +
                    " rim traces failed (value 0 used)");
    return img;
}

Grid2 invert(const Disk& d, const Grid2& sino, const ReconstructionConfig& cfg) {
    Grid2 up = cfg.upsample > 1 ? upsample_lanczos(sino, cfg.upsample) : sino;
    Grid2 odd = extend_odd(d, up);
    Grid2 hil = fiber_hilbert_odd(odd);
    Grid2 sym = apply_aplus_star(d, hil);
    Grid2 img = backproject_perp(d, sym, cfg);
    double scale = kInversionSign / (8.0 * kPi);
    for (auto& v : img.v) v *= scale;
    return img;
}

}  // namespace ccd
