#include "ccd/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccd/kernels.hpp"
#include "ccd/log.hpp"
#include "ccd/threads.hpp"

namespace ccd {

Grid2 make_sinogram_grid(const Disk& d, Chart chart, int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("sinogram grid needs n1, n2 >= 2");
    Axis a1{0.0, d.L() / n1, n1, true};
    Axis a2;
    if (chart == Chart::FanBeam)
        a2 = {-kPi / 2.0, kPi / n2, n2, false};
    else if (chart == Chart::Parallel)
        a2 = {0.0, d.L() / 2.0 / n2, n2, false};
    else
        throw std::invalid_argument("sinogram chart must be fan or parallel");
    return Grid2(chart, a1, a2, d.kappa(), d.R());
}

Grid2 xray_transform(const Disk& d, const Phantom& f, Chart chart, int n1, int n2, double h_t) {
    double B = f.band_limit();
    double h_req = kPi / (4.0 * B);
    if (h_t <= 0.0) {
        h_t = h_req;
    } else if (h_t > h_req) {
        log_warning("xray_transform: h_t exceeds pi/(4B) for the declared band limit");
    }
    Grid2 g = make_sinogram_grid(d, chart, n1, n2);

    parallel_for(n1, [&](int i_begin, int i_end) {
        std::vector<double> xs, ys, vals, wts;
        for (int i = i_begin; i < i_end; ++i) {
            for (int j = 0; j < n2; ++j) {
                FanBeamPoint q;
                if (chart == Chart::FanBeam)
                    q = {g.ax1.node(i), g.ax2.node(j)};
                else
                    q = parallel_to_fb(d, {g.ax1.node(i), g.ax2.node(j)});
                double tau = exit_time(d, q.alpha);
                if (tau <= 0.0) {
                    g.at(i, j) = 0.0;
                    continue;
                }
                int nt;
                if (tau < 4.0 * h_t) {
                    nt = 8;
                } else {
                    nt = static_cast<int>(std::ceil(tau / h_t));
                    nt += nt & 1;
                    nt = std::max(nt, 16);
                }
                xs.resize(nt + 1);
                ys.resize(nt + 1);
                vals.resize(nt + 1);
                wts.resize(nt + 1);
                for (int k = 0; k <= nt; ++k) {
                    cplx z = geodesic_point(d, q, tau * k / nt).z;
                    xs[k] = z.real();
                    ys[k] = z.imag();
                    wts[k] = (k == 0 || k == nt) ? 1.0 : (k & 1 ? 4.0 : 2.0);
                }
                f.eval_batch(xs.data(), ys.data(), nt + 1, vals.data());
                double step = tau / nt;
                g.at(i, j) = kernels::active().dot(vals.data(), wts.data(), nt + 1) * step / 3.0;
            }
        }
    });
    return g;
}

Grid2 resample_chart(const Disk& d, const Grid2& sino, Chart target, int n1, int n2) {
    if (sino.chart != Chart::FanBeam && sino.chart != Chart::Parallel)
        throw std::invalid_argument("resample_chart: source must be a sinogram");
    Grid2 out = make_sinogram_grid(d, target, n1, n2);
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            double u1 = out.ax1.node(i), u2 = out.ax2.node(j);
            double s1, s2;
            if (target == sino.chart) {
                s1 = u1;
                s2 = u2;
            } else if (target == Chart::Parallel) {
                FanBeamPoint q = parallel_to_fb(d, {u1, u2});
                s1 = q.s;
                s2 = q.alpha;
            } else {
                ParallelPoint q = fb_to_parallel(d, {u1, u2});
                s1 = q.w;
                s2 = q.p;
            }
            out.at(i, j) = lanczos3(sino, s1, s2);
        }
    }
    return out;
}

Grid2 upsample_lanczos(const Grid2& sino, int factor) {
    if (factor < 1) throw std::invalid_argument("upsample_lanczos: factor >= 1");
    Grid2 out = sino;
    out.ax1 = Axis{sino.ax1.origin, sino.ax1.step / factor, sino.ax1.n * factor, sino.ax1.periodic};
    out.ax2 = Axis{sino.ax2.origin, sino.ax2.step / factor, sino.ax2.n * factor, sino.ax2.periodic};
    out.v.assign(static_cast<size_t>(out.ax1.n) * out.ax2.n, 0.0);
    parallel_for(out.ax1.n, [&](int b, int e) {
        for (int i = b; i < e; ++i)
            for (int j = 0; j < out.ax2.n; ++j)
                out.at(i, j) = lanczos3(sino, out.ax1.node(i), out.ax2.node(j));
    });
    return out;
}

}  // namespace ccd
