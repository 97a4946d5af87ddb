#include "ccd/phantom.hpp"

#include <cmath>
#include <stdexcept>

#include "ccd/kernels.hpp"

namespace ccd {

Phantom Phantom::gaussians(std::vector<GaussianBlob> blobs) {
    Phantom p;
    p.kind_ = GaussianSum;
    p.blobs_ = std::move(blobs);
    return p;
}

Phantom Phantom::packets(std::vector<WavePacket> packets) {
    Phantom p;
    p.kind_ = CoherentSum;
    p.packets_ = std::move(packets);
    return p;
}

Phantom Phantom::from_grid(Grid2 g) {
    Phantom p;
    p.kind_ = GridSample;
    p.grid_ = std::move(g);
    return p;
}

double Phantom::eval(cplx z) const {
    double v = 0.0;
    switch (kind_) {
        case GaussianSum:
            for (const auto& b : blobs_) {
                double q = std::norm(z - b.center) / (2.0 * b.sigma * b.sigma);
                v += b.weight * std::exp(-q);
            }
            break;
        case CoherentSum:
            for (const auto& p : packets_) {
                double ph = (z.real() * p.xi0x + z.imag() * p.xi0y) / p.h;
                v += std::sin(ph) * std::exp(-std::norm(z - p.x0) / (2.0 * p.h));
            }
            break;
        case GridSample:
            v = lanczos3(grid_, z.real(), z.imag());
            break;
    }
    return v;
}

void Phantom::eval_batch(const double* xs, const double* ys, size_t n, double* out) const {
    for (size_t i = 0; i < n; ++i) out[i] = 0.0;
    const auto& K = kernels::active();
    switch (kind_) {
        case GaussianSum:
            for (const auto& b : blobs_)
                K.gauss_accum(xs, ys, n, b.center.real(), b.center.imag(),
                              1.0 / (2.0 * b.sigma * b.sigma), b.weight, out);
            break;
        case CoherentSum:
            for (const auto& p : packets_)
                K.packet_accum(xs, ys, n, p.x0.real(), p.x0.imag(), 1.0 / (2.0 * p.h),
                               p.xi0x / p.h, p.xi0y / p.h, out);
            break;
        case GridSample:
            for (size_t i = 0; i < n; ++i) out[i] = lanczos3(grid_, xs[i], ys[i]);
            break;
    }
}

double Phantom::band_limit() const {
    switch (kind_) {
        case GaussianSum: {
            double smin = 0.0;
            for (const auto& b : blobs_) smin = smin == 0.0 ? b.sigma : std::min(smin, b.sigma);
            if (smin <= 0.0) throw std::domain_error("gaussian phantom needs sigma > 0");
            return 3.0 / smin;
        }
        case CoherentSum: {
            double B = 0.0;
            for (const auto& p : packets_) {
                double carrier = std::hypot(p.xi0x, p.xi0y) / p.h;
                B = std::max(B, carrier + 3.0 / std::sqrt(p.h));
            }
            return B;
        }
        case GridSample:
            return kPi / grid_.ax1.step;
    }
    return 0.0;
}

Grid2 Phantom::rasterize(int n, double R, double kappa) const {
    Grid2 g = make_image_grid(n, R, kappa);
    std::vector<double> xs(n), ys(n), row(n);
    for (int j = 0; j < n; ++j) ys[j] = g.ax2.node(j);
    for (int i = 0; i < n; ++i) {
        double x = g.ax1.node(i);
        xs.assign(n, x);
        eval_batch(xs.data(), ys.data(), n, row.data());
        for (int j = 0; j < n; ++j) {
            double y = ys[j];
            g.at(i, j) = (x * x + y * y <= R * R) ? row[j] : 0.0;
        }
    }
    return g;
}

WavePacket conormal_packet(const Disk& d, FanBeamPoint q, double u, double h) {
    double tau = exit_time(d, q.alpha);
    InteriorPoint p = geodesic_point(d, q, u * tau);
    double th = p.theta + kPi / 2.0;  // oscillation conormal to the geodesic
    return {p.z, std::cos(th), std::sin(th), h};
}

Phantom phantom_f0() {
    const double s = 0.03;
    return Phantom::gaussians({
        {{0.0, 0.0}, 1.0, s},
        {{0.43, 0.21}, 1.0, s},
        {{-0.31, 0.38}, 1.0, s},
        {{-0.25, -0.44}, 1.0, s},
        {{0.38, -0.35}, 1.0, s},
        {{0.10, 0.55}, 1.0, s},
    });
}

Phantom phantom_f1(const Disk& d) {
    const double h = 0.01;
    double L = d.L();
    std::vector<WavePacket> ps = {
        conormal_packet(d, {5.0 * L / 6.0, 0.0}, 0.3, h),
        conormal_packet(d, {L / 2.0, kPi / 4.0}, 0.3, h),
        conormal_packet(d, {L / 2.0, kPi / 4.0}, 0.6, h),
    };
    return Phantom::packets(ps);
}

Phantom phantom_f4(const Disk& d) {
    return Phantom::packets({conormal_packet(d, {d.L() / 2.0, 0.0}, 0.85, 0.01)});
}

}  // namespace ccd
