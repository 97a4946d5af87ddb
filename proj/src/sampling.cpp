#include "ccd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ccd/fft.hpp"
#include "ccd/forward.hpp"
#include "ccd/log.hpp"

namespace ccd {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

double kernel_value(InterpKernel k, double x) {
    switch (k) {
        case InterpKernel::Sinc: return sinc(x);
        case InterpKernel::Lanczos3: return std::abs(x) < 3.0 ? sinc(x) * sinc(x / 3.0) : 0.0;
        case InterpKernel::GaussSinc: {
            const double sw = 4.0;  // gaussian-tapered sinc, Schwartz-style window
            return sinc(x) * std::exp(-x * x / (2.0 * sw * sw));
        }
    }
    return 0.0;
}

}  // namespace

double shannon_interpolate(const double* samples, int n, double origin, double step,
                           InterpKernel kernel, double x) {
    double u = (x - origin) / step;
    double acc = 0.0;
    if (kernel == InterpKernel::Sinc) {
        for (int k = 0; k < n; ++k) acc += samples[k] * sinc(u - k);
        return acc;
    }
    int lo = std::max(0, static_cast<int>(std::floor(u)) - 16);
    int hi = std::min(n - 1, static_cast<int>(std::floor(u)) + 17);
    for (int k = lo; k <= hi; ++k) acc += samples[k] * kernel_value(kernel, u - k);
    return acc;
}

double round_3sig(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    double e = std::floor(std::log10(std::abs(x)));
    double s = std::pow(10.0, e - 2.0);
    return std::round(x / s) * s;
}

SamplingPlan make_plan(const Disk& d, Chart chart, const Sigma& sigma, double B, double C1,
                       double C2) {
    if (!(B > 0.0)) throw std::invalid_argument("make_plan: B > 0 required");
    if (!(C1 > 0.0) || !(C2 > 0.0))
        throw std::invalid_argument("make_plan: oversampling factors must be positive");
    auto bn = b_numbers(d, chart, sigma);
    SamplingPlan p{};
    p.chart = chart;
    p.B = B;
    p.b1 = round_3sig(bn.first);
    p.b2 = round_3sig(bn.second);
    p.C1 = C1;
    p.C2 = C2;
    double L = d.L();
    p.n1 = static_cast<int>(std::ceil(C1 * B * L * p.b1 / kPi - 1e-9));
    if (chart == Chart::FanBeam) {
        p.n2 = static_cast<int>(std::ceil(C2 * B * p.b2 - 1e-9));
        p.h2 = kPi / p.n2;
    } else {
        p.n2 = static_cast<int>(std::ceil(C2 * B * L * p.b2 / (2.0 * kPi) - 1e-9));
        p.h2 = (L / 2.0) / p.n2;
    }
    p.h1 = L / p.n1;
    return p;
}

FoldedCovector fold_covector(const DataCovector& dc, const SamplingPlan& plan) {
    if (!(plan.h1 > 0.0) || !(plan.h2 > 0.0))
        throw std::invalid_argument("fold_covector: plan steps must be positive");
    FoldedCovector out{dc, 0, 0};
    auto fold1 = [](double eta, double nyq, int& k) {
        double per = 2.0 * nyq;
        k = static_cast<int>(std::floor((nyq - eta) / per));
        return eta + k * per;  // lands in (-nyq, nyq]
    };
    out.dc.c1 = fold1(dc.c1, plan.nyq1(), out.k1);
    out.dc.c2 = fold1(dc.c2, plan.nyq2(), out.k2);
    return out;
}

FiberBackprojection backproject_data_covector(const Disk& d, FanBeamPoint q, Chart chart,
                                              double c1, double c2) {
    FiberBackprojection r{};
    double tau = exit_time(d, q.alpha);
    double mu = std::cos(q.alpha);
    auto interior_covector = [&](double t, double lambda) {
        InteriorPoint p = geodesic_point(d, q, t);
        double c = d.c(p.z);
        r.interior = {p.z, lambda * (-std::sin(p.theta)) / c, lambda * std::cos(p.theta) / c};
    };
    if (chart == Chart::FanBeam) {
        if (c2 == 0.0) {
            if (c1 == 0.0) {
                r.in_kernel = true;
                return r;
            }
            r.in_kernel = false;
            r.u = 0.0;
            r.lambda = -c1 / mu;
            interior_covector(0.0, r.lambda);
            return r;
        }
        double ratio = c1 / c2;
        Jacobi jt = jacobi(d, tau);
        if (ratio > d.II() - mu * jt.a / jt.b) {
            r.in_kernel = true;
            return r;
        }
        double lo = tau * 1e-15, hi = tau;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            Jacobi j = jacobi(d, mid);
            if (d.II() - mu * j.a / j.b < ratio)
                lo = mid;
            else
                hi = mid;
        }
        double t = 0.5 * (lo + hi);
        r.in_kernel = false;
        r.u = t / tau;
        r.lambda = c2 / jacobi(d, t).b;
        interior_covector(t, r.lambda);
        return r;
    }
    // parallel chart: ratio b(t - tau/2) a(tau/2) / (a(t - tau/2) b(tau/2)) in [-1, 1]
    Jacobi half = jacobi(d, tau / 2.0);
    if (c2 == 0.0 || std::abs(c1 / c2) > 1.0) {
        r.in_kernel = true;
        return r;
    }
    double ratio = c1 / c2;
    auto rpar = [&](double t) {
        Jacobi j = jacobi(d, t - tau / 2.0);
        return j.b * half.a / (j.a * half.b);
    };
    double lo = 0.0, hi = tau;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (rpar(mid) < ratio)
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);
    Jacobi j = jacobi(d, t - tau / 2.0);
    r.in_kernel = false;
    r.u = t / tau;
    r.lambda = c2 * half.a / (mu * j.a);
    interior_covector(t, r.lambda);
    return r;
}

std::vector<AliasPrediction> predict_artifacts(const Disk& d, const WavePacket& packet,
                                               const SamplingPlan& plan) {
    double carrier = std::hypot(packet.xi0x, packet.xi0y) / packet.h;
    SpaceCovector omega{packet.x0, packet.xi0x / packet.h, packet.xi0y / packet.h};
    CanonicalGraphs g = canonical_graph(d, omega);
    std::vector<AliasPrediction> out;
    for (int side = 0; side < 2; ++side) {
        const GraphBranch& br = side == 0 ? g.plus : g.minus;
        AliasPrediction ap{};
        ap.branch = side == 0 ? +1 : -1;
        ap.base = br.q;
        DataCovector dc = branch_covector(d, br, plan.chart);
        ap.folded = fold_covector(dc, plan);
        if (ap.folded.k1 == 0 && ap.folded.k2 == 0) {
            ap.verdict = AliasPrediction::Unaliased;
        } else {
            FiberBackprojection bp =
                backproject_data_covector(d, br.q, plan.chart, ap.folded.dc.c1, ap.folded.dc.c2);
            if (bp.in_kernel) {
                ap.verdict = AliasPrediction::Kernel;
            } else {
                ap.verdict = AliasPrediction::Artifact;
                ap.z = bp.interior.z;
                ap.direction = std::atan2(bp.interior.xi2, bp.interior.xi1);
                ap.freq = std::hypot(bp.interior.xi1, bp.interior.xi2);
                ap.u = bp.u;
                ap.lambda = bp.lambda;
                ap.higher_frequency = ap.freq > carrier;
            }
        }
        out.push_back(ap);
    }
    return out;
}

WindowedFT windowed_ft(const Grid2& sino, double c1, double c2, double sigma_w, int pad_factor) {
    if (!(sigma_w > 2.0 * std::max(sino.ax1.step, sino.ax2.step)))
        throw std::invalid_argument("windowed_ft: window narrower than two grid steps");
    if (pad_factor < 4) pad_factor = 4;
    int r1 = static_cast<int>(std::ceil(4.0 * sigma_w / sino.ax1.step));
    int r2 = static_cast<int>(std::ceil(4.0 * sigma_w / sino.ax2.step));
    int m1 = 2 * r1 + 1, m2 = 2 * r2 + 1;
    int i0 = static_cast<int>(std::lround((c1 - sino.ax1.origin) / sino.ax1.step));
    int j0 = static_cast<int>(std::lround((c2 - sino.ax2.origin) / sino.ax2.step));

    WindowedFT out;
    // clipped if the 3 sigma box leaves a non-periodic axis
    auto clipped_axis = [&](const Axis& ax, double c) {
        return !ax.periodic &&
               (c - 3.0 * sigma_w < ax.origin || c + 3.0 * sigma_w > ax.origin + ax.span());
    };
    out.clipped = clipped_axis(sino.ax1, c1) || clipped_axis(sino.ax2, c2);
    if (out.clipped) log_warning("windowed_ft: window clipped by the chart boundary");

    int N1 = pad_factor * m1, N2 = pad_factor * m2;
    std::vector<std::complex<double>> buf(static_cast<size_t>(N1) * N2, 0.0);
    for (int a = 0; a < m1; ++a) {
        int i = i0 - r1 + a;
        double u1 = sino.ax1.node(i);  // node() extends linearly; fold index instead
        int iw = i;
        if (sino.ax1.periodic) {
            iw %= sino.ax1.n;
            if (iw < 0) iw += sino.ax1.n;
        }
        for (int b = 0; b < m2; ++b) {
            int j = j0 - r2 + b;
            int jw = j;
            if (sino.ax2.periodic) {
                jw %= sino.ax2.n;
                if (jw < 0) jw += sino.ax2.n;
            }
            double val = 0.0;
            if (iw >= 0 && iw < sino.ax1.n && jw >= 0 && jw < sino.ax2.n) val = sino.at(iw, jw);
            double du1 = u1 - c1;
            double du2 = sino.ax2.origin + j * sino.ax2.step - c2;
            double w = std::exp(-(du1 * du1 + du2 * du2) / (2.0 * sigma_w * sigma_w));
            buf[static_cast<size_t>(a) * N2 + b] = val * w;
        }
    }
    fft::fft2(buf, N1, N2, false);

    // shifted magnitude with axes in continuous units
    double df1 = 2.0 * kPi / (N1 * sino.ax1.step);
    double df2 = 2.0 * kPi / (N2 * sino.ax2.step);
    Axis f1{-df1 * (N1 / 2), df1, N1, false};
    Axis f2{-df2 * (N2 / 2), df2, N2, false};
    out.spectrum = Grid2(sino.chart, f1, f2, sino.kappa, sino.R);
    double amp = sino.ax1.step * sino.ax2.step;  // Riemann scaling of the continuous FT
    for (int a = 0; a < N1; ++a) {
        int ka = (a + N1 / 2) % N1;  // shifted index -> buffer index
        for (int b = 0; b < N2; ++b) {
            int kb = (b + N2 / 2) % N2;
            out.spectrum.at(a, b) = std::abs(buf[static_cast<size_t>(ka) * N2 + kb]) * amp;
        }
    }

    // local maxima on the positive half, quadratic sub-bin refinement
    const Grid2& S = out.spectrum;
    std::vector<SpectralPeak> found;
    for (int a = 1; a + 1 < N1; ++a) {
        for (int b = 1; b + 1 < N2; ++b) {
            double fa = S.ax1.node(a), fb = S.ax2.node(b);
            if (fb < 0.0 || (fb == 0.0 && fa <= 0.0)) continue;
            double m = S.at(a, b);
            if (m <= S.at(a - 1, b) || m < S.at(a + 1, b) || m <= S.at(a, b - 1) ||
                m < S.at(a, b + 1))
                continue;
            auto refine = [](double l, double c, double r) {
                double den = l - 2 * c + r;
                return den < 0.0 ? 0.5 * (l - r) / den : 0.0;
            };
            double d1 = refine(S.at(a - 1, b), m, S.at(a + 1, b));
            double d2 = refine(S.at(a, b - 1), m, S.at(a, b + 1));
            found.push_back({fa + d1 * df1, fb + d2 * df2, m});
        }
    }
    std::sort(found.begin(), found.end(),
              [](const SpectralPeak& x, const SpectralPeak& y) { return x.mag > y.mag; });
    if (found.size() > 8) found.resize(8);
    out.peaks = std::move(found);
    return out;
}

namespace {

using Poly = std::vector<std::pair<double, double>>;

double poly_area(const Poly& p) {
    double a = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        auto [x1, y1] = p[i];
        auto [x2, y2] = p[(i + 1) % p.size()];
        a += x1 * y2 - x2 * y1;
    }
    return 0.5 * std::abs(a);
}

// clip a convex polygon against the half-plane left of (a -> b)
Poly clip_halfplane(const Poly& poly, std::pair<double, double> a, std::pair<double, double> b) {
    Poly out;
    auto side = [&](const std::pair<double, double>& p) {
        return (b.first - a.first) * (p.second - a.second) -
               (b.second - a.second) * (p.first - a.first);
    };
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        auto cur = poly[i];
        auto nxt = poly[(i + 1) % n];
        double sc = side(cur), sn = side(nxt);
        if (sc >= 0) out.push_back(cur);
        if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
            double t = sc / (sc - sn);
            out.push_back({cur.first + t * (nxt.first - cur.first),
                           cur.second + t * (nxt.second - cur.second)});
        }
    }
    return out;
}

double intersection_area(const Poly& p, const Poly& q) {
    Poly cur = p;
    size_t n = q.size();
    for (size_t i = 0; i < n && !cur.empty(); ++i)
        cur = clip_halfplane(cur, q[i], q[(i + 1) % n]);
    return cur.size() >= 3 ? poly_area(cur) : 0.0;
}

Poly ensure_ccw(Poly p) {
    double a = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        auto [x1, y1] = p[i];
        auto [x2, y2] = p[(i + 1) % p.size()];
        a += x1 * y2 - x2 * y1;
    }
    if (a < 0) std::reverse(p.begin(), p.end());
    return p;
}

}  // namespace

bool tiling_check(const TilingLattice& lat, double area_tol) {
    double det = lat.W[0] * lat.W[3] - lat.W[1] * lat.W[2];
    if (std::abs(det) < 1e-14) throw std::invalid_argument("tiling_check: degenerate W");
    if (lat.cell.size() < 3) throw std::invalid_argument("tiling_check: cell needs >= 3 vertices");
    // shift lattice 2 pi (W^T)^{-1} k: columns of 2 pi (W^T)^{-1}
    double i00 = lat.W[3] / det, i01 = -lat.W[2] / det, i10 = -lat.W[1] / det, i11 = lat.W[0] / det;
    Poly cell = ensure_ccw(lat.cell);
    double area = poly_area(cell);
    for (int k1 = -1; k1 <= 1; ++k1) {
        for (int k2 = -1; k2 <= 1; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            double sx = 2.0 * kPi * (i00 * k1 + i01 * k2);
            double sy = 2.0 * kPi * (i10 * k1 + i11 * k2);
            Poly shifted = cell;
            for (auto& v : shifted) {
                v.first += sx;
                v.second += sy;
            }
            if (intersection_area(cell, shifted) > area_tol * area) return false;
        }
    }
    return true;
}

Grid2 upsample_box_lanczos(const Grid2& sino, int factor) { return upsample_lanczos(sino, factor); }

std::vector<std::pair<double, double>> spectral_parallelogram(double B, double b1, double b2) {
    return {{-B * b1, -B * b2}, {B * b1, 0.0}, {B * b1, B * b2}, {-B * b1, 0.0}};
}

Grid2 upsample_parallelogram(const Grid2& sino, int factor,
                             const std::vector<std::pair<double, double>>& cell) {
    if (factor < 1) throw std::invalid_argument("upsample_parallelogram: factor >= 1");
    int n1 = sino.ax1.n, n2 = sino.ax2.n;
    std::vector<std::complex<double>> hat(static_cast<size_t>(n1) * n2);
    for (size_t i = 0; i < hat.size(); ++i) hat[i] = sino.v[i];
    fft::fft2(hat, n1, n2, false);

    Poly poly = ensure_ccw(cell);
    auto inside = [&](double x, double y) {
        size_t n = poly.size();
        double scale = 0.0;
        for (auto& v : poly) scale = std::max({scale, std::abs(v.first), std::abs(v.second)});
        double eps = 1e-9 * scale;
        for (size_t i = 0; i < n; ++i) {
            auto a = poly[i], b = poly[(i + 1) % n];
            double cr = (b.first - a.first) * (y - a.second) - (b.second - a.second) * (x - a.first);
            if (cr < -eps) return false;
        }
        return true;
    };

    int N1 = factor * n1, N2 = factor * n2;
    std::vector<std::complex<double>> big(static_cast<size_t>(N1) * N2, 0.0);
    double df1 = 2.0 * kPi / (n1 * sino.ax1.step);
    double df2 = 2.0 * kPi / (n2 * sino.ax2.step);
    for (int a = 0; a < N1; ++a) {
        int s1 = a <= N1 / 2 ? a : a - N1;  // signed frequency index
        double f1 = s1 * df1;
        int src1 = ((s1 % n1) + n1) % n1;
        for (int b = 0; b < N2; ++b) {
            int s2 = b <= N2 / 2 ? b : b - N2;
            double f2v = s2 * df2;
            if (!inside(f1, f2v)) continue;
            int src2 = ((s2 % n2) + n2) % n2;
            big[static_cast<size_t>(a) * N2 + b] = hat[static_cast<size_t>(src1) * n2 + src2];
        }
    }
    fft::fft2(big, N1, N2, true);

    Grid2 out = sino;
    out.ax1 = Axis{sino.ax1.origin, sino.ax1.step / factor, N1, sino.ax1.periodic};
    out.ax2 = Axis{sino.ax2.origin, sino.ax2.step / factor, N2, sino.ax2.periodic};
    out.v.assign(static_cast<size_t>(N1) * N2, 0.0);
    double scale = static_cast<double>(factor) * factor;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = big[i].real() * scale;
    return out;
}

}  // namespace ccd
