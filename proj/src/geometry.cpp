#include "ccd/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ccd/kernels.hpp"

namespace ccd {

Disk::Disk(double radius, double kappa) : R_(radius), kappa_(kappa) {
    if (!(radius > 0.0))
        throw std::invalid_argument("Disk: radius must be positive");
    if (!(std::abs(kappa * radius * radius) < 1.0))
        throw std::invalid_argument("Disk: |kappa R^2| < 1 required (simple disk)");
    L_ = 2.0 * kPi * R_ / (1.0 + kappa_ * R_ * R_);
    II_ = (1.0 - kappa_ * R_ * R_) / R_;
}

cplx Disk::boundary_point(double s) const {
    double phi = 2.0 * kPi * s / L_;
    return R_ * cplx(std::cos(phi), std::sin(phi));
}

double Disk::wrap_s(double s) const {
    double r = std::fmod(s, L_);
    return r < 0.0 ? r + L_ : r;
}

double wrap_fiber(double a) {
    double r = std::fmod(a + kPi / 2.0, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r - kPi / 2.0;
}

Jacobi jacobi(const Disk& d, double t) {
    double k = d.kappa();
    if (k == 0.0) return {1.0, t, 0.0, 1.0};
    if (k > 0.0) {
        double r = std::sqrt(k);
        double c = std::cos(2.0 * r * t), s = std::sin(2.0 * r * t);
        return {c, s / (2.0 * r), -2.0 * r * s, c};
    }
    double r = std::sqrt(-k);
    double ch = std::cosh(2.0 * r * t), sh = std::sinh(2.0 * r * t);
    return {ch, sh / (2.0 * r), 2.0 * r * sh, ch};
}

std::pair<double, double> jacobi_ode(const std::function<double(double)>& K, double t,
                                     double c0, double dc0, double step) {
    if (step > 1e-3) step = 1e-3;
    double tend = t;
    double dir = tend >= 0.0 ? 1.0 : -1.0;
    int n = static_cast<int>(std::ceil(std::abs(tend) / step));
    if (n == 0) return {c0, dc0};
    double h = tend / n;
    double y = c0, v = dc0, tc = 0.0;
    (void)dir;
    for (int i = 0; i < n; ++i) {
        // y'' = -K y as a first-order system
        double k1y = v, k1v = -K(tc) * y;
        double k2y = v + 0.5 * h * k1v, k2v = -K(tc + 0.5 * h) * (y + 0.5 * h * k1y);
        double k3y = v + 0.5 * h * k2v, k3v = -K(tc + 0.5 * h) * (y + 0.5 * h * k2y);
        double k4y = v + h * k3v, k4v = -K(tc + h) * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        tc += h;
    }
    return {y, v};
}

std::pair<double, double> jacobi_ode(const Disk& d, double t, double c0, double dc0,
                                     double step) {
    double K = 4.0 * d.kappa();
    return jacobi_ode([K](double) { return K; }, t, c0, dc0, step);
}

double trig_identity_residual(const Disk& d, double t, double tp, int sign) {
    double sg = sign >= 0 ? 1.0 : -1.0;
    Jacobi j1 = jacobi(d, t), j2 = jacobi(d, tp), js = jacobi(d, t + sg * tp);
    double k = d.kappa();
    double ra = js.a - (j1.a * j2.a - sg * 4.0 * k * j1.b * j2.b);
    double rb = js.b - (j1.b * j2.a + sg * j1.a * j2.b);
    return std::max(std::abs(ra), std::abs(rb));
}

double exit_time(const Disk& d, double alpha) {
    double R = d.R(), k = d.kappa();
    double ca = std::cos(alpha);
    if (std::abs(alpha) >= kPi / 2.0 || ca <= 0.0) return 0.0;
    double arg = 2.0 * R * ca / (1.0 - k * R * R);
    if (k == 0.0) return arg;
    if (k > 0.0) {
        double r = std::sqrt(k);
        return std::atan(r * arg) / r;
    }
    double r = std::sqrt(-k);
    return std::atanh(r * arg) / r;
}

double x_of_t(const Disk& d, double t) {
    double k = d.kappa();
    if (k == 0.0) return t;
    if (k > 0.0) {
        double r = std::sqrt(k);
        return std::tan(r * t) / r;
    }
    double r = std::sqrt(-k);
    return std::tanh(r * t) / r;
}

InteriorPoint geodesic_point(const Disk& d, FanBeamPoint q, double t) {
    double R = d.R(), k = d.kappa();
    double tau = exit_time(d, q.alpha);
    double clip = 1e-12 * R;
    if (t < -clip || t > tau + clip)
        throw std::domain_error("geodesic_point: t outside [0, tau]");
    t = std::min(std::max(t, 0.0), tau);
    double x = x_of_t(d, t);
    cplx eia(std::cos(q.alpha), std::sin(q.alpha));
    double phi = 2.0 * kPi * q.s / d.L();
    cplx eiphi(std::cos(phi), std::sin(phi));
    cplx den = 1.0 + k * R * eia * x;
    cplx z = eiphi * (R - x * eia) / den;
    // velocity: gamma' = -(1+kR^2)(1+k x^2) e^{i(phi+alpha)} / den^2
    double theta = phi + q.alpha + kPi - 2.0 * std::arg(den);
    return {z, theta};
}

double frak_s(const Disk& d, double alpha) {
    double R2k = d.kappa() * d.R() * d.R();
    if (std::abs(alpha) >= kPi / 2.0) return alpha > 0 ? kPi / 2.0 : -kPi / 2.0;
    return std::atan((1.0 - R2k) / (1.0 + R2k) * std::tan(alpha));
}

double frak_s_inv(const Disk& d, double v) {
    double R2k = d.kappa() * d.R() * d.R();
    if (std::abs(v) >= kPi / 2.0) return v > 0 ? kPi / 2.0 : -kPi / 2.0;
    return std::atan((1.0 + R2k) / (1.0 - R2k) * std::tan(v));
}

double endpoint(const Disk& d, FanBeamPoint q) {
    return d.wrap_s(q.s + d.L() / (2.0 * kPi) * (kPi + 2.0 * frak_s(d, q.alpha)));
}

ParallelPoint fb_to_parallel(const Disk& d, FanBeamPoint q) {
    double p = d.L() / (2.0 * kPi) * (kPi / 2.0 + frak_s(d, q.alpha));
    return {d.wrap_s(q.s + p), p};
}

FanBeamPoint parallel_to_fb(const Disk& d, ParallelPoint q) {
    double alpha = frak_s_inv(d, 2.0 * kPi * q.p / d.L() - kPi / 2.0);
    return {d.wrap_s(q.w - q.p), alpha};
}

BoundaryDir scattering(const Disk& d, BoundaryDir q) {
    double a = wrap_fiber(q.a);
    if (std::abs(a) <= kPi / 2.0) {
        double shift = d.L() / (2.0 * kPi) * (kPi + 2.0 * frak_s(d, a));
        return {d.wrap_s(q.s + shift), wrap_fiber(kPi - a)};
    }
    double ain = kPi - a;  // inward preimage angle
    double shift = d.L() / (2.0 * kPi) * (kPi + 2.0 * frak_s(d, ain));
    return {d.wrap_s(q.s - shift), wrap_fiber(ain)};
}

FanBeamPoint antipodal_scattering(const Disk& d, FanBeamPoint q) {
    return {endpoint(d, q), -q.alpha};
}

ScatteringJacobian scattering_differential(const Disk& d, FanBeamPoint q) {
    double mu = std::cos(q.alpha);
    double muS = -mu;  // exit fiber angle is pi - alpha
    if (std::abs(muS) < 1e-12)
        throw std::domain_error("scattering_differential: tangential configuration");
    Jacobi j = jacobi(d, exit_time(d, q.alpha));
    return {mu * j.a / muS, -mu * j.da, -j.b / muS, j.db};
}

FrameFields vector_fields(const Disk& d, double x, double y, double theta) {
    double k = d.kappa();
    double c = 1.0 + k * (x * x + y * y);
    double ct = std::cos(theta), st = std::sin(theta);
    FrameFields f;
    f.X[0] = c * ct;
    f.X[1] = c * st;
    f.X[2] = 2.0 * k * (x * st - y * ct);
    f.Xperp[0] = c * st;
    f.Xperp[1] = -c * ct;
    f.Xperp[2] = -2.0 * k * (x * ct + y * st);
    f.V[0] = 0.0;
    f.V[1] = 0.0;
    f.V[2] = 1.0;
    return f;
}

namespace {

struct RayState {
    double x, y, vx, vy;  // position and unit Euclidean direction
};

inline void ray_rhs(double k, const RayState& s, RayState& out) {
    double c = 1.0 + k * (s.x * s.x + s.y * s.y);
    double om = 2.0 * k * (s.x * s.vy - s.y * s.vx);
    out.x = c * s.vx;
    out.y = c * s.vy;
    out.vx = -om * s.vy;
    out.vy = om * s.vx;
}

inline RayState rk4_step(double k, const RayState& s, double h) {
    RayState k1, k2, k3, k4, t;
    ray_rhs(k, s, k1);
    t = {s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y, s.vx + 0.5 * h * k1.vx, s.vy + 0.5 * h * k1.vy};
    ray_rhs(k, t, k2);
    t = {s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y, s.vx + 0.5 * h * k2.vx, s.vy + 0.5 * h * k2.vy};
    ray_rhs(k, t, k3);
    t = {s.x + h * k3.x, s.y + h * k3.y, s.vx + h * k3.vx, s.vy + h * k3.vy};
    ray_rhs(k, t, k4);
    RayState r;
    r.x = s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    r.y = s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    r.vx = s.vx + h / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
    r.vy = s.vy + h / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
    double n = std::sqrt(r.vx * r.vx + r.vy * r.vy);
    r.vx /= n;
    r.vy /= n;
    return r;
}

TraceResult trace_dir(const Disk& d, cplx z, double theta, double dir) {
    double R2 = d.R() * d.R();
    if (std::norm(z) > R2 * (1.0 + 1e-9)) return {0.0, 0.0, 0.0, false};
    double tau_max = exit_time(d, 0.0);
    double h = std::min(1e-2, tau_max / 64.0) * dir;
    RayState s{z.real(), z.imag(), std::cos(theta), std::sin(theta)};
    double t = 0.0;
    int max_steps = static_cast<int>(std::ceil(tau_max / std::abs(h))) + 16;
    RayState prev = s;
    bool crossed = false;
    for (int i = 0; i < max_steps; ++i) {
        prev = s;
        s = rk4_step(d.kappa(), s, h);
        t += std::abs(h);
        if (s.x * s.x + s.y * s.y >= R2) {
            crossed = true;
            break;
        }
    }
    if (!crossed) return {0.0, 0.0, 0.0, false};
    // bisection on |z(h')|^2 - R^2 within the crossing step; 40 fixed iterations
    // bracket the crossing to ~1e-14 in t (and 1e-12 in |z|^2 - R^2)
    double lo = 0.0, hi = std::abs(h);
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        RayState m = rk4_step(d.kappa(), prev, mid * dir);
        double g = m.x * m.x + m.y * m.y - R2;
        if (g >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    RayState best = rk4_step(d.kappa(), prev, hi * dir);
    double t_cross = t - std::abs(h) + hi;
    double phi = std::atan2(best.y, best.x);
    double se = d.wrap_s(phi * d.L() / (2.0 * kPi));
    double th = std::atan2(best.vy, best.vx);
    double a = wrap_fiber(th - phi - kPi);
    return {se, a, t_cross, true};
}

}  // namespace

TraceResult trace_to_entry(const Disk& d, cplx z, double theta) {
    TraceResult r = trace_dir(d, z, theta, -1.0);
    return r;
}

TraceResult trace_to_exit(const Disk& d, cplx z, double theta) {
    return trace_dir(d, z, theta, +1.0);
}

void trace_to_entry_batch(const Disk& d, const double* x, const double* y,
                          const double* theta, int n, double* out_s, double* out_a) {
    double tau_max = exit_time(d, 0.0);
    double h = std::min(1e-2, tau_max / 64.0);
    int max_steps = static_cast<int>(std::ceil(tau_max / h)) + 16;
    kernels::active().trace_entry(d.R(), d.kappa(), d.L(), h, max_steps, x, y, theta, n,
                                  out_s, out_a);
}

}  // namespace ccd
