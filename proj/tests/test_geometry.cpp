#include <doctest.h>

#include <cmath>
#include <random>

#include "ccd/geometry.hpp"

using namespace ccd;

namespace {

// Test-local geodesic integrator, independent of the library's tracer: RK4 on
// Hamilton's equations xdot = c^2 xi, xidot = -(grad c) c |xi|^2 for the
// co-metric c^2|xi|^2, with fixed step.
struct HamState {
    double x, y, xi1, xi2;
};

HamState ham_rhs(double k, const HamState& s) {
    double c = 1.0 + k * (s.x * s.x + s.y * s.y);
    double n2 = s.xi1 * s.xi1 + s.xi2 * s.xi2;
    return {c * c * s.xi1, c * c * s.xi2, -2.0 * k * s.x * c * n2, -2.0 * k * s.y * c * n2};
}

HamState ham_rk4(double k, HamState s, double t_end, double h) {
    int n = static_cast<int>(std::ceil(std::abs(t_end) / h));
    double dt = t_end / n;
    for (int i = 0; i < n; ++i) {
        HamState k1 = ham_rhs(k, s);
        HamState s2{s.x + 0.5 * dt * k1.x, s.y + 0.5 * dt * k1.y, s.xi1 + 0.5 * dt * k1.xi1,
                    s.xi2 + 0.5 * dt * k1.xi2};
        HamState k2 = ham_rhs(k, s2);
        HamState s3{s.x + 0.5 * dt * k2.x, s.y + 0.5 * dt * k2.y, s.xi1 + 0.5 * dt * k2.xi1,
                    s.xi2 + 0.5 * dt * k2.xi2};
        HamState k3 = ham_rhs(k, s3);
        HamState s4{s.x + dt * k3.x, s.y + dt * k3.y, s.xi1 + dt * k3.xi1, s.xi2 + dt * k3.xi2};
        HamState k4 = ham_rhs(k, s4);
        s.x += dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        s.y += dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
        s.xi1 += dt / 6.0 * (k1.xi1 + 2 * k2.xi1 + 2 * k3.xi1 + k4.xi1);
        s.xi2 += dt / 6.0 * (k1.xi2 + 2 * k2.xi2 + 2 * k3.xi2 + k4.xi2);
    }
    return s;
}

HamState launch(const Disk& d, FanBeamPoint q) {
    cplx p = d.boundary_point(q.s);
    double phi = 2.0 * kPi * q.s / d.L();
    double th = phi + kPi + q.alpha;
    double c = d.c(p);
    // xi = v^flat: Euclidean components v/c^2, v = c e^{i th}
    return {p.real(), p.imag(), std::cos(th) / c, std::sin(th) / c};
}

double wrap_diff(double a, double period) {
    double r = std::fmod(a, period);
    if (r > period / 2) r -= period;
    if (r < -period / 2) r += period;
    return r;
}

}  // namespace

TEST_CASE("disk constants and simplicity guard") {
    Disk d(1.0, 0.3);
    CHECK(d.L() == doctest::Approx(2.0 * kPi / 1.3).epsilon(1e-14));
    CHECK(d.II() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK_THROWS_AS(Disk(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Disk(2.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(Disk(-1.0, 0.0), std::invalid_argument);
    // degeneracy trends: II -> 0 as kR^2 -> 1, L -> inf as kR^2 -> -1
    CHECK(Disk(1.0, 0.99).II() < 0.1 * Disk(1.0, 0.0).II());
    CHECK(Disk(1.0, -0.99).L() > 10.0 * Disk(1.0, 0.0).L());
}

TEST_CASE("jacobi closed forms and initial conditions") {
    for (double k : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
        Jacobi j0 = jacobi(Disk(1.0, k), 0.0);
        CHECK(j0.a == 1.0);
        CHECK(j0.b == 0.0);
        CHECK(j0.da == 0.0);
        CHECK(j0.db == 1.0);
    }
    Jacobi jf = jacobi(Disk(1.0, 0.0), 1.7);
    CHECK(jf.a == 1.0);
    CHECK(jf.b == doctest::Approx(1.7).epsilon(1e-15));

    Disk dm(1.0, -0.3);
    double r = 2.0 * std::sqrt(0.3);
    Jacobi jm = jacobi(dm, 1.2);
    CHECK(jm.a == doctest::Approx(std::cosh(r * 1.2)).epsilon(1e-14));
    CHECK(jm.b == doctest::Approx(std::sinh(r * 1.2) / r).epsilon(1e-14));
    // against the ODE oracle
    auto [oa, oda] = jacobi_ode(dm, 1.2, 1.0, 0.0);
    auto [ob, odb] = jacobi_ode(dm, 1.2, 0.0, 1.0);
    CHECK(jm.a == doctest::Approx(oa).epsilon(1e-8));
    CHECK(jm.b == doctest::Approx(ob).epsilon(1e-8));
    CHECK(jm.da == doctest::Approx(oda).epsilon(1e-8));
    CHECK(jm.db == doctest::Approx(odb).epsilon(1e-8));
}

TEST_CASE("jacobi ODE oracle closed-form cross-checks") {
    auto [a0, unused0] = jacobi_ode(Disk(1.0, 0.0), 3.0, 1.0, 0.0);
    CHECK(a0 == doctest::Approx(1.0).epsilon(1e-12));
    auto [b1, unused1] = jacobi_ode(Disk(1.0, 0.3), 1.0, 0.0, 1.0);
    double rp = 2.0 * std::sqrt(0.3);
    CHECK(b1 == doctest::Approx(std::sin(rp) / rp).epsilon(1e-10));
    auto [a2, unused2] = jacobi_ode(Disk(1.0, -0.6), 2.0, 1.0, 0.0);
    CHECK(a2 == doctest::Approx(std::cosh(2.0 * std::sqrt(0.6) * 2.0)).epsilon(1e-8));
    // non-constant curvature profile: K(t) = t has Airy solutions; check Wronskian
    auto K = [](double t) { return t; };
    auto [ya, dya] = jacobi_ode(K, 1.5, 1.0, 0.0);
    auto [yb, dyb] = jacobi_ode(K, 1.5, 0.0, 1.0);
    CHECK(ya * dyb - yb * dya == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Wronskian over random kappa, t") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uk(-0.9, 0.9);
    for (int i = 0; i < 10000; ++i) {
        double k = uk(rng);
        Disk d(1.0, k);
        std::uniform_real_distribution<double> ut(-d.L(), d.L());
        Jacobi j = jacobi(d, ut(rng));
        // 1e-10 absolutely at O(1) magnitudes; relative once cosh^2 - sinh^2
        // cancellation dominates (|t| up to L(-0.9) ~ 63 reaches cosh ~ 1e51)
        double scale = std::max(1.0, std::abs(j.a * j.db) + std::abs(j.b * j.da));
        CHECK(std::abs(j.a * j.db - j.b * j.da - 1.0) <= 1e-10 * scale);
    }
}

TEST_CASE("generalized trig identities") {
    CHECK(trig_identity_residual(Disk(1.0, 0.0), 1.0, 2.0, +1) == 0.0);
    CHECK(trig_identity_residual(Disk(1.0, 0.3), 0.7, 0.4, -1) <= 1e-10);
    CHECK(trig_identity_residual(Disk(1.0, -0.6), 1.1, 0.9, +1) <= 1e-10);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uk(-0.9, 0.9), ut(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        Disk d(1.0, uk(rng));
        CHECK(trig_identity_residual(d, ut(rng), ut(rng), i % 2 ? +1 : -1) <= 1e-10);
    }
}

TEST_CASE("exit time") {
    Disk d0(1.0, 0.0);
    CHECK(exit_time(d0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(exit_time(d0, kPi / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(exit_time(d0, kPi / 2.0) == 0.0);
    CHECK(exit_time(d0, -kPi / 2.0) == 0.0);

    Disk dp(1.0, 0.3);
    double tau_ref = std::atan(2.0 * std::sqrt(0.3) / 0.7) / std::sqrt(0.3);
    CHECK(tau_ref == doctest::Approx(1.8297329785).epsilon(1e-9));
    CHECK(exit_time(dp, 0.0) == doctest::Approx(tau_ref).epsilon(1e-14));
    // trace oracle: the library tracer must cross the boundary at tau
    InteriorPoint mid = geodesic_point(dp, {0.0, 0.0}, tau_ref / 2.0);
    TraceResult fw = trace_to_exit(dp, mid.z, mid.theta);
    CHECK(fw.ok);
    CHECK(fw.t == doctest::Approx(tau_ref / 2.0).epsilon(1e-7));

    // evenness and monotonicity on [0, pi/2]
    for (double k : {-0.6, 0.45}) {
        Disk d(1.0, k);
        double prev = exit_time(d, 0.0);
        for (int i = 1; i <= 32; ++i) {
            double al = i * kPi / 64.0;
            double t = exit_time(d, al);
            CHECK(t == doctest::Approx(exit_time(d, -al)).epsilon(1e-14));
            CHECK(t < prev);
            prev = t;
        }
    }
}

TEST_CASE("geodesic point: flat diameters and curved oracle") {
    Disk d0(1.0, 0.0);
    InteriorPoint c0 = geodesic_point(d0, {0.0, 0.0}, 1.0);
    CHECK(std::abs(c0.z) <= 1e-14);  // center
    InteriorPoint b0 = geodesic_point(d0, {0.0, 0.0}, 2.0);
    CHECK(std::abs(b0.z - d0.boundary_point(d0.L() / 2.0)) <= 1e-12);

    Disk dp(1.0, 0.3);
    double tau = exit_time(dp, 0.0);
    InteriorPoint g = geodesic_point(dp, {0.0, 0.0}, tau / 2.0);
    HamState h = ham_rk4(0.3, launch(dp, {0.0, 0.0}), tau / 2.0, 1e-4);
    CHECK(std::abs(g.z - cplx(h.x, h.y)) <= 1e-8);

    // oracle over assorted configurations, including the direction angle
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uk(-0.8, 0.8), ua(-1.3, 1.3), us(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        double k = uk(rng);
        Disk d(1.0, k);
        FanBeamPoint q{us(rng) * d.L(), ua(rng)};
        double t = us(rng) * exit_time(d, q.alpha);
        InteriorPoint p = geodesic_point(d, q, t);
        HamState s = ham_rk4(k, launch(d, q), t, 1e-4);
        CHECK(std::abs(p.z - cplx(s.x, s.y)) <= 1e-8);
        double c = d.c(p.z);
        cplx v(c * c * s.xi1, c * c * s.xi2);  // velocity from the Hamiltonian state
        CHECK(std::abs(v - c * std::exp(cplx(0, p.theta))) <= 1e-7);
    }

    CHECK_THROWS_AS(geodesic_point(d0, {0.0, 0.0}, 2.5), std::domain_error);
    CHECK_THROWS_AS(geodesic_point(d0, {0.0, 0.0}, -0.1), std::domain_error);

    // exit-time consistency: |gamma(tau)| = R to 1e-9 R
    for (double k : {-0.7, -0.2, 0.0, 0.4, 0.7}) {
        Disk d(1.0, k);
        for (int i = 0; i < 40; ++i) {
            double al = -kPi / 2 + (i + 0.5) * kPi / 40.0;
            InteriorPoint p = geodesic_point(d, {0.3, al}, exit_time(d, al));
            CHECK(std::abs(std::abs(p.z) - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("endpoint") {
    Disk d0(1.0, 0.0);
    CHECK(endpoint(d0, {0.0, 0.0}) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(endpoint(d0, {0.0, kPi / 4.0}) == doctest::Approx(kPi + kPi / 2.0).epsilon(1e-14));

    Disk dp(1.0, 0.3);
    FanBeamPoint q{0.0, kPi / 4.0};
    double sp = endpoint(dp, q);
    // trace oracle: follow the geodesic to the exit and read off arclength
    InteriorPoint start = geodesic_point(dp, q, 1e-3);
    TraceResult ex = trace_to_exit(dp, start.z, start.theta);
    CHECK(ex.ok);
    CHECK(std::abs(wrap_diff(ex.s - sp, dp.L())) <= 1e-8);
    // endpoint matches gamma(tau) on the boundary circle
    InteriorPoint pend = geodesic_point(dp, q, exit_time(dp, q.alpha));
    CHECK(std::abs(pend.z - dp.boundary_point(sp)) <= 1e-9);
}

TEST_CASE("chart round trips and the Euclidean shear") {
    Disk d0(1.0, 0.0);
    FanBeamPoint q{1.1, 0.4};
    ParallelPoint w0 = fb_to_parallel(d0, q);
    CHECK(w0.w == doctest::Approx(1.1 + 0.4 + kPi / 2.0).epsilon(1e-14));
    CHECK(w0.p == doctest::Approx(0.4 + kPi / 2.0).epsilon(1e-14));

    for (double k : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
        Disk d(1.0, k);
        double worst = 0.0;
        for (int i = 0; i < 256; ++i) {
            for (int j = 0; j < 256; ++j) {
                FanBeamPoint a{i * d.L() / 256.0, -kPi / 2.0 + j * kPi / 255.0};
                FanBeamPoint b = parallel_to_fb(d, fb_to_parallel(d, a));
                worst = std::max(worst, std::abs(wrap_diff(a.s - b.s, d.L())));
                worst = std::max(worst, std::abs(a.alpha - b.alpha));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("scattering relations") {
    Disk d0(1.0, 0.0);
    FanBeamPoint diam{0.0, 0.0};
    FanBeamPoint sa = antipodal_scattering(d0, diam);
    CHECK(sa.s == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(sa.alpha == 0.0);

    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uk(-0.85, 0.85), ua(-1.5, 1.5), us(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        Disk d(1.0, uk(rng));
        FanBeamPoint q{us(rng) * d.L(), ua(rng)};
        // S_A is an involution
        FanBeamPoint q2 = antipodal_scattering(d, antipodal_scattering(d, q));
        CHECK(std::abs(wrap_diff(q2.s - q.s, d.L())) <= 1e-12);
        CHECK(q2.alpha == doctest::Approx(q.alpha).epsilon(1e-12));
        // (w,p) o S_A = (w + L/2, L/2 - p)
        ParallelPoint wp = fb_to_parallel(d, q);
        ParallelPoint wps = fb_to_parallel(d, antipodal_scattering(d, q));
        CHECK(std::abs(wrap_diff(wps.w - wp.w - d.L() / 2.0, d.L())) <= 1e-10);
        CHECK(wps.p == doctest::Approx(d.L() / 2.0 - wp.p).epsilon(1e-10));
        // the extended scattering is an involution on the full fiber
        BoundaryDir b{q.s, q.alpha};
        BoundaryDir bs = scattering(d, b);
        CHECK(std::abs(bs.a - (kPi - q.alpha)) <= 1e-12);
        BoundaryDir b2 = scattering(d, bs);
        CHECK(std::abs(wrap_diff(b2.s - b.s, d.L())) <= 1e-12);
        CHECK(b2.a == doctest::Approx(b.a).epsilon(1e-12));
    }

    // S_A matches the traced exit with reflected angle (kappa = -0.3 spot check)
    Disk dm(1.0, -0.3);
    FanBeamPoint q{2.0, 0.7};
    InteriorPoint s0 = geodesic_point(dm, q, 1e-3);
    TraceResult ex = trace_to_exit(dm, s0.z, s0.theta);
    FanBeamPoint sA = antipodal_scattering(dm, q);
    CHECK(std::abs(wrap_diff(ex.s - sA.s, dm.L())) <= 1e-7);
}

TEST_CASE("scattering differential") {
    // flat diameter: dS(H) = -H', dS(V) = 2R H' + V' in the (H,V) frame
    Disk d0(1.0, 0.0);
    ScatteringJacobian m0 = scattering_differential(d0, {0.0, 0.0});
    CHECK(m0.hh == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(m0.hv == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m0.vh == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m0.vv == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(std::abs(m0.det()) - 1.0) <= 1e-12);

    // rotational symmetry: |det| = mu / mu(S_A) = 1
    ScatteringJacobian mp = scattering_differential(Disk(1.0, 0.3), {0.0, 0.4});
    CHECK(std::abs(std::abs(mp.det()) - 1.0) <= 1e-10);

    CHECK_THROWS_AS(scattering_differential(d0, {0.0, kPi / 2.0}), std::domain_error);

    // central finite differences of the chart map, decomposed in (H, V)
    auto fd_check = [](double k, double s, double al) {
        Disk d(1.0, k);
        double eps = 1e-5, II = d.II();
        auto smap = [&](double ss, double aa) { return scattering(d, {ss, aa}); };
        BoundaryDir pH = smap(s + eps, al - II * eps), mH = smap(s - eps, al + II * eps);
        BoundaryDir pV = smap(s, al + eps), mV = smap(s, al - eps);
        double L = d.L();
        auto comp = [&](BoundaryDir p, BoundaryDir m, double& h, double& v) {
            double dsp = wrap_diff(p.s - m.s, L) / (2 * eps);
            double dap = (p.a - m.a) / (2 * eps);
            h = dsp;
            v = dap + II * dsp;
        };
        ScatteringJacobian fd{};
        comp(pH, mH, fd.hh, fd.hv);
        comp(pV, mV, fd.vh, fd.vv);
        ScatteringJacobian an = scattering_differential(d, {s, al});
        double scale = std::max({std::abs(an.hh), std::abs(an.hv), std::abs(an.vh),
                                 std::abs(an.vv)});
        CHECK(std::abs(fd.hh - an.hh) / scale <= 1e-4);
        CHECK(std::abs(fd.hv - an.hv) / scale <= 1e-4);
        CHECK(std::abs(fd.vh - an.vh) / scale <= 1e-4);
        CHECK(std::abs(fd.vv - an.vv) / scale <= 1e-4);
        CHECK(std::abs(an.det() - (-1.0)) <= 1e-10);  // mu/(mu o S), exit side
    };
    fd_check(-0.6, 1.0, 0.3);
    fd_check(0.45, 2.0, -0.5);
    fd_check(0.0, 0.7, 0.9);
}

TEST_CASE("frame fields and structure equations") {
    Disk d0(1.0, 0.0);
    FrameFields f0 = vector_fields(d0, 0.2, -0.1, 0.8);
    CHECK(f0.X[0] == doctest::Approx(std::cos(0.8)));
    CHECK(f0.X[1] == doctest::Approx(std::sin(0.8)));
    CHECK(f0.X[2] == 0.0);
    CHECK(f0.Xperp[0] == doctest::Approx(std::sin(0.8)));
    CHECK(f0.Xperp[1] == doctest::Approx(-std::cos(0.8)));

    // d/dt f(gamma(t)) = (X f)(lift) along geodesics
    Disk dp(1.0, 0.35);
    auto test_fn = [](double x, double y) { return std::sin(1.7 * x) * std::cos(0.9 * y) + x * y; };
    FanBeamPoint q{1.0, 0.3};
    double t0 = 0.4 * exit_time(dp, q.alpha);
    InteriorPoint p = geodesic_point(dp, q, t0);
    double fd_step = 1e-4;
    InteriorPoint pp = geodesic_point(dp, q, t0 + fd_step);
    InteriorPoint pm = geodesic_point(dp, q, t0 - fd_step);
    double dfdt = (test_fn(pp.z.real(), pp.z.imag()) - test_fn(pm.z.real(), pm.z.imag())) /
                  (2 * fd_step);
    FrameFields fr = vector_fields(dp, p.z.real(), p.z.imag(), p.theta);
    double gx = (test_fn(p.z.real() + fd_step, p.z.imag()) -
                 test_fn(p.z.real() - fd_step, p.z.imag())) / (2 * fd_step);
    double gy = (test_fn(p.z.real(), p.z.imag() + fd_step) -
                 test_fn(p.z.real(), p.z.imag() - fd_step)) / (2 * fd_step);
    CHECK(std::abs(dfdt - (fr.X[0] * gx + fr.X[1] * gy)) <= 1e-6);

    // commutators of the coefficient fields via central differences:
    // [X,V] = Xperp, [Xperp,V] = -X, [X,Xperp] = -4k V
    auto commutator_residual = [](double k, double x, double y, double th) {
        Disk d(1.0, k);
        double e = 1e-5;
        auto coeff = [&](int which, double xx, double yy, double tt, int i) {
            FrameFields f = vector_fields(d, xx, yy, tt);
            return which == 0 ? f.X[i] : which == 1 ? f.Xperp[i] : f.V[i];
        };
        auto bracket = [&](int A, int B, double out[3]) {
            FrameFields f = vector_fields(d, x, y, th);
            const double* a = A == 0 ? f.X : A == 1 ? f.Xperp : f.V;
            const double* b = B == 0 ? f.X : B == 1 ? f.Xperp : f.V;
            for (int i = 0; i < 3; ++i) {
                auto dirD = [&](int which, const double* v) {
                    return (coeff(which, x + e * v[0], y + e * v[1], th + e * v[2], i) -
                            coeff(which, x - e * v[0], y - e * v[1], th - e * v[2], i)) /
                           (2 * e);
                };
                out[i] = dirD(B, a) - dirD(A, b);
            }
        };
        double xv[3], xpv[3], xxp[3];
        bracket(0, 2, xv);
        bracket(1, 2, xpv);
        bracket(0, 1, xxp);
        FrameFields f = vector_fields(d, x, y, th);
        double r = 0.0;
        for (int i = 0; i < 3; ++i) {
            r = std::max(r, std::abs(xv[i] - f.Xperp[i]));
            r = std::max(r, std::abs(xpv[i] + f.X[i]));
            double target = -4.0 * k * f.V[i];
            r = std::max(r, std::abs(xxp[i] - target));
        }
        return r;
    };
    CHECK(commutator_residual(0.3, 0.2, -0.4, 1.1) <= 1e-6);
    CHECK(commutator_residual(-0.55, -0.1, 0.3, -2.0) <= 1e-6);
    CHECK(commutator_residual(0.0, 0.5, 0.5, 0.3) <= 1e-6);
}

TEST_CASE("backward tracing recovers the entry configuration") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> uk(-0.75, 0.75), ua(-1.4, 1.4), us(0.0, 1.0),
        uf(0.05, 0.95);
    for (int i = 0; i < 60; ++i) {
        Disk d(1.0, uk(rng));
        FanBeamPoint q{us(rng) * d.L(), ua(rng)};
        double tau = exit_time(d, q.alpha);
        double t = uf(rng) * tau;
        InteriorPoint p = geodesic_point(d, q, t);
        TraceResult r = trace_to_entry(d, p.z, p.theta);
        REQUIRE(r.ok);
        CHECK(std::abs(wrap_diff(r.s - q.s, d.L())) <= 5e-7);
        CHECK(std::abs(r.a - q.alpha) <= 5e-7);
        CHECK(std::abs(r.t - t) <= 5e-7);
    }
}
