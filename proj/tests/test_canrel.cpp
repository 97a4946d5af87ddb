#include <doctest.h>

#include <cmath>
#include <random>

#include "ccd/canrel.hpp"
#include "ccd/geometry.hpp"

using namespace ccd;

TEST_CASE("eta in fan-beam coordinates") {
    Disk d0(1.0, 0.0);
    double es, ea;
    eta_fanbeam(d0, 0.3, 0.0, es, ea);
    CHECK(es == doctest::Approx(-std::cos(0.3)).epsilon(1e-15));
    CHECK(ea == 0.0);
    eta_fanbeam(d0, 0.0, 1.0, es, ea);
    CHECK(es == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ea == doctest::Approx(1.0).epsilon(1e-15));

    // frame-change oracle: solve eta(V) = b, eta(H) = -mu a with
    // ds(H)=1, ds(V)=0, dalpha(H)=-II, dalpha(V)=1
    Disk dm(1.0, -0.3);
    double al = 0.4, t = exit_time(dm, al) / 2.0;
    Jacobi j = jacobi(dm, t);
    double ref_ea = j.b;
    double ref_es = -std::cos(al) * j.a + dm.II() * ref_ea;
    eta_fanbeam(dm, al, t, es, ea);
    CHECK(std::abs(es - ref_es) <= 1e-10);
    CHECK(std::abs(ea - ref_ea) <= 1e-10);
}

TEST_CASE("eta in parallel coordinates") {
    Disk d0(1.0, 0.0);
    double ew, ep;
    double al = 0.5, tau = exit_time(d0, al);
    eta_parallel(d0, al, tau / 2.0, ew, ep);
    CHECK(ew == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ep == doctest::Approx(std::cos(al)).epsilon(1e-14));
    // flat case: eta_w = cos(al) (t - tau/2)/(tau/2), eta_p = cos(al)
    double t = 0.2 * tau;
    eta_parallel(d0, al, t, ew, ep);
    CHECK(ew == doctest::Approx(std::cos(al) * (t - tau / 2) / (tau / 2)).epsilon(1e-13));
    CHECK(ep == doctest::Approx(std::cos(al)).epsilon(1e-13));

    // general-formula oracle (Lemma 3.4 form), using b_tau(S_A) = b_tau:
    // eta_w = mu_A b(t)/b(tau) - mu b(tau-t)/b(tau), eta_p = same with +
    Disk dp(1.0, 0.3);
    FanBeamPoint q{1.0, 0.0};
    ParallelPoint wp = fb_to_parallel(dp, q);
    wp.p = dp.L() / 3.0;
    FanBeamPoint fq = parallel_to_fb(dp, wp);
    double tau2 = exit_time(dp, fq.alpha);
    double t2 = 0.2 * tau2;
    double mu = std::cos(fq.alpha);
    Jacobi jt = jacobi(dp, t2), jtt = jacobi(dp, tau2 - t2), jT = jacobi(dp, tau2);
    double ref_w = mu * jt.b / jT.b - mu * jtt.b / jT.b;
    double ref_p = mu * jt.b / jT.b + mu * jtt.b / jT.b;
    DataCovector dc = eta_parallel(dp, wp, t2);
    CHECK(std::abs(dc.c1 - ref_w) <= 1e-10);
    CHECK(std::abs(dc.c2 - ref_p) <= 1e-10);

    // reflection symmetry about tau/2: eta_w odd, eta_p even
    double ew1, ep1, ew2, ep2;
    double tau3 = exit_time(dp, 0.3);
    eta_parallel(dp, 0.3, 0.3 * tau3, ew1, ep1);
    eta_parallel(dp, 0.3, 0.7 * tau3, ew2, ep2);
    CHECK(ew1 == doctest::Approx(-ew2).epsilon(1e-12));
    CHECK(ep1 == doctest::Approx(ep2).epsilon(1e-12));
}

TEST_CASE("canonical graphs") {
    Disk d0(1.0, 0.0);
    double B = 40.0;
    CanonicalGraphs g = canonical_graph(d0, {cplx(0.0, 0.0), 0.0, B});
    CHECK(g.plus.t == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(g.minus.t == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(g.plus.lambda == doctest::Approx(B).epsilon(1e-12));
    CHECK(g.minus.lambda == doctest::Approx(-B).epsilon(1e-12));
    CHECK(std::abs(g.plus.q.alpha) <= 1e-7);
    // horizontal diameter traversed both ways
    CHECK(std::abs(g.plus.q.s - kPi) * std::abs(g.minus.q.s - 0.0) <= 1e-6);

    CHECK_THROWS_AS(canonical_graph(d0, {cplx(0, 0), 0, 0}), std::domain_error);
    CHECK_THROWS_AS(canonical_graph(d0, {cplx(1.0, 0), 0, 1.0}), std::domain_error);

    // symmetry C+(-omega) vs C-(omega): same base and time, lambda negated
    SpaceCovector om{cplx(0.2, -0.3), 30.0, 55.0};
    CanonicalGraphs a = canonical_graph(d0, om);
    CanonicalGraphs b = canonical_graph(d0, {om.z, -om.xi1, -om.xi2});
    CHECK(b.plus.q.s == doctest::Approx(a.minus.q.s).epsilon(1e-12));
    CHECK(b.plus.q.alpha == doctest::Approx(a.minus.q.alpha).epsilon(1e-12));
    CHECK(b.plus.t == doctest::Approx(a.minus.t).epsilon(1e-12));
    CHECK(b.plus.lambda == doctest::Approx(-a.minus.lambda).epsilon(1e-12));

    // re-projection oracle: lambda (gammadot(t))_perp^flat recovers omega
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> uk(-0.6, 0.6), ur(0.0, 0.8), uph(0.0, 2 * kPi),
        um(5.0, 120.0);
    for (int i = 0; i < 30; ++i) {
        Disk d(1.0, uk(rng));
        double r = ur(rng), ph = uph(rng), xin = um(rng), xiph = uph(rng);
        SpaceCovector w{r * std::exp(cplx(0, ph)), xin * std::cos(xiph), xin * std::sin(xiph)};
        CanonicalGraphs cg = canonical_graph(d, w);
        for (int side = 0; side < 2; ++side) {
            const GraphBranch& br = side == 0 ? cg.plus : cg.minus;
            CHECK(br.t >= 0.0);
            CHECK(br.t <= exit_time(d, br.q.alpha) + 1e-6);
            InteriorPoint p = geodesic_point(d, br.q, br.t);
            CHECK(std::abs(p.z - w.z) <= 1e-6);
            double c = d.c(p.z);
            // (c e^{i theta})_perp^flat = c^{-1}(-sin, cos)
            double ox = br.lambda * (-std::sin(p.theta)) / c;
            double oy = br.lambda * std::cos(p.theta) / c;
            CHECK(std::abs(ox - w.xi1) <= 1e-6 * std::max(1.0, xin));
            CHECK(std::abs(oy - w.xi2) <= 1e-6 * std::max(1.0, xin));
        }
        CHECK(cg.plus.t + cg.minus.t ==
              doctest::Approx(exit_time(d, cg.plus.q.alpha)).epsilon(1e-6));
    }
}

TEST_CASE("bowtie extents at the paper's reference boxes") {
    Disk d0(1.0, 0.0);
    Bowtie b2 = bowtie(d0, Chart::FanBeam, {0.0, 0.0}, Sigma::sigma2(), 4096);
    CHECK(b2.extent1() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(b2.extent2() == doctest::Approx(2.0).epsilon(1e-3));
    Bowtie b1 = bowtie(d0, Chart::FanBeam, {0.0, 0.0}, Sigma::sigma1(), 4096);
    CHECK(b1.extent1() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(b1.extent2() == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS_AS(bowtie(d0, Chart::FanBeam, {0.0, 0.0}, Sigma::sigma1(), 32),
                    std::invalid_argument);
    // Sigma3 figure-set box (0.74, 1.74)
    auto b3 = b_numbers_figset(d0, Chart::FanBeam, Sigma::sigma3());
    CHECK(b3.first == doctest::Approx(0.74).epsilon(0.02));
    CHECK(b3.second == doctest::Approx(1.74).epsilon(0.02));
}

TEST_CASE("b-numbers against figure captions") {
    // fine sweep where the caption matches the continuous supremum
    auto b = b_numbers(Disk(1.0, -0.3), Chart::FanBeam, Sigma::sigma1());
    CHECK(b.first == doctest::Approx(0.7).epsilon(0.02));
    CHECK(b.second == doctest::Approx(3.71).epsilon(0.02));
    b = b_numbers(Disk(1.0, -0.6), Chart::FanBeam, Sigma::sigma2());
    CHECK(b.first == doctest::Approx(1.0).epsilon(0.02));
    CHECK(b.second == doctest::Approx(20.0).epsilon(0.02));
    b = b_numbers(Disk(1.0, 0.6), Chart::Parallel, Sigma::sigma1());
    CHECK(b.first == doctest::Approx(1.6).epsilon(0.02));
    CHECK(b.second == doctest::Approx(4.0).epsilon(0.02));
    // the kappa=0.6 fan-beam Sigma1 caption needs the displayed-angle extraction
    auto bf = b_numbers_figset(Disk(1.0, 0.6), Chart::FanBeam, Sigma::sigma1());
    CHECK(bf.first == doctest::Approx(1.6).epsilon(0.02));
    CHECK(bf.second == doctest::Approx(0.96).epsilon(0.02));
}

TEST_CASE("number-of-sample factors (Table rows)") {
    SampleFactors f = sample_factors(Disk(1.0, 0.0), Sigma::sigma1(), true);
    CHECK(f.n_fan == doctest::Approx(4.0).epsilon(0.02));
    CHECK(f.n_par == doctest::Approx(2.0).epsilon(0.02));
    f = sample_factors(Disk(1.0, -0.6), Sigma::sigma2(), true);
    CHECK(f.n_fan == doctest::Approx(100.0).epsilon(0.02));
    CHECK(f.n_par == doctest::Approx(12.5).epsilon(0.02));
    f = sample_factors(Disk(1.0, 0.3), Sigma::sigma3(), true);
    CHECK(f.n_fan == doctest::Approx(1.0).epsilon(0.02));
    CHECK(f.n_par == doctest::Approx(0.93).epsilon(0.02));
}

TEST_CASE("largest support-hitting angle") {
    Disk d0(1.0, 0.0);
    auto [am, pm] = max_angle_hitting_support(d0, 0.75);
    CHECK(am == doctest::Approx(std::asin(0.75)).epsilon(1e-6));
    CHECK(pm == doctest::Approx(kPi / 2.0 + std::asin(0.75)).epsilon(1e-6));
    CHECK_THROWS_AS(max_angle_hitting_support(d0, 1.5), std::invalid_argument);

    // dense-scan oracle at kappa = 0.3
    Disk dp(1.0, 0.3);
    auto [am2, pm2] = max_angle_hitting_support(dp, 0.75);
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double al = kPi / 2.0 * i / 20000.0;
        double tau = exit_time(dp, al);
        if (tau <= 0) continue;
        double dmin = 1e9;
        for (int j = 0; j <= 400; ++j)
            dmin = std::min(dmin, std::abs(geodesic_point(dp, {0.0, al}, tau * j / 400.0).z));
        if (dmin <= 0.75) best = std::max(best, al);
    }
    CHECK(std::abs(am2 - best) <= 1e-3);
    CHECK(pm2 == doctest::Approx(fb_to_parallel(dp, {0.0, am2}).p).epsilon(1e-12));
}

TEST_CASE("fiber cone and antipodal bowtie invariance") {
    for (double k : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
        Disk d(1.0, k);
        for (int i = 0; i < 512; ++i) {
            double al = -kPi / 2 + (i + 0.5) * kPi / 512.0;
            double tau = exit_time(d, al);
            for (int j = 1; j < 16; ++j) {
                double t = tau * j / 16.0;
                double es, ea, ew, ep;
                eta_fanbeam(d, al, t, es, ea);
                CHECK(ea >= 0.0);  // lambda > 0 half sits in {eta_alpha >= 0}
                eta_parallel(d, al, t, ew, ep);
                CHECK(ep >= -1e-12);
                CHECK(std::abs(ew) <= ep + 1e-12);  // aperture pi/2 cone
            }
        }
    }
    // antipodal invariance of parallel-chart extents
    Disk d(1.0, -0.4);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ua(-1.4, 1.4), us(0.0, d.L());
    for (int i = 0; i < 50; ++i) {
        FanBeamPoint q{us(rng), ua(rng)};
        Bowtie b1 = bowtie(d, Chart::Parallel, q, Sigma::sigma1(), 512);
        Bowtie b2 = bowtie(d, Chart::Parallel, antipodal_scattering(d, q), Sigma::sigma1(), 512);
        CHECK(std::abs(b1.extent1() - b2.extent1()) <= 1e-10);
        CHECK(std::abs(b1.extent2() - b2.extent2()) <= 1e-10);
    }
}

TEST_CASE("monotone component ratio along geodesics") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> uk(-0.8, 0.8), ua(-1.3, 1.3);
    for (int i = 0; i < 100; ++i) {
        Disk d(1.0, uk(rng));
        double al = ua(rng);
        double tau = exit_time(d, al);
        double last = -1e300;
        for (int j = 1; j <= 64; ++j) {
            double es, ea;
            eta_fanbeam(d, al, tau * j / 65.0, es, ea);
            double ratio = es / ea;
            CHECK(ratio > last);
            last = ratio;
        }
    }
}
