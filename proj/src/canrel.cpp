#include "ccd/canrel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ccd {

double Sigma::m(const Disk& d, cplx z) const {
    switch (kind) {
        case EuclideanBall: return d.c(z);
        case MetricBall: return 1.0;
        case SupportedBall: return std::abs(z) < r0 ? d.c(z) : 0.0;
    }
    return 0.0;
}

const char* Sigma::name() const {
    switch (kind) {
        case EuclideanBall: return "Sigma1";
        case MetricBall: return "Sigma2";
        case SupportedBall: return "Sigma3";
    }
    return "?";
}

void eta_fanbeam(const Disk& d, double alpha, double t, double& eta_s, double& eta_alpha) {
    Jacobi j = jacobi(d, t);
    eta_s = d.II() * j.b - std::cos(alpha) * j.a;
    eta_alpha = j.b;
}

DataCovector eta_fanbeam(const Disk& d, FanBeamPoint q, double t) {
    DataCovector dc{Chart::FanBeam, q.s, q.alpha, 0.0, 0.0};
    eta_fanbeam(d, q.alpha, t, dc.c1, dc.c2);
    return dc;
}

void eta_parallel(const Disk& d, double alpha, double t, double& eta_w, double& eta_p) {
    double tau = exit_time(d, alpha);
    Jacobi half = jacobi(d, tau / 2.0);
    if (half.a == 0.0 || half.b == 0.0)
        throw std::domain_error("eta_parallel: degenerate half-chord Jacobi value");
    Jacobi j = jacobi(d, t - tau / 2.0);
    double mu = std::cos(alpha);
    eta_w = mu * j.b / half.b;
    eta_p = mu * j.a / half.a;
}

DataCovector eta_parallel(const Disk& d, ParallelPoint q, double t) {
    FanBeamPoint fb = parallel_to_fb(d, q);
    DataCovector dc{Chart::Parallel, q.w, q.p, 0.0, 0.0};
    eta_parallel(d, fb.alpha, t, dc.c1, dc.c2);
    return dc;
}

CanonicalGraphs canonical_graph(const Disk& d, const SpaceCovector& omega) {
    double xin = std::hypot(omega.xi1, omega.xi2);
    if (xin == 0.0) throw std::domain_error("canonical_graph: zero covector");
    if (std::abs(omega.z) >= d.R())
        throw std::domain_error("canonical_graph: base point must be strictly inside");
    // direction w with (w_perp)^flat parallel to +omega; v_perp = i v
    double theta = std::atan2(omega.xi2, omega.xi1) - kPi / 2.0;
    double lambda = d.c(omega.z) * xin;
    TraceResult fwd = trace_to_entry(d, omega.z, theta);
    TraceResult rev = trace_to_entry(d, omega.z, theta + kPi);
    if (!fwd.ok || !rev.ok) throw std::runtime_error("canonical_graph: trace failed");
    return {{{fwd.s, fwd.a}, fwd.t, lambda}, {{rev.s, rev.a}, rev.t, -lambda}};
}

DataCovector branch_covector(const Disk& d, const GraphBranch& br, Chart chart) {
    if (chart == Chart::FanBeam) {
        DataCovector dc = eta_fanbeam(d, br.q, br.t);
        dc.c1 *= br.lambda;
        dc.c2 *= br.lambda;
        return dc;
    }
    ParallelPoint wp = fb_to_parallel(d, br.q);
    DataCovector dc = eta_parallel(d, wp, br.t);
    dc.c1 *= br.lambda;
    dc.c2 *= br.lambda;
    return dc;
}

double Bowtie::extent1() const {
    double m = 0.0;
    for (auto& s : samples) m = std::max(m, std::abs(s.first));
    return m;
}

double Bowtie::extent2() const {
    double m = 0.0;
    for (auto& s : samples) m = std::max(m, std::abs(s.second));
    return m;
}

Bowtie bowtie(const Disk& d, Chart chart, FanBeamPoint q, const Sigma& sigma, int n_t) {
    if (n_t < 64) throw std::invalid_argument("bowtie: n_t >= 64 required");
    Bowtie bt{chart, {}, true};
    double tau = exit_time(d, q.alpha);
    bt.samples.reserve(n_t);
    for (int i = 1; i < n_t; ++i) {
        double t = tau * i / n_t;
        cplx z = geodesic_point(d, q, t).z;
        double m = sigma.m(d, z);
        if (m == 0.0) continue;  // Sigma3 outside the support segment
        double e1, e2;
        if (chart == Chart::FanBeam)
            eta_fanbeam(d, q.alpha, t, e1, e2);
        else
            eta_parallel(d, q.alpha, t, e1, e2);
        bt.samples.emplace_back(m * e1, m * e2);
    }
    return bt;
}

namespace {

struct SweepFn {
    const Disk& d;
    Chart chart;
    const Sigma& sigma;
    double alpha;
    // |component| of m * eta at time t; comp = 0 or 1
    double operator()(double t, int comp) const {
        cplx z = geodesic_point(d, {0.0, alpha}, t).z;
        double m = sigma.m(d, z);
        if (m == 0.0) return 0.0;
        double e1, e2;
        if (chart == Chart::FanBeam)
            eta_fanbeam(d, alpha, t, e1, e2);
        else
            eta_parallel(d, alpha, t, e1, e2);
        return m * std::abs(comp == 0 ? e1 : e2);
    }
};

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::max({f(a), f(b), f1, f2});
}

std::pair<double, double> sweep(const Disk& d, Chart chart, const Sigma& sigma,
                                const std::vector<double>& alphas, int n_t, bool refine) {
    double b1 = 0.0, b2 = 0.0;
    for (double al : alphas) {
        double tau = exit_time(d, al);
        if (tau <= 0.0) continue;
        SweepFn fn{d, chart, sigma, al};
        for (int comp = 0; comp < 2; ++comp) {
            double best = 0.0, tbest = 0.0;
            for (int i = 0; i <= n_t; ++i) {
                double t = tau * i / n_t;
                double v = fn(t, comp);
                if (v > best) {
                    best = v;
                    tbest = t;
                }
            }
            if (refine && best > 0.0) {
                double dt = tau / n_t;
                double lo = std::max(0.0, tbest - dt), hi = std::min(tau, tbest + dt);
                best = std::max(best, golden_max([&](double t) { return fn(t, comp); }, lo, hi, 60));
            }
            (comp == 0 ? b1 : b2) = std::max(comp == 0 ? b1 : b2, best);
        }
    }
    return {b1, b2};
}

}  // namespace

std::pair<double, double> b_numbers(const Disk& d, Chart chart, const Sigma& sigma) {
    std::vector<double> alphas(512);
    for (int i = 0; i < 512; ++i) alphas[i] = (kPi / 2.0) * i / 511.0;
    return sweep(d, chart, sigma, alphas, 1024, true);
}

std::pair<double, double> b_numbers_figset(const Disk& d, Chart chart, const Sigma& sigma) {
    std::vector<double> alphas = {0.0, kPi / 9.0, 2.0 * kPi / 9.0, kPi / 3.0, 4.0 * kPi / 9.0};
    return sweep(d, chart, sigma, alphas, 200, false);
}

std::pair<double, double> max_angle_hitting_support(const Disk& d, double r0) {
    if (!(r0 > 0.0 && r0 < d.R()))
        throw std::invalid_argument("max_angle_hitting_support: 0 < r0 < R required");
    auto min_dist = [&](double al) {
        double tau = exit_time(d, al);
        if (tau <= 0.0) return d.R();
        // closest approach is unimodal; coarse scan plus golden section
        double best = d.R(), tb = tau / 2.0;
        for (int i = 0; i <= 64; ++i) {
            double t = tau * i / 64.0;
            double v = std::abs(geodesic_point(d, {0.0, al}, t).z);
            if (v < best) {
                best = v;
                tb = t;
            }
        }
        double lo = std::max(0.0, tb - tau / 64.0), hi = std::min(tau, tb + tau / 64.0);
        double m = -golden_max([&](double t) { return -std::abs(geodesic_point(d, {0.0, al}, t).z); },
                               lo, hi, 60);
        return std::min(best, m);
    };
    double lo = 0.0, hi = kPi / 2.0;
    for (int i = 0; i < 64; ++i) {
        double mid = 0.5 * (lo + hi);
        if (min_dist(mid) <= r0)
            lo = mid;
        else
            hi = mid;
    }
    double alpha_m = 0.5 * (lo + hi);
    double p_m = fb_to_parallel(d, {0.0, alpha_m}).p;
    return {alpha_m, p_m};
}

SampleFactors sample_factors(const Disk& d, const Sigma& sigma, bool figure_set) {
    auto bn = figure_set ? b_numbers_figset(d, Chart::FanBeam, sigma)
                         : b_numbers(d, Chart::FanBeam, sigma);
    auto bp = figure_set ? b_numbers_figset(d, Chart::Parallel, sigma)
                         : b_numbers(d, Chart::Parallel, sigma);
    SampleFactors f{};
    f.bs = bn.first;
    f.ba = bn.second;
    f.bw = bp.first;
    f.bp = bp.second;
    double L = d.L();
    if (sigma.kind == Sigma::SupportedBall) {
        auto [am, pm] = max_angle_hitting_support(d, sigma.r0);
        f.n_fan = (L * f.bs / kPi) * (2.0 * am * f.ba / kPi);
        f.n_par = (L * f.bw / kPi) * ((2.0 * pm - L / 2.0) * f.bp / kPi);
    } else {
        f.n_fan = L / kPi * f.bs * f.ba;
        f.n_par = L * L / (2.0 * kPi * kPi) * f.bw * f.bp;
    }
    return f;
}

void write_table_csv(const std::string& path, const std::vector<double>& kappas, double R,
                     bool figure_set) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "kappa,chart,sigma,b1,b2,N\n";
    out.precision(10);
    for (Sigma sig : {Sigma::sigma1(), Sigma::sigma2(), Sigma::sigma3()}) {
        for (double k : kappas) {
            Disk d(R, k);
            SampleFactors f = sample_factors(d, sig, figure_set);
            out << k << ",fan," << sig.name() << "," << f.bs << "," << f.ba << "," << f.n_fan
                << "\n";
            out << k << ",parallel," << sig.name() << "," << f.bw << "," << f.bp << "," << f.n_par
                << "\n";
        }
    }
}

}  // namespace ccd
