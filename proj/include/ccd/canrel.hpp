#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ccd/geometry.hpp"
#include "ccd/grid.hpp"

// Canonical relation of the X-ray transform on the constant-curvature disk:
// the covectors eta in both charts, the two graphs C+/C-, band-limit sets,
// bowtie frequency sets, b-numbers and number-of-sample factors.

namespace ccd {

// Covector in data space: base coordinates (b1,b2) = (s,alpha) or (w,p) and
// dual components (c1,c2) = (eta_s,eta_alpha) or (eta_w,eta_p).
struct DataCovector {
    Chart chart;
    double b1, b2;
    double c1, c2;
};

struct SpaceCovector {
    cplx z;
    double xi1, xi2;  // Euclidean components of the dual vector
};

// Band-limit set Sigma given by its fiber-scaling function m(x):
// Sigma_x = { omega : c(x) |omega|_e <= m(x) }.
struct Sigma {
    enum Kind { EuclideanBall, MetricBall, SupportedBall };
    Kind kind;
    double r0 = 0.75;  // support radius for SupportedBall

    double m(const Disk& d, cplx z) const;
    const char* name() const;

    static Sigma sigma1() { return {EuclideanBall, 0.0}; }
    static Sigma sigma2() { return {MetricBall, 0.0}; }
    static Sigma sigma3(double r0 = 0.75) { return {SupportedBall, r0}; }
};

// eta_{s,alpha,t} = (II b(t) - mu a(t)) ds + b(t) dalpha
void eta_fanbeam(const Disk& d, double alpha, double t, double& eta_s, double& eta_alpha);
DataCovector eta_fanbeam(const Disk& d, FanBeamPoint q, double t);

// eta_{w,p,t} = mu ( b(t - tau/2)/b(tau/2) dw + a(t - tau/2)/a(tau/2) dp )
void eta_parallel(const Disk& d, double alpha, double t, double& eta_w, double& eta_p);
DataCovector eta_parallel(const Disk& d, ParallelPoint q, double t);

// One branch of the canonical graph: omega = lambda * (gammadot(t))_perp^flat
// along the geodesic entering at q.
struct GraphBranch {
    FanBeamPoint q;
    double t;
    double lambda;
};

struct CanonicalGraphs {
    GraphBranch plus;   // lambda > 0
    GraphBranch minus;  // lambda < 0, reversed geodesic, t+ + t- = tau
};

// Throws std::domain_error for omega = 0 or a base point not strictly inside.
CanonicalGraphs canonical_graph(const Disk& d, const SpaceCovector& omega);

// The data covector lambda * eta at a branch, in either chart.
DataCovector branch_covector(const Disk& d, const GraphBranch& br, Chart chart);

// Fiber of C+(Sigma) at q: polyline of m(gamma(t)) * eta(t) over a uniform
// t-grid of (0, tau); symmetric under lambda in [-1,1] scaling (closure flag).
struct Bowtie {
    Chart chart;
    std::vector<std::pair<double, double>> samples;
    bool symmetric = true;  // contains -samples and the segment to 0
    double extent1() const;
    double extent2() const;
};

Bowtie bowtie(const Disk& d, Chart chart, FanBeamPoint q, const Sigma& sigma, int n_t);

// Per-axis suprema of the bowtie components over the geodesic space.
// Fine sweep (512 alpha x 1024 t closed grid, golden-section refinement):
// the set-theoretic supremum; feeds sampling plans.
std::pair<double, double> b_numbers(const Disk& d, Chart chart, const Sigma& sigma);

// The extraction used for the reported figure values: the five displayed
// bowtie angles {j*pi/9, j=0..4} sampled on a 200-interval closed t-grid.
std::pair<double, double> b_numbers_figset(const Disk& d, Chart chart, const Sigma& sigma);

// Largest alpha whose geodesic meets {|z| <= r0}, and its p-chart image.
std::pair<double, double> max_angle_hitting_support(const Disk& d, double r0);

// Number-of-sample factors N_(s,alpha) = (L/pi) b_s b_alpha and
// N_(w,p) = (L^2/2pi^2) b_w b_p; Sigma3 uses the alpha_m/p_m-restricted ranges.
struct SampleFactors {
    double n_fan, n_par;
    double bs, ba, bw, bp;
};
SampleFactors sample_factors(const Disk& d, const Sigma& sigma, bool figure_set);

// Table-shaped CSV: kappa, chart, sigma, b1, b2, N (one row per chart).
void write_table_csv(const std::string& path, const std::vector<double>& kappas, double R,
                     bool figure_set);

}  // namespace ccd
