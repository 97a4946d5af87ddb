#pragma once

#include <utility>
#include <vector>

#include "ccd/canrel.hpp"
#include "ccd/geometry.hpp"
#include "ccd/grid.hpp"
#include "ccd/phantom.hpp"

// Shannon/semiclassical interpolation, Nyquist planning, spectral folding,
// aliasing-artifact prediction, windowed Fourier analysis, and the
// parallelogram tiling machinery.

namespace ccd {

enum class InterpKernel { Sinc, Lanczos3, GaussSinc };

// 1-D interpolation of uniform samples at origin + k*step.
double shannon_interpolate(const double* samples, int n, double origin, double step,
                           InterpKernel kernel, double x);

struct SamplingPlan {
    Chart chart;
    double B;            // band-limit scale
    double b1, b2;       // b-numbers as planned with (3 significant digits)
    double C1, C2;       // oversampling factors
    int n1, n2;          // sample counts per axis
    double h1, h2;       // steps
    double nyq1() const { return kPi / h1; }
    double nyq2() const { return kPi / h2; }
    bool alias_free() const { return h1 <= kPi / (B * b1) && h2 <= kPi / (B * b2); }
};

// N1 = ceil(C1 B (L/pi) b1); N2 = ceil(C2 B b2) in fan-beam, with the p-range
// L/2 in parallel: N2 = ceil(C2 B L b2 / (2 pi)). The b-numbers are rounded to
// three significant digits first (the precision the reported values carry).
SamplingPlan make_plan(const Disk& d, Chart chart, const Sigma& sigma, double B, double C1,
                       double C2);

double round_3sig(double x);

struct FoldedCovector {
    DataCovector dc;  // base unchanged, components folded into the Nyquist box
    int k1, k2;       // integer shifts applied
};
FoldedCovector fold_covector(const DataCovector& dc, const SamplingPlan& plan);

// Solve dc = lambda * eta_{q, u tau} for (u, lambda) by bisection on the
// monotone component ratio; `kernel` when the ratio is unattainable.
struct FiberBackprojection {
    bool in_kernel;
    double u = 0.0, lambda = 0.0;
    SpaceCovector interior{};  // lambda (gammadot(u tau))_perp^flat
};
FiberBackprojection backproject_data_covector(const Disk& d, FanBeamPoint q, Chart chart,
                                              double c1, double c2);

struct AliasPrediction {
    int branch;  // +1 for C+, -1 for C-
    FanBeamPoint base;
    FoldedCovector folded;
    enum Verdict { Unaliased, Kernel, Artifact } verdict;
    // artifact description (Verdict == Artifact)
    cplx z{};
    double direction = 0.0;  // angle of the predicted spatial covector
    double freq = 0.0;       // Euclidean frequency magnitude |xi'|
    double u = 0.0, lambda = 0.0;
    bool higher_frequency = false;  // freq exceeds the packet's |xi0|/h
};

std::vector<AliasPrediction> predict_artifacts(const Disk& d, const WavePacket& packet,
                                               const SamplingPlan& plan);

// Windowed Fourier transform: gaussian window of width sigma_w at (c1, c2),
// zero-padded FFT (pad_factor x), axes in continuous-frequency units.
struct SpectralPeak {
    double f1, f2, mag;
};
struct WindowedFT {
    Grid2 spectrum;                   // |F|, axes = dual variables
    std::vector<SpectralPeak> peaks;  // largest symmetric maxima, positive half
    bool clipped = false;             // window ran off the non-periodic axis
};
WindowedFT windowed_ft(const Grid2& sino, double c1, double c2, double sigma_w,
                       int pad_factor = 4);

// Spectral cell + sampling lattice; translates are xi -> xi + 2 pi (W^T)^-1 k.
struct TilingLattice {
    double W[4];                                   // row-major 2x2, x = W y
    std::vector<std::pair<double, double>> cell;   // convex polygon, ccw
};
// True iff the cell and its 8 nearest lattice translates have pairwise
// intersection area <= tol * cell area.
bool tiling_check(const TilingLattice& lat, double area_tol = 1e-9);

// Upsampling onto a factor-times-denser grid.
Grid2 upsample_box_lanczos(const Grid2& sino, int factor);
// Fourier route: periodize the spectrum factor times per axis, keep the part
// inside the cell polygon (continuous-frequency units), inverse transform.
Grid2 upsample_parallelogram(const Grid2& sino, int factor,
                             const std::vector<std::pair<double, double>>& cell);

// The section 4.6 spectral parallelogram for a band limit B and b-numbers.
std::vector<std::pair<double, double>> spectral_parallelogram(double B, double b1, double b2);

}  // namespace ccd
