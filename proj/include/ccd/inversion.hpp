#pragma once

#include "ccd/geometry.hpp"
#include "ccd/grid.hpp"

// Exact inversion on constant-curvature disks, discretized as a filtered
// backprojection: odd extension to the full boundary sphere bundle, fiberwise
// odd Hilbert transform, scattering symmetrization, and perpendicular
// backprojection, scaled by 1/(8 pi). The overall sign is calibrated by the
// flat-disk exactness test (see kInversionSign).

namespace ccd {

// Multiplies the assembled backprojection; calibrated so that invert(xray(f))
// reproduces +f.
inline constexpr double kInversionSign = -1.0;

struct ReconstructionConfig {
    int n = 256;         // image grid (n x n over [-R, R]^2)
    int n_theta = 512;   // fiber angles for the backprojection average (even)
    int upsample = 2;    // data upsampling per axis before inversion
    double trace_step = 0.0;  // backward-trace RK4 step; 0 = min(1e-2, tau_max/64)
};

// Extension of fan-beam data to the full fiber a in [-pi/2, 3pi/2), odd with
// respect to the extended scattering relation. Input axis 2 must be the
// half-open [-pi/2, pi/2) fan-beam axis; output doubles it, periodic.
Grid2 extend_odd(const Disk& d, const Grid2& sino_plus);

// Fiberwise Hilbert transform keeping odd harmonics only (multiplier
// -i sgn(k)); fiber count must be even. Real in, real out.
Grid2 fiber_hilbert_odd(const Grid2& full);

// w(s,a) = u(s,a) + u(S(s,a)) on the full fiber grid (S-even by construction;
// the inward half is the classical operator's output).
Grid2 apply_aplus_star(const Disk& d, const Grid2& full);

// Perpendicular backprojection: extend w as constant along geodesics via
// backward traces, apply X_perp with centered differences on the (x,y,theta)
// grid, integrate over the fiber (trapezoid). Accepts w on the inward half
// (fan-beam chart) or on the full fiber (boundary chart).
Grid2 backproject_perp(const Disk& d, const Grid2& w, const ReconstructionConfig& cfg);

// Full pipeline including the 2x data upsampling and the 1/(8 pi) scale.
Grid2 invert(const Disk& d, const Grid2& sino, const ReconstructionConfig& cfg);

// Rim traces that failed during the last backproject_perp call.
size_t backprojection_trace_failures();

}  // namespace ccd
