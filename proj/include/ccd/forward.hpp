#pragma once

#include "ccd/geometry.hpp"
#include "ccd/grid.hpp"
#include "ccd/phantom.hpp"

namespace ccd {

// Data grids: axis 1 is s (or w) on [0, L), periodic; axis 2 is alpha on
// [-pi/2, pi/2) or p on [0, L/2), half-open so the nodes are FFT-compatible.
Grid2 make_sinogram_grid(const Disk& d, Chart chart, int n1, int n2);

// Geodesic X-ray transform of the phantom sampled on an (n1 x n2) chart grid.
// Composite Simpson along each geodesic with step <= h_t (node count rounded
// up to even, at least 16; short chords with tau < 4 h_t use a fixed 8-node
// rule). Pass h_t <= 0 to take pi/(4 B_declared); a coarser explicit h_t is
// accepted with a warning.
Grid2 xray_transform(const Disk& d, const Phantom& f, Chart chart, int n1, int n2,
                     double h_t = 0.0);

// Chart-change (or same-chart) resampling by Lanczos-3 through the exact
// coordinate maps; periodic wrap on axis 1.
Grid2 resample_chart(const Disk& d, const Grid2& sino, Chart target, int n1, int n2);

// Lanczos-3 upsampling of a sinogram onto a grid `factor` times denser per axis.
Grid2 upsample_lanczos(const Grid2& sino, int factor);

}  // namespace ccd
