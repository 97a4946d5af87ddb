#pragma once

#include <string>
#include <vector>

namespace ccd {

enum class Chart { FanBeam, Parallel, Image, Boundary };

const char* chart_name(Chart c);
Chart chart_from_name(const std::string& s);

// Uniform sample axis: nodes origin + i*step, i in [0, n). Periodic axes wrap
// with period n*step.
struct Axis {
    double origin = 0.0;
    double step = 1.0;
    int n = 0;
    bool periodic = false;

    double node(int i) const { return origin + i * step; }
    double span() const { return n * step; }
};

// Row-major scalar field over an axis pair; ax1 indexes rows (s/w/x),
// ax2 columns (alpha/p/y).
struct Grid2 {
    Chart chart = Chart::Image;
    Axis ax1, ax2;
    double kappa = 0.0;
    double R = 1.0;
    std::vector<double> v;

    Grid2() = default;
    Grid2(Chart c, Axis a1, Axis a2, double kap, double radius)
        : chart(c), ax1(a1), ax2(a2), kappa(kap), R(radius),
          v(static_cast<size_t>(a1.n) * a2.n, 0.0) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) * ax2.n + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * ax2.n + j]; }
    size_t size() const { return v.size(); }
};

// Square pixel-center grid over [-R, R]^2; values are zero outside the disk.
Grid2 make_image_grid(int n, double R, double kappa);

// Separable Lanczos-3 interpolation at physical coordinates (u1, u2).
// Out-of-range taps of non-periodic axes are dropped and the kernel weights
// renormalized, so constants are reproduced exactly everywhere.
double lanczos3(const Grid2& g, double u1, double u2);

// One-axis Lanczos-3 weights for x relative to floor(x): fills w[6] covering
// nodes floor(x)-2 .. floor(x)+3 and returns floor(x).
int lanczos3_weights(double x, double w[6]);

void write_grid_bin(const Grid2& g, const std::string& path);
Grid2 read_grid_bin(const std::string& path);
void write_grid_csv(const Grid2& g, const std::string& path);
// 8-bit PGM, linear min-max scaling recorded in a header comment.
void write_grid_pgm(const Grid2& g, const std::string& path);

double rel_l2_diff(const Grid2& a, const Grid2& b);

}  // namespace ccd
