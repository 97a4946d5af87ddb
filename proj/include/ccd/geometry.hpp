#pragma once

#include <complex>
#include <functional>

// Closed-form differential geometry of the constant-curvature disk (D_R, g_kappa),
// with g_kappa = c(z)^-2 |dz|^2, c(z) = 1 + kappa|z|^2, Gauss curvature 4*kappa.
//
// Conventions used by every module in this project:
//  * Boundary arclength s in [0, L), Gamma(s) = R exp(2*pi*i*s/L), counterclockwise.
//  * Fiber angle alpha measured from the inward normal, positive counterclockwise.
//    The chart vector is v = c(Gamma(s)) exp(i(2*pi*s/L + pi + alpha)); inward
//    directions have |alpha| <= pi/2. On the full boundary sphere bundle the fiber
//    angle a runs over [-pi/2, 3*pi/2), the inward half being the first half.
//  * Interior unit directions are stored as the Euclidean angle theta of the
//    velocity; the metric-unit vector is c(z) exp(i*theta).
//  * v_perp = i*v (rotation by +pi/2), so v_perp^flat has Euclidean components
//    c(z)^-1 (-sin theta, cos theta).
//  * All lengths and times are metric (g_kappa) quantities.

namespace ccd {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Inward-pointing boundary configuration (a point of the geodesic space).
struct FanBeamPoint {
    double s;      // boundary arclength, periodic mod L
    double alpha;  // angle from inward normal, |alpha| <= pi/2
};

// Boundary configuration with unrestricted fiber angle a in [-pi/2, 3*pi/2).
struct BoundaryDir {
    double s;
    double a;
};

// Generalized parallel coordinates: w periodic mod L, p in [0, L/2].
struct ParallelPoint {
    double w;
    double p;
};

struct InteriorPoint {
    cplx z;        // |z| <= R
    double theta;  // Euclidean direction angle of the unit tangent
};

// Scalar Jacobi data along a geodesic (curvature-constant, so (x,v)-independent).
struct Jacobi {
    double a, b;    // a(0)=1, b(0)=0
    double da, db;  // time derivatives; Wronskian a*db - b*da == 1
};

// Matrix of the scattering differential in the (H, V) frame:
//   dS(H) = hh*H' + hv*V',  dS(V) = vh*H' + vv*V'   (primes at S(x,v)).
struct ScatteringJacobian {
    double hh, hv, vh, vv;
    double det() const { return hh * vv - hv * vh; }
};

struct FrameFields {
    double X[3];      // geodesic generator in (x, y, theta)
    double Xperp[3];  // [X, V]
    double V[3];      // fiber rotation
};

struct TraceResult {
    double s;  // boundary arclength at the crossing
    double a;  // fiber angle of the ray direction there (inward when tracing back)
    double t;  // time travelled from the start point to the crossing (>= 0)
    bool ok;
};

class Disk {
public:
    // Throws std::invalid_argument unless R > 0 and |kappa*R^2| < 1.
    Disk(double radius, double kappa);

    double R() const { return R_; }
    double kappa() const { return kappa_; }
    double L() const { return L_; }    // boundary length 2*pi*R/(1+kappa R^2)
    double II() const { return II_; }  // boundary second fundamental form (1-kappa R^2)/R

    double c(cplx z) const { return 1.0 + kappa_ * std::norm(z); }
    cplx boundary_point(double s) const;            // Gamma(s)
    double wrap_s(double s) const;                  // reduce mod L into [0, L)
    double mu(double a) const { return std::cos(a); }  // g(v, nu) on the boundary

private:
    double R_, kappa_, L_, II_;
};

// Jacobi fields of g_kappa: solutions of c'' + 4*kappa*c = 0.
Jacobi jacobi(const Disk& d, double t);

// RK4 integration of c'' + K(t)*c = 0 from (value, slope) = (c0, dc0) at t = 0.
// For the disk metric K is the constant 4*kappa; an arbitrary curvature profile
// is accepted so the same oracle can exercise non-constant models.
std::pair<double, double> jacobi_ode(const std::function<double(double)>& K, double t,
                                     double c0, double dc0, double step = 1e-3);
std::pair<double, double> jacobi_ode(const Disk& d, double t, double c0, double dc0,
                                     double step = 1e-3);

// Max residual of the addition laws a(t +- t') = a a' -+ 4k b b', b(t +- t') = b a' +- a b'.
double trig_identity_residual(const Disk& d, double t, double tp, int sign);

// First exit time of the geodesic entering at angle alpha; tau(+-pi/2) = 0.
double exit_time(const Disk& d, double alpha);

// The conformal-factor-free radial coordinate x(t) of the model geodesic.
double x_of_t(const Disk& d, double t);

// gamma_{s,alpha}(t) with its direction angle. Requires 0 <= t <= tau + eps_clip,
// eps_clip = 1e-12 * R; throws std::domain_error otherwise.
InteriorPoint geodesic_point(const Disk& d, FanBeamPoint q, double t);

// Arclength of the second endpoint of gamma_{s,alpha}.
double endpoint(const Disk& d, FanBeamPoint q);

// The boundary-angle map s(alpha) = atan(((1-R^2 k)/(1+R^2 k)) tan alpha) and inverse,
// with the continuous tangential limits +-pi/2.
double frak_s(const Disk& d, double alpha);
double frak_s_inv(const Disk& d, double v);

ParallelPoint fb_to_parallel(const Disk& d, FanBeamPoint q);
FanBeamPoint parallel_to_fb(const Disk& d, ParallelPoint q);

// Extended scattering relation on the full boundary sphere bundle (an involution).
BoundaryDir scattering(const Disk& d, BoundaryDir q);
// S_A(s, alpha) = (s', -alpha): entry configuration of the reversed geodesic.
FanBeamPoint antipodal_scattering(const Disk& d, FanBeamPoint q);

// Differential of S in the (H, V) frame at an inward q. Throws std::domain_error
// at tangential configurations (mu o S = 0).
ScatteringJacobian scattering_differential(const Disk& d, FanBeamPoint q);

// Coefficients of X, X_perp = [X,V], V at (x, y, theta):
//   X      = (c cos, c sin, 2k(x sin - y cos)),
//   X_perp = (c sin, -c cos, -2k(x cos + y sin)).
FrameFields vector_fields(const Disk& d, double x, double y, double theta);

// RK4 trace of the geodesic through (z, theta) to its boundary crossing,
// backward (toward the entry configuration) or forward (toward the exit).
// Step h = min(1e-2, tau_max/64); crossing located by bisection on |z|^2 - R^2.
TraceResult trace_to_entry(const Disk& d, cplx z, double theta);
TraceResult trace_to_exit(const Disk& d, cplx z, double theta);

// Batched backward trace; out_s/out_a as in TraceResult, NaN on failure.
// Dispatches to the AVX2 path when available (bit-compatible step sequence).
void trace_to_entry_batch(const Disk& d, const double* x, const double* y,
                          const double* theta, int n, double* out_s, double* out_a);

// Reduce a full-circle fiber angle into [-pi/2, 3*pi/2).
double wrap_fiber(double a);

}  // namespace ccd
