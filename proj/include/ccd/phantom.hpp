#pragma once

#include <vector>

#include "ccd/geometry.hpp"
#include "ccd/grid.hpp"

namespace ccd {

struct GaussianBlob {
    cplx center;
    double weight;
    double sigma;
};

// Coherent state sin(x . xi0/h) exp(-|x-x0|^2 / 2h); xi0 is a unit direction,
// the semiclassical frequency is xi0/h.
struct WavePacket {
    cplx x0;
    double xi0x, xi0y;
    double h;
};

class Phantom {
public:
    enum Kind { GaussianSum, CoherentSum, GridSample };

    static Phantom gaussians(std::vector<GaussianBlob> blobs);
    static Phantom packets(std::vector<WavePacket> packets);
    static Phantom from_grid(Grid2 g);

    Kind kind() const { return kind_; }
    const std::vector<GaussianBlob>& blobs() const { return blobs_; }
    const std::vector<WavePacket>& packet_list() const { return packets_; }

    double eval(cplx z) const;
    void eval_batch(const double* xs, const double* ys, size_t n, double* out) const;

    // Declared essential band limit: 3/sigma_min for gaussian sums,
    // max(|xi0|/h + 3/sqrt(h)) for packets, the grid Nyquist otherwise.
    double band_limit() const;

    // Sample onto an image grid (zero outside the disk of radius R).
    Grid2 rasterize(int n, double R, double kappa) const;

private:
    Kind kind_ = GaussianSum;
    std::vector<GaussianBlob> blobs_;
    std::vector<WavePacket> packets_;
    Grid2 grid_;
};

// A packet oscillating conormal to gamma_{s,alpha} at parameter fraction u.
WavePacket conormal_packet(const Disk& d, FanBeamPoint q, double u, double h);

// The fixed phantoms used by the experiments.
Phantom phantom_f0();                  // six sigma = 0.03 gaussians, B = 100
Phantom phantom_f1(const Disk& d);     // three coherent states, h = 0.01
Phantom phantom_f4(const Disk& d);     // one coherent state on the central chord

}  // namespace ccd
