#pragma once

#include <string>

#include <json.hpp>

#include "ccd/grid.hpp"
#include "ccd/phantom.hpp"
#include "ccd/sampling.hpp"

// Configuration-driven experiment runners behind the ccdlab tool. Every run
// writes its numeric layers (CSV / binary grids / PGM) plus a manifest.

namespace ccd::exp {

struct RunContext {
    std::string out_dir;
    bool quick = false;
    nlohmann::json config;
    nlohmann::json manifest;  // filled during the run
};

// Known experiment ids: charts, forward-gallery, wavepacket, bowties, table1,
// rates, aliasing, tiling, invert. Throws std::invalid_argument on config
// errors and std::runtime_error on numerical failures.
void run_experiment(const std::string& id, RunContext& ctx);

// Config helpers shared with the CLI.
Phantom phantom_from_config(const nlohmann::json& cfg, const Disk& d);
Sigma sigma_from_config(const nlohmann::json& cfg);
void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where);

// Analysis helpers (also used by the acceptance suite).
double energy_in_disk(const Grid2& img, cplx center, double radius);
double energy_outside_disk(const Grid2& img, cplx center, double radius);
double max_abs_in_disk(const Grid2& img, cplx center, double radius);
double max_abs_outside_disk(const Grid2& img, cplx center, double radius);

// Largest windowed-FT peak within `radius` of (f1, f2); nullptr if none.
const SpectralPeak* peak_near(const WindowedFT& w, double f1, double f2, double radius);

}  // namespace ccd::exp
