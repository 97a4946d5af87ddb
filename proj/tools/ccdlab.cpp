// ccdlab: experiment runner for the constant-curvature-disk X-ray laboratory.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccd/experiments.hpp"
#include "ccd/kernels.hpp"
#include "ccd/log.hpp"
#include "ccd/threads.hpp"

namespace {

// byte offset -> 1-based line:column for config error messages
std::pair<int, int> line_of(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constant-curvature disk X-ray transform laboratory"};
    std::string config_path, out_dir = "out", experiment;
    int threads = 1;
    bool quick = false, no_simd = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker thread budget");
    app.add_option("--experiment", experiment,
                   "experiment id (overrides config): charts, forward-gallery, wavepacket, "
                   "bowties, table1, rates, aliasing, tiling, invert");
    app.add_flag("--quick", quick, "halved resolutions for CI runs");
    app.add_flag("--no-simd", no_simd, "force the scalar kernel path");
    CLI11_PARSE(app, argc, argv);

    ccd::set_thread_budget(threads);
    if (no_simd) ccd::kernels::use_scalar_only(true);

    nlohmann::json config = nlohmann::json::object();
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "config error: cannot open " << config_path << "\n";
            return 1;
        }
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        try {
            config = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            auto [line, col] = line_of(text, e.byte);
            std::cerr << "config error: " << config_path << ":" << line << ":" << col << ": "
                      << e.what() << "\n";
            return 1;
        }
    }
    if (!experiment.empty()) config["experiment"] = experiment;
    if (!config.contains("experiment")) {
        std::cerr << "config error: no experiment id (use --experiment or the config file)\n";
        return 1;
    }
    if (config.contains("out") && out_dir == "out") out_dir = config["out"].get<std::string>();

    ccd::exp::RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.quick = quick;
    ctx.config = config;
    std::string id = config["experiment"].get<std::string>();

    auto t0 = std::chrono::steady_clock::now();
    try {
        ccd::exp::run_experiment(id, ctx);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ctx.manifest["config"] = config;
    ctx.manifest["tool"] = "ccdlab 1.0";
    ctx.manifest["quick"] = quick;
    ctx.manifest["threads"] = threads;
    ctx.manifest["kernel_dispatch"] = ccd::kernels::active().name;
    ctx.manifest["seed"] = config.value("seed", 0);
    ctx.manifest["wall_seconds"] = secs;
    ctx.manifest["tolerances"] = {{"chart_round_trip", 1e-12},
                                  {"wronskian", 1e-10},
                                  {"b_number_match", 0.02},
                                  {"exact_inversion_rel_l2", 0.05}};
    ctx.manifest["warnings"] = ccd::drain_warnings();
    std::ofstream mf((std::filesystem::path(out_dir) / "manifest.json").string());
    mf << ctx.manifest.dump(2) << "\n";

    std::cout << id << ": done in " << secs << " s, outputs in " << out_dir << "\n";
    return 0;
}
