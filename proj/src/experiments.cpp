#include "ccd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ccd/canrel.hpp"
#include "ccd/fft.hpp"
#include "ccd/forward.hpp"
#include "ccd/inversion.hpp"
#include "ccd/log.hpp"

namespace ccd::exp {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string tag(double kappa) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.2f", kappa);
    std::string s(buf);
    for (auto& c : s)
        if (c == '+') c = 'p';
        else if (c == '-') c = 'm';
        else if (c == '.') c = '_';
    return s;
}

std::vector<double> kappas_from(const nlohmann::json& cfg, std::vector<double> dflt) {
    if (cfg.contains("kappas")) return cfg.at("kappas").get<std::vector<double>>();
    return dflt;
}

double radius_from(const nlohmann::json& cfg) { return cfg.value("R", 1.0); }

nlohmann::json options_of(const nlohmann::json& cfg) {
    return cfg.value("options", nlohmann::json::object());
}

void emit_grid(RunContext& ctx, const Grid2& g, const std::string& stem) {
    write_grid_bin(g, join(ctx.out_dir, stem + ".bin"));
    write_grid_pgm(g, join(ctx.out_dir, stem + ".pgm"));
    ctx.manifest["artifacts"].push_back(stem + ".bin");
}

// |FFT| of a grid with axes in continuous-frequency units (fftshifted).
Grid2 spectrum_of(const Grid2& g) {
    int n1 = g.ax1.n, n2 = g.ax2.n;
    std::vector<std::complex<double>> buf(g.v.begin(), g.v.end());
    fft::fft2(buf, n1, n2, false);
    double df1 = 2.0 * kPi / (n1 * g.ax1.step), df2 = 2.0 * kPi / (n2 * g.ax2.step);
    Grid2 out(g.chart, Axis{-df1 * (n1 / 2), df1, n1, false},
              Axis{-df2 * (n2 / 2), df2, n2, false}, g.kappa, g.R);
    double amp = g.ax1.step * g.ax2.step;
    for (int a = 0; a < n1; ++a) {
        int ka = (a + n1 / 2) % n1;
        for (int b = 0; b < n2; ++b) {
            int kb = (b + n2 / 2) % n2;
            out.at(a, b) = std::abs(buf[static_cast<size_t>(ka) * n2 + kb]) * amp;
        }
    }
    return out;
}

}  // namespace

void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
}

Phantom phantom_from_config(const nlohmann::json& cfg, const Disk& d) {
    nlohmann::json p = cfg.value("phantom", nlohmann::json{{"kind", "f0"}});
    std::string kind = p.value("kind", "f0");
    if (kind == "f0") {
        require_keys(p, {"kind"}, "phantom");
        return phantom_f0();
    }
    if (kind == "f1") {
        require_keys(p, {"kind"}, "phantom");
        return phantom_f1(d);
    }
    if (kind == "f4") {
        require_keys(p, {"kind"}, "phantom");
        return phantom_f4(d);
    }
    if (kind == "gaussian_sum") {
        require_keys(p, {"kind", "blobs"}, "phantom");
        std::vector<GaussianBlob> blobs;
        for (const auto& b : p.at("blobs")) {
            require_keys(b, {"x", "y", "weight", "sigma"}, "phantom.blobs[]");
            blobs.push_back({{b.at("x").get<double>(), b.at("y").get<double>()},
                             b.value("weight", 1.0),
                             b.at("sigma").get<double>()});
        }
        return Phantom::gaussians(blobs);
    }
    if (kind == "coherent_sum") {
        require_keys(p, {"kind", "packets"}, "phantom");
        std::vector<WavePacket> ps;
        for (const auto& q : p.at("packets")) {
            require_keys(q, {"s", "alpha", "u", "h"}, "phantom.packets[]");
            ps.push_back(conormal_packet(d, {q.at("s").get<double>(), q.at("alpha").get<double>()},
                                         q.at("u").get<double>(), q.value("h", 0.01)));
        }
        return Phantom::packets(ps);
    }
    throw std::invalid_argument("unknown phantom kind: " + kind);
}

Sigma sigma_from_config(const nlohmann::json& cfg) {
    std::string s = cfg.value("sigma", "Sigma1");
    if (s == "Sigma1") return Sigma::sigma1();
    if (s == "Sigma2") return Sigma::sigma2();
    if (s == "Sigma3") return Sigma::sigma3(cfg.value("r0", 0.75));
    throw std::invalid_argument("unknown sigma: " + s);
}

double energy_in_disk(const Grid2& img, cplx center, double radius) {
    double acc = 0.0, area = img.ax1.step * img.ax2.step;
    for (int i = 0; i < img.ax1.n; ++i)
        for (int j = 0; j < img.ax2.n; ++j) {
            cplx z(img.ax1.node(i), img.ax2.node(j));
            if (std::abs(z - center) <= radius) acc += img.at(i, j) * img.at(i, j);
        }
    return acc * area;
}

double energy_outside_disk(const Grid2& img, cplx center, double radius) {
    double acc = 0.0, area = img.ax1.step * img.ax2.step;
    for (int i = 0; i < img.ax1.n; ++i)
        for (int j = 0; j < img.ax2.n; ++j) {
            cplx z(img.ax1.node(i), img.ax2.node(j));
            if (std::abs(z - center) > radius) acc += img.at(i, j) * img.at(i, j);
        }
    return acc * area;
}

double max_abs_in_disk(const Grid2& img, cplx center, double radius) {
    double m = 0.0;
    for (int i = 0; i < img.ax1.n; ++i)
        for (int j = 0; j < img.ax2.n; ++j)
            if (std::abs(cplx(img.ax1.node(i), img.ax2.node(j)) - center) <= radius)
                m = std::max(m, std::abs(img.at(i, j)));
    return m;
}

double max_abs_outside_disk(const Grid2& img, cplx center, double radius) {
    double m = 0.0;
    for (int i = 0; i < img.ax1.n; ++i)
        for (int j = 0; j < img.ax2.n; ++j)
            if (std::abs(cplx(img.ax1.node(i), img.ax2.node(j)) - center) > radius)
                m = std::max(m, std::abs(img.at(i, j)));
    return m;
}

const SpectralPeak* peak_near(const WindowedFT& w, double f1, double f2, double radius) {
    const SpectralPeak* best = nullptr;
    for (const auto& p : w.peaks) {
        double dd = std::min(std::hypot(p.f1 - f1, p.f2 - f2), std::hypot(p.f1 + f1, p.f2 + f2));
        if (dd <= radius && (!best || p.mag > best->mag)) best = &p;
    }
    return best;
}

namespace {

void run_charts(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"n_iso", "n_pts", "raster"}, "options");
    int n_iso = opt.value("n_iso", 13);
    int n_pts = opt.value("n_pts", ctx.quick ? 200 : 600);
    int raster = opt.value("raster", ctx.quick ? 256 : 512);
    double R = radius_from(ctx.config);

    std::ofstream csv(join(ctx.out_dir, "chart_isolines.csv"));
    csv << "kappa,family,iso,index,c1,c2\n";
    csv.precision(12);
    for (double k : kappas_from(ctx.config, {-0.7, -0.3, 0.0, 0.3, 0.7})) {
        Disk d(R, k);
        Grid2 img_fb2wp(Chart::Parallel, Axis{0, d.L() / raster, raster, true},
                        Axis{0, d.L() / 2 / raster, raster, false}, k, R);
        Grid2 img_wp2fb(Chart::FanBeam, Axis{0, d.L() / raster, raster, true},
                        Axis{-kPi / 2, kPi / raster, raster, false}, k, R);
        auto plot = [&](Grid2& img, double c1, double c2) {
            int i = static_cast<int>(std::floor((c1 - img.ax1.origin) / img.ax1.step));
            int j = static_cast<int>(std::floor((c2 - img.ax2.origin) / img.ax2.step));
            i = ((i % img.ax1.n) + img.ax1.n) % img.ax1.n;
            if (j >= 0 && j < img.ax2.n) img.at(i, j) = 1.0;
        };
        for (int m = 0; m < n_iso; ++m) {
            double s0 = d.L() * m / n_iso;
            double a0 = -kPi / 2 + kPi * m / (n_iso - 1.0);
            double p0 = d.L() / 2 * m / (n_iso - 1.0);
            for (int t = 0; t <= n_pts; ++t) {
                double al = -kPi / 2 + kPi * t / n_pts;
                ParallelPoint wp = fb_to_parallel(d, {s0, al});
                csv << k << ",iso_s," << s0 << "," << t << "," << wp.w << "," << wp.p << "\n";
                plot(img_fb2wp, wp.w, wp.p);

                double ss = d.L() * t / n_pts;
                ParallelPoint wp2 = fb_to_parallel(d, {ss, a0});
                csv << k << ",iso_alpha," << a0 << "," << t << "," << wp2.w << "," << wp2.p << "\n";
                plot(img_fb2wp, wp2.w, wp2.p);

                double pp = d.L() / 2 * t / n_pts;
                FanBeamPoint fb = parallel_to_fb(d, {s0, pp});
                csv << k << ",iso_w," << s0 << "," << t << "," << fb.s << "," << fb.alpha << "\n";
                plot(img_wp2fb, fb.s, fb.alpha);

                FanBeamPoint fb2 = parallel_to_fb(d, {ss, p0});
                csv << k << ",iso_p," << p0 << "," << t << "," << fb2.s << "," << fb2.alpha << "\n";
                plot(img_wp2fb, fb2.s, fb2.alpha);
            }
        }
        emit_grid(ctx, img_fb2wp, "charts_fb_in_wp_" + tag(k));
        emit_grid(ctx, img_wp2fb, "charts_wp_in_fb_" + tag(k));
    }
}

void run_forward_gallery(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"n1", "n2"}, "options");
    int n1 = opt.value("n1", ctx.quick ? 256 : 512);
    int n2 = opt.value("n2", ctx.quick ? 200 : 400);
    double R = radius_from(ctx.config);
    auto ks = kappas_from(ctx.config, {-0.7, -0.3, 0.0, 0.3, 0.7});
    for (double k : ks) {
        Disk d(R, k);
        Phantom f = phantom_from_config(ctx.config, d);
        emit_grid(ctx, xray_transform(d, f, Chart::FanBeam, n1, n2), "If_fan_" + tag(k));
        emit_grid(ctx, xray_transform(d, f, Chart::Parallel, n1, n2), "If_parallel_" + tag(k));
    }
    Disk d0(R, ks[0]);
    emit_grid(ctx, phantom_from_config(ctx.config, d0).rasterize(ctx.quick ? 128 : 256, R, ks[0]),
              "phantom");
}

void run_wavepacket(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"C", "sigma_w"}, "options");
    double C = opt.value("C", 1.5);
    double sw = opt.value("sigma_w", 0.2);
    double R = radius_from(ctx.config);

    std::ofstream pred(join(ctx.out_dir, "wavepacket_predictions.csv"));
    pred << "kappa,packet,branch,chart,base1,base2,eta1,eta2,peak1,peak2,peak_mag\n";
    pred.precision(12);
    for (double k : kappas_from(ctx.config, {0.3, -0.3})) {
        Disk d(R, k);
        nlohmann::json pc = ctx.config.contains("phantom")
                                ? ctx.config
                                : nlohmann::json{{"phantom", {{"kind", "f1"}}}};
        Phantom f = phantom_from_config(pc, d);
        emit_grid(ctx, f.rasterize(ctx.quick ? 128 : 256, R, k), "f1_" + tag(k));
        for (Chart ch : {Chart::FanBeam, Chart::Parallel}) {
            SamplingPlan plan = make_plan(d, ch, Sigma::sigma1(), f.band_limit(), C, C);
            Grid2 sino = xray_transform(d, f, ch, plan.n1, plan.n2);
            std::string cn = ch == Chart::FanBeam ? "fan" : "parallel";
            emit_grid(ctx, sino, "If1_" + cn + "_" + tag(k));
            int pid = 0;
            for (const auto& w : f.packet_list()) {
                SpaceCovector om{w.x0, w.xi0x / w.h, w.xi0y / w.h};
                CanonicalGraphs g = canonical_graph(d, om);
                for (int side = 0; side < 2; ++side) {
                    const GraphBranch& br = side == 0 ? g.plus : g.minus;
                    DataCovector dc = branch_covector(d, br, ch);
                    WindowedFT wf = windowed_ft(sino, dc.b1, dc.b2, sw);
                    const SpectralPeak* pk = peak_near(wf, dc.c1, dc.c2, 3.0 / std::sqrt(w.h));
                    pred << k << "," << pid << "," << (side == 0 ? "+" : "-") << "," << cn << ","
                         << dc.b1 << "," << dc.b2 << "," << dc.c1 << "," << dc.c2 << ","
                         << (pk ? pk->f1 : 0.0) << "," << (pk ? pk->f2 : 0.0) << ","
                         << (pk ? pk->mag : 0.0) << "\n";
                }
                ++pid;
            }
        }
        // bowtie overlays at the C+ base of each packet
        std::ofstream bt(join(ctx.out_dir, "wavepacket_bowties_" + tag(k) + ".csv"));
        bt << "packet,chart,index,c1,c2\n";
        bt.precision(12);
        int pid = 0;
        for (const auto& w : f.packet_list()) {
            SpaceCovector om{w.x0, w.xi0x / w.h, w.xi0y / w.h};
            CanonicalGraphs g = canonical_graph(d, om);
            for (Chart ch : {Chart::FanBeam, Chart::Parallel}) {
                Bowtie b = bowtie(d, ch, g.plus.q, Sigma::sigma1(), 256);
                int idx = 0;
                for (auto& smp : b.samples)
                    bt << pid << "," << (ch == Chart::FanBeam ? "fan" : "parallel") << "," << idx++
                       << "," << smp.first << "," << smp.second << "\n";
            }
            ++pid;
        }
    }
}

void run_bowties(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"n_t"}, "options");
    int n_t = opt.value("n_t", 200);
    double R = radius_from(ctx.config);
    auto ks = kappas_from(ctx.config, {-0.6, -0.3, 0.0, 0.3, 0.6});
    std::ofstream csv(join(ctx.out_dir, "bowtie_polylines.csv"));
    csv << "kappa,sigma,chart,alpha,index,c1,c2\n";
    csv.precision(12);
    for (double k : ks) {
        Disk d(R, k);
        for (Sigma sig : {Sigma::sigma1(), Sigma::sigma2(), Sigma::sigma3()}) {
            for (Chart ch : {Chart::FanBeam, Chart::Parallel}) {
                for (int j = 0; j < 5; ++j) {
                    double al = j * kPi / 9.0;
                    Bowtie b = bowtie(d, ch, {0.0, al}, sig, n_t);
                    int idx = 0;
                    for (auto& s : b.samples)
                        csv << k << "," << sig.name() << ","
                            << (ch == Chart::FanBeam ? "fan" : "parallel") << "," << al << ","
                            << idx++ << "," << s.first << "," << s.second << "\n";
                }
            }
        }
    }
    write_table_csv(join(ctx.out_dir, "bowtie_boxes.csv"), ks, R, true);
    ctx.manifest["artifacts"].push_back("bowtie_polylines.csv");
}

void run_table1(RunContext& ctx) {
    require_keys(options_of(ctx.config), {}, "options");
    double R = radius_from(ctx.config);
    auto ks = kappas_from(ctx.config, {-0.6, -0.3, 0.0, 0.3, 0.6});
    write_table_csv(join(ctx.out_dir, "table1.csv"), ks, R, true);
    write_table_csv(join(ctx.out_dir, "table1_fine.csv"), ks, R, false);
    ctx.manifest["artifacts"].push_back("table1.csv");
}

void run_rates(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"factors", "n", "n_theta"}, "options");
    std::vector<double> factors = opt.value("factors", std::vector<double>{1.0, 0.5, 1.0 / 3.0});
    int n = opt.value("n", ctx.quick ? 128 : 256);
    int n_theta = opt.value("n_theta", ctx.quick ? 256 : 512);
    double R = radius_from(ctx.config);
    double k = kappas_from(ctx.config, {-0.3})[0];
    double B = ctx.config.value("B", 100.0);
    Disk d(R, k);
    Phantom f = phantom_from_config(ctx.config, d);
    Sigma sig = sigma_from_config(ctx.config);
    SamplingPlan base = make_plan(d, Chart::FanBeam, sig, B, 1.0, 1.0);
    Grid2 ref = f.rasterize(n, R, k);

    std::ofstream csv(join(ctx.out_dir, "rates_errors.csv"));
    csv << "factor,n1,n2,rel_l2\n";
    csv.precision(12);
    double prev = -1.0;
    bool increasing = true;
    for (double c : factors) {
        SamplingPlan p = make_plan(d, Chart::FanBeam, sig, B, c, c);
        Grid2 sino = xray_transform(d, f, Chart::FanBeam, p.n1, p.n2);
        Grid2 up = resample_chart(d, sino, Chart::FanBeam, 2 * base.n1, 2 * base.n2);
        ReconstructionConfig cfg;
        cfg.n = n;
        cfg.n_theta = n_theta;
        cfg.upsample = 1;  // the data sits on the common fine grid already
        Grid2 rec = invert(d, up, cfg);
        double err = rel_l2_diff(rec, ref);
        csv << c << "," << p.n1 << "," << p.n2 << "," << err << "\n";
        emit_grid(ctx, rec, "rates_rc_" + std::to_string(p.n1) + "x" + std::to_string(p.n2));
        emit_grid(ctx, spectrum_of(sino), "rates_dataFT_" + std::to_string(p.n1));
        if (prev >= 0.0 && err <= prev) increasing = false;
        prev = err;
    }
    ctx.manifest["error_ranking_increasing"] = increasing;
    if (!increasing) throw std::runtime_error("rates: error energy not increasing with subsampling");
}

void run_aliasing(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"cases", "n", "n_theta", "s", "alpha", "u", "h"}, "options");
    int n = opt.value("n", ctx.quick ? 128 : 256);
    int n_theta = opt.value("n_theta", ctx.quick ? 256 : 512);
    double R = radius_from(ctx.config);
    double k = kappas_from(ctx.config, {0.4})[0];
    double B = ctx.config.value("B", 100.0);
    Disk d(R, k);
    double sp = opt.value("s", d.L() / 4.0), ap = opt.value("alpha", kPi / 8.0);
    double u = opt.value("u", 0.8), h = opt.value("h", 0.01);
    WavePacket pk = conormal_packet(d, {sp, ap}, u, h);
    Phantom f = Phantom::packets({pk});

    std::vector<std::pair<double, double>> cases = {{1.5, 1.5}, {1.0, 0.7}, {1.0, 0.3}, {0.4, 1.0}};
    if (opt.contains("cases")) {
        cases.clear();
        for (auto& c : opt.at("cases")) cases.emplace_back(c.at(0), c.at(1));
    }

    std::ofstream csv(join(ctx.out_dir, "aliasing_predictions.csv"));
    csv << "Cs,Ca,branch,k1,k2,verdict,x,y,dir,freq,u,lambda\n";
    csv.precision(12);
    SamplingPlan ref = make_plan(d, Chart::FanBeam, Sigma::sigma1(), B, 1.0, 1.0);
    for (auto [cs, ca] : cases) {
        SamplingPlan plan = make_plan(d, Chart::FanBeam, Sigma::sigma1(), B, cs, ca);
        for (const auto& p : predict_artifacts(d, pk, plan)) {
            const char* v = p.verdict == AliasPrediction::Unaliased ? "unaliased"
                            : p.verdict == AliasPrediction::Kernel  ? "kernel"
                                                                    : "artifact";
            csv << cs << "," << ca << "," << (p.branch > 0 ? "+" : "-") << "," << p.folded.k1
                << "," << p.folded.k2 << "," << v << "," << p.z.real() << "," << p.z.imag() << ","
                << p.direction << "," << p.freq << "," << p.u << "," << p.lambda << "\n";
        }
        Grid2 sino = xray_transform(d, f, Chart::FanBeam, plan.n1, plan.n2);
        Grid2 up = resample_chart(d, sino, Chart::FanBeam, 2 * ref.n1, 2 * ref.n2);
        ReconstructionConfig cfg;
        cfg.n = n;
        cfg.n_theta = n_theta;
        cfg.upsample = 1;
        Grid2 rec = invert(d, up, cfg);
        char stem[64];
        std::snprintf(stem, sizeof(stem), "aliasing_rc_%.1f_%.1f", cs, ca);
        emit_grid(ctx, rec, stem);
    }
    ctx.manifest["cases"] = cases.size();
}

void run_tiling(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"n", "n_theta", "factor"}, "options");
    int n = opt.value("n", ctx.quick ? 128 : 256);
    int n_theta = opt.value("n_theta", ctx.quick ? 256 : 512);
    int factor = opt.value("factor", 3);
    double R = radius_from(ctx.config);
    double k = kappas_from(ctx.config, {-0.3})[0];
    double B = ctx.config.value("B", 100.0);
    Disk d(R, k);
    nlohmann::json pc =
        ctx.config.contains("phantom") ? ctx.config : nlohmann::json{{"phantom", {{"kind", "f4"}}}};
    Phantom f = phantom_from_config(pc, d);
    SamplingPlan plan = make_plan(d, Chart::FanBeam, Sigma::sigma1(), B, 1.0, 1.0);
    int n1 = static_cast<int>(std::lround(1.2 * plan.n1));
    int n2 = static_cast<int>(std::lround(0.6 * plan.n2));
    Grid2 sino = xray_transform(d, f, Chart::FanBeam, n1, n2);
    emit_grid(ctx, sino, "tiling_data");
    emit_grid(ctx, spectrum_of(sino), "tiling_dataFT");

    auto cell = spectral_parallelogram(B, plan.b1, plan.b2);
    TilingLattice lat;
    lat.W[0] = d.L() / n1;
    lat.W[1] = 0.0;
    lat.W[2] = 0.0;
    lat.W[3] = kPi / n2;
    lat.cell = cell;
    ctx.manifest["parallelogram_tiles"] = tiling_check(lat);

    Grid2 up_box = upsample_box_lanczos(sino, factor);
    Grid2 up_par = upsample_parallelogram(sino, factor, cell);
    emit_grid(ctx, spectrum_of(up_box), "tiling_boxFT");
    emit_grid(ctx, spectrum_of(up_par), "tiling_parFT");

    ReconstructionConfig cfg;
    cfg.n = n;
    cfg.n_theta = n_theta;
    cfg.upsample = 1;
    Grid2 rec_box = invert(d, up_box, cfg);
    Grid2 rec_par = invert(d, up_par, cfg);
    emit_grid(ctx, rec_box, "tiling_rc_box");
    emit_grid(ctx, rec_par, "tiling_rc_parallelogram");

    Grid2 ref = f.rasterize(n, R, k);
    cplx x0 = f.packet_list().empty() ? cplx(0, 0) : f.packet_list()[0].x0;
    double rad = 0.25;
    double ref_e = energy_in_disk(ref, x0, rad);
    Grid2 err_box = rec_box, err_par = rec_par;
    for (size_t i = 0; i < ref.v.size(); ++i) {
        err_box.v[i] -= ref.v[i];
        err_par.v[i] -= ref.v[i];
    }
    double e_box = energy_in_disk(err_box, x0, rad), e_par = energy_in_disk(err_par, x0, rad);
    std::ofstream csv(join(ctx.out_dir, "tiling_errors.csv"));
    csv.precision(12);
    csv << "route,err_energy_near_packet,rel_err_near_packet\n";
    csv << "box," << e_box << "," << std::sqrt(e_box / ref_e) << "\n";
    csv << "parallelogram," << e_par << "," << std::sqrt(e_par / ref_e) << "\n";
    ctx.manifest["tiling_rel_err_box"] = std::sqrt(e_box / ref_e);
    ctx.manifest["tiling_rel_err_parallelogram"] = std::sqrt(e_par / ref_e);
}

void run_invert(RunContext& ctx) {
    nlohmann::json opt = options_of(ctx.config);
    require_keys(opt, {"C", "n", "n_theta"}, "options");
    double C = opt.value("C", 1.5);
    int n = opt.value("n", ctx.quick ? 128 : 256);
    int n_theta = opt.value("n_theta", ctx.quick ? 256 : 512);
    double R = radius_from(ctx.config);
    double B = ctx.config.value("B", 100.0);
    std::ofstream csv(join(ctx.out_dir, "invert_errors.csv"));
    csv << "kappa,n1,n2,rel_l2\n";
    csv.precision(12);
    for (double k : kappas_from(ctx.config, {-0.3, 0.0, 0.3})) {
        Disk d(R, k);
        Phantom f = phantom_from_config(ctx.config, d);
        SamplingPlan p = make_plan(d, Chart::FanBeam, sigma_from_config(ctx.config), B, C, C);
        Grid2 sino = xray_transform(d, f, Chart::FanBeam, p.n1, p.n2);
        ReconstructionConfig cfg;
        cfg.n = n;
        cfg.n_theta = n_theta;
        Grid2 rec = invert(d, sino, cfg);
        double err = rel_l2_diff(rec, f.rasterize(n, R, k));
        csv << k << "," << p.n1 << "," << p.n2 << "," << err << "\n";
        emit_grid(ctx, rec, "invert_rc_" + tag(k));
        ctx.manifest["rel_l2_" + tag(k)] = err;
    }
}

}  // namespace

void run_experiment(const std::string& id, RunContext& ctx) {
    require_keys(ctx.config,
                 {"experiment", "R", "kappas", "phantom", "B", "C1", "C2", "sigma", "r0", "seed",
                  "out", "options"},
                 "config");
    std::filesystem::create_directories(ctx.out_dir);
    ctx.manifest["experiment"] = id;
    ctx.manifest["artifacts"] = nlohmann::json::array();
    if (id == "charts") return run_charts(ctx);
    if (id == "forward-gallery") return run_forward_gallery(ctx);
    if (id == "wavepacket") return run_wavepacket(ctx);
    if (id == "bowties") return run_bowties(ctx);
    if (id == "table1") return run_table1(ctx);
    if (id == "rates") return run_rates(ctx);
    if (id == "aliasing") return run_aliasing(ctx);
    if (id == "tiling") return run_tiling(ctx);
    if (id == "invert") return run_invert(ctx);
    throw std::invalid_argument("unknown experiment id: " + id);
}

}  // namespace ccd::exp
