#include "ccd/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include <mutex>

#include "ccd/kernels.hpp"
#include "ccd/log.hpp"

namespace ccd {

namespace {
std::mutex warn_mutex;
std::vector<std::string> warn_list;
}  // namespace

void log_warning(const std::string& msg) {
    std::lock_guard<std::mutex> lk(warn_mutex);
    warn_list.push_back(msg);
}

std::vector<std::string> drain_warnings() {
    std::lock_guard<std::mutex> lk(warn_mutex);
    std::vector<std::string> out;
    out.swap(warn_list);
    return out;
}

size_t warning_count() {
    std::lock_guard<std::mutex> lk(warn_mutex);
    return warn_list.size();
}

const char* chart_name(Chart c) {
    switch (c) {
        case Chart::FanBeam: return "fan";
        case Chart::Parallel: return "parallel";
        case Chart::Image: return "image";
        case Chart::Boundary: return "boundary";
    }
    return "?";
}

Chart chart_from_name(const std::string& s) {
    if (s == "fan") return Chart::FanBeam;
    if (s == "parallel") return Chart::Parallel;
    if (s == "image") return Chart::Image;
    if (s == "boundary") return Chart::Boundary;
    throw std::invalid_argument("unknown chart: " + s);
}

Grid2 make_image_grid(int n, double R, double kappa) {
    if (n < 2) throw std::invalid_argument("image grid needs n >= 2");
    double step = 2.0 * R / n;
    Axis ax{-R + 0.5 * step, step, n, false};
    return Grid2(Chart::Image, ax, ax, kappa, R);
}

namespace {

// sinc(pi x) * sinc(pi x / 3) on |x| < 3
inline double lanczos_kernel(double x) {
    if (x == 0.0) return 1.0;
    double ax = std::abs(x);
    if (ax >= 3.0) return 0.0;
    double px = 3.14159265358979323846 * x;
    return 3.0 * std::sin(px) * std::sin(px / 3.0) / (px * px);
}

}  // namespace

int lanczos3_weights(double x, double w[6]) {
    int j0 = static_cast<int>(std::floor(x));
    double f = x - j0;
    for (int k = 0; k < 6; ++k) w[k] = lanczos_kernel(f - (k - 2));
    return j0;
}

double lanczos3(const Grid2& g, double u1, double u2) {
    double x1 = (u1 - g.ax1.origin) / g.ax1.step;
    double x2 = (u2 - g.ax2.origin) / g.ax2.step;
    double w1[6], w2[6];
    int i0 = lanczos3_weights(x1, w1);
    int j0 = lanczos3_weights(x2, w2);

    int idx1[6], idx2[6];
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < 6; ++k) {
        int i = i0 - 2 + k;
        if (g.ax1.periodic) {
            i %= g.ax1.n;
            if (i < 0) i += g.ax1.n;
        } else if (i < 0 || i >= g.ax1.n) {
            i = -1;
            w1[k] = 0.0;
        }
        idx1[k] = i;
        s1 += w1[k];
        int j = j0 - 2 + k;
        if (g.ax2.periodic) {
            j %= g.ax2.n;
            if (j < 0) j += g.ax2.n;
        } else if (j < 0 || j >= g.ax2.n) {
            j = -1;
            w2[k] = 0.0;
        }
        idx2[k] = j;
        s2 += w2[k];
    }
    if (s1 == 0.0 || s2 == 0.0) return 0.0;
    double acc = 0.0;
    for (int a = 0; a < 6; ++a) {
        if (idx1[a] < 0 || w1[a] == 0.0) continue;
        double row = 0.0;
        const double* base = g.v.data() + static_cast<size_t>(idx1[a]) * g.ax2.n;
        for (int b = 0; b < 6; ++b) {
            if (idx2[b] < 0) continue;
            row += w2[b] * base[idx2[b]];
        }
        acc += w1[a] * row;
    }
    return acc / (s1 * s2);
}

namespace {

nlohmann::json axis_json(const Axis& a) {
    return {{"origin", a.origin}, {"step", a.step}, {"n", a.n}, {"periodic", a.periodic}};
}

Axis axis_from_json(const nlohmann::json& j) {
    return {j.at("origin").get<double>(), j.at("step").get<double>(), j.at("n").get<int>(),
            j.at("periodic").get<bool>()};
}

}  // namespace

void write_grid_bin(const Grid2& g, const std::string& path) {
    nlohmann::json h = {
        {"chart", chart_name(g.chart)},
        {"n1", g.ax1.n},
        {"n2", g.ax2.n},
        {"ranges",
         {{g.ax1.origin, g.ax1.origin + g.ax1.span()}, {g.ax2.origin, g.ax2.origin + g.ax2.span()}}},
        {"kappa", g.kappa},
        {"R", g.R},
        {"axes", {axis_json(g.ax1), axis_json(g.ax2)}},
    };
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << h.dump() << "\n";
    static_assert(sizeof(double) == 8);
    f.write(reinterpret_cast<const char*>(g.v.data()), static_cast<std::streamsize>(8 * g.v.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Grid2 read_grid_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(f, line);
    nlohmann::json h = nlohmann::json::parse(line);
    Grid2 g;
    g.chart = chart_from_name(h.at("chart").get<std::string>());
    g.ax1 = axis_from_json(h.at("axes")[0]);
    g.ax2 = axis_from_json(h.at("axes")[1]);
    g.kappa = h.at("kappa").get<double>();
    g.R = h.at("R").get<double>();
    g.v.resize(static_cast<size_t>(g.ax1.n) * g.ax2.n);
    f.read(reinterpret_cast<char*>(g.v.data()), static_cast<std::streamsize>(8 * g.v.size()));
    if (!f) throw std::runtime_error("truncated grid file: " + path);
    return g;
}

void write_grid_csv(const Grid2& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "# chart=" << chart_name(g.chart) << " n1=" << g.ax1.n << " n2=" << g.ax2.n
      << " kappa=" << g.kappa << " R=" << g.R << "\n";
    f.precision(17);
    for (int i = 0; i < g.ax1.n; ++i) {
        for (int j = 0; j < g.ax2.n; ++j) {
            f << g.at(i, j);
            f << (j + 1 == g.ax2.n ? '\n' : ',');
        }
    }
}

void write_grid_pgm(const Grid2& g, const std::string& path) {
    double lo = g.v.empty() ? 0.0 : g.v[0], hi = lo;
    for (double x : g.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    // image rows run top to bottom: flip ax2 so larger coordinates sit higher
    f << "P5\n# min=" << lo << " max=" << hi << "\n" << g.ax1.n << " " << g.ax2.n << "\n255\n";
    std::vector<uint8_t> row(g.ax1.n);
    for (int j = g.ax2.n - 1; j >= 0; --j) {
        for (int i = 0; i < g.ax1.n; ++i)
            row[i] = static_cast<uint8_t>(std::lround((g.at(i, j) - lo) * scale));
        f.write(reinterpret_cast<const char*>(row.data()), g.ax1.n);
    }
}

double rel_l2_diff(const Grid2& a, const Grid2& b) {
    if (a.v.size() != b.v.size()) throw std::invalid_argument("rel_l2_diff: size mismatch");
    std::vector<double> d(a.v.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = a.v[i] - b.v[i];
    const auto& K = kernels::active();
    double num = K.sumsq(d.data(), d.size());
    double den = K.sumsq(b.v.data(), b.v.size());
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace ccd
