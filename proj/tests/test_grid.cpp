#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "ccd/grid.hpp"

using namespace ccd;

TEST_CASE("axis and image grid layout") {
    Grid2 g = make_image_grid(8, 1.0, 0.3);
    CHECK(g.ax1.n == 8);
    CHECK(g.ax1.node(0) == doctest::Approx(-1.0 + 0.125));
    CHECK(g.ax1.node(7) == doctest::Approx(1.0 - 0.125));
    CHECK(g.size() == 64);
    CHECK_THROWS(make_image_grid(1, 1.0, 0.0));
}

TEST_CASE("lanczos interpolation reproduces constants exactly") {
    Axis a1{0.0, 0.1, 40, true};
    Axis a2{-1.0, 0.05, 30, false};
    Grid2 g(Chart::FanBeam, a1, a2, 0.0, 1.0);
    for (auto& x : g.v) x = 3.25;
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> u1(0.0, 4.0), u2(-1.0, -1.0 + 29 * 0.05);
    for (int i = 0; i < 500; ++i)
        CHECK(lanczos3(g, u1(rng), u2(rng)) == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("lanczos interpolation of a bandlimited sinusoid") {
    // 2x oversampled sinusoid: interior relative error at the percent level
    Axis a1{0.0, 1.0, 64, true};
    Axis a2{0.0, 1.0, 64, true};
    Grid2 g(Chart::FanBeam, a1, a2, 0.0, 1.0);
    // grid-periodic tones inside the half-Nyquist band
    double f1 = 2.0 * 3.14159265358979 * 12.0 / 64.0, f2 = 2.0 * 3.14159265358979 * 9.0 / 64.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) g.at(i, j) = std::sin(f1 * i) * std::cos(f2 * j);
    double num = 0.0, den = 0.0;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 64.0);
    for (int i = 0; i < 4000; ++i) {
        double x = u(rng), y = u(rng);
        double ref = std::sin(f1 * x) * std::cos(f2 * y);
        double e = lanczos3(g, x, y) - ref;
        num += e * e;
        den += ref * ref;
    }
    CHECK(std::sqrt(num / den) <= 0.02);  // Lanczos-3 at 2x oversampling
}

TEST_CASE("binary grid round trip") {
    Axis a1{0.0, 0.3, 12, true};
    Axis a2{-0.5, 0.25, 9, false};
    Grid2 g(Chart::Parallel, a1, a2, -0.3, 1.0);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (auto& x : g.v) x = u(rng);
    std::string path = "/tmp/ccd_grid_test.bin";
    write_grid_bin(g, path);
    Grid2 r = read_grid_bin(path);
    CHECK(r.chart == g.chart);
    CHECK(r.ax1.n == g.ax1.n);
    CHECK(r.ax2.step == g.ax2.step);
    CHECK(r.ax1.periodic);
    CHECK(!r.ax2.periodic);
    CHECK(r.kappa == g.kappa);
    for (size_t i = 0; i < g.v.size(); ++i) CHECK(r.v[i] == g.v[i]);
    std::remove(path.c_str());
}

TEST_CASE("csv and pgm emission") {
    Grid2 g = make_image_grid(16, 1.0, 0.0);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) g.at(i, j) = i + 100.0 * j;
    write_grid_csv(g, "/tmp/ccd_grid_test.csv");
    write_grid_pgm(g, "/tmp/ccd_grid_test.pgm");
    FILE* f = fopen("/tmp/ccd_grid_test.pgm", "rb");
    REQUIRE(f);
    char magic[3] = {0};
    REQUIRE(fread(magic, 1, 2, f) == 2);
    CHECK(magic[0] == 'P');
    CHECK(magic[1] == '5');
    fclose(f);
    std::remove("/tmp/ccd_grid_test.csv");
    std::remove("/tmp/ccd_grid_test.pgm");
}
