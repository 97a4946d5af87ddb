#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ccd/geometry.hpp"
#include "ccd/kernels.hpp"

using namespace ccd;

namespace {

std::vector<double> randv(size_t n, double lo, double hi, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("simd dispatch equivalence vs scalar reference") {
    const auto& act = kernels::active();
    const auto& ref = kernels::scalar();
    INFO("active dispatch: ", act.name);

    const size_t n = 1003;  // odd size exercises the tail path
    auto x = randv(n, -30.0, 30.0, 1);
    auto y = randv(n, -1.0, 1.0, 2);

    SUBCASE("exp / sin batches") {
        std::vector<double> a(n), b(n);
        act.exp_batch(x.data(), a.data(), n);
        ref.exp_batch(x.data(), b.data(), n);
        for (size_t i = 0; i < n; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 4e-15 * std::abs(b[i]));
        act.sin_batch(x.data(), a.data(), n);
        ref.sin_batch(x.data(), b.data(), n);
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
    }

    SUBCASE("reductions") {
        CHECK(act.sum(x.data(), n) == doctest::Approx(ref.sum(x.data(), n)).epsilon(1e-13));
        CHECK(act.dot(x.data(), y.data(), n) ==
              doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(1e-12));
        CHECK(act.sumsq(x.data(), n) == doctest::Approx(ref.sumsq(x.data(), n)).epsilon(1e-13));
    }

    SUBCASE("fused phantom kernels") {
        auto xs = randv(n, -1.0, 1.0, 3);
        auto ys = randv(n, -1.0, 1.0, 4);
        std::vector<double> a(n, 0.5), b(n, 0.5);
        act.gauss_accum(xs.data(), ys.data(), n, 0.2, -0.1, 1.0 / (2 * 0.03 * 0.03), 0.7, a.data());
        ref.gauss_accum(xs.data(), ys.data(), n, 0.2, -0.1, 1.0 / (2 * 0.03 * 0.03), 0.7, b.data());
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
        act.packet_accum(xs.data(), ys.data(), n, 0.1, 0.2, 50.0, 80.0, 60.0, a.data());
        ref.packet_accum(xs.data(), ys.data(), n, 0.1, 0.2, 50.0, 80.0, 60.0, b.data());
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13);
    }
}

TEST_CASE("batched tracer agrees with the scalar tracer lane by lane") {
    for (double k : {-0.4, 0.0, 0.55}) {
        Disk d(1.0, k);
        const int n = 101;
        std::mt19937 rng(900 + static_cast<int>(k * 10));
        std::uniform_real_distribution<double> ur(0.0, 0.93), uph(0.0, 2 * kPi);
        std::vector<double> px(n), py(n), pth(n), s_act(n), a_act(n), s_ref(n), a_ref(n);
        for (int i = 0; i < n; ++i) {
            double r = ur(rng), ph = uph(rng);
            px[i] = r * std::cos(ph);
            py[i] = r * std::sin(ph);
            pth[i] = uph(rng);
        }
        trace_to_entry_batch(d, px.data(), py.data(), pth.data(), n, s_act.data(), a_act.data());
        bool prev = kernels::use_scalar_only(true);
        trace_to_entry_batch(d, px.data(), py.data(), pth.data(), n, s_ref.data(), a_ref.data());
        kernels::use_scalar_only(prev);
        for (int i = 0; i < n; ++i) {
            REQUIRE(std::isfinite(s_ref[i]));
            REQUIRE(std::isfinite(s_act[i]));
            double ds = std::abs(s_act[i] - s_ref[i]);
            ds = std::min(ds, std::abs(ds - d.L()));
            CHECK(ds <= 1e-10);
            CHECK(std::abs(a_act[i] - a_ref[i]) <= 1e-10);
        }
    }
}
