#include "ccd/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ccd::fft {

namespace {
// FFTW planning is not thread-safe; execution of a created plan is.
std::mutex plan_mutex;
}  // namespace

void fft2(std::vector<std::complex<double>>& a, int n1, int n2, bool inverse) {
    if (static_cast<size_t>(n1) * n2 != a.size()) throw std::invalid_argument("fft2: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(plan_mutex);
        plan = fftw_plan_dft_2d(n1, n2, p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(plan_mutex);
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        double s = 1.0 / (static_cast<double>(n1) * n2);
        for (auto& z : a) z *= s;
    }
}

void fft_axis(std::vector<std::complex<double>>& a, int n1, int n2, int axis, bool inverse) {
    if (static_cast<size_t>(n1) * n2 != a.size())
        throw std::invalid_argument("fft_axis: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    int n = axis == 0 ? n1 : n2;
    int howmany = axis == 0 ? n2 : n1;
    int stride = axis == 0 ? n2 : 1;
    int dist = axis == 0 ? 1 : n2;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(plan_mutex);
        plan = fftw_plan_many_dft(1, &n, howmany, p, nullptr, stride, dist, p, nullptr, stride,
                                  dist, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(plan_mutex);
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        double s = 1.0 / n;
        for (auto& z : a) z *= s;
    }
}

}  // namespace ccd::fft
