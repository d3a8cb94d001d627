#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>

namespace kg::detail {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n_));
    complex_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * modes()));
    if (real_ == nullptr || complex_ == nullptr) {
        fftw_free(real_);
        fftw_free(complex_);
        throw std::bad_alloc();
    }
    auto* c = reinterpret_cast<fftw_complex*>(complex_);
    const int len = static_cast<int>(n_);
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, c, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(len, c, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
        fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    }
    fftw_free(real_);
    fftw_free(complex_);
}

void RealFft::forward(std::span<const double> x, std::span<std::complex<double>> spectrum) {
    std::copy_n(x.begin(), n_, real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    std::copy_n(complex_, modes(), spectrum.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> spectrum, std::span<double> x) {
    // c2r overwrites its input, so the caller's spectrum is staged first.
    std::copy_n(spectrum.begin(), modes(), complex_);
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = real_[j] * scale;
}

}  // namespace kg::detail
