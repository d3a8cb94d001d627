#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace kg::detail {

/// Real-to-complex transform of fixed length backed by FFTW.
///
/// Convention: forward is unnormalized, X_k = sum_j x_j exp(-2 pi i jk/n);
/// inverse divides by n. Only the n/2 + 1 non-negative modes are stored.
/// Buffers are per-instance, so one instance must not be shared between
/// threads; distinct instances are independent.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t modes() const noexcept { return n_ / 2 + 1; }

    void forward(std::span<const double> x, std::span<std::complex<double>> spectrum);
    void inverse(std::span<const std::complex<double>> spectrum, std::span<double> x);

private:
    std::size_t n_;
    double* real_ = nullptr;
    std::complex<double>* complex_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace kg::detail
