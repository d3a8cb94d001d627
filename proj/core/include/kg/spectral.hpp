#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kg/model.hpp"

namespace kg {

/// Uniform periodic grid x_j = j/n, j = 0..n-1, on the unit interval.
struct GridSpec {
    std::size_t n = 64;
    /// Padding multiple used when forming the cubic product.
    int dealias_factor = 2;

    /// Throws DomainError unless n is a power of two >= 16 and dealias_factor >= 2.
    void validate() const;
    double x(std::size_t j) const noexcept { return static_cast<double>(j) / static_cast<double>(n); }
};

/// Samples of u and u_t at time t.
struct FieldState {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v;

    std::size_t size() const noexcept { return u.size(); }
    bool finite() const noexcept;
};

struct FieldRates {
    std::vector<double> du;
    std::vector<double> dv;
};

/// u(x, 0) = A sin(2 pi x) + sqrt(mu), u_t(x, 0) = 0.
FieldState initial_state(double amplitude, double mu, const GridSpec& grid);

/// Pseudospectral operators for one grid. Holds its own transform plans and
/// workspaces: cheap to call repeatedly, not safe to share across threads.
///
/// The Nyquist mode k = n/2 is dropped by every operator (derivatives,
/// dealiased products and the right-hand side).
class SpectralOperator {
public:
    using Complex = std::complex<double>;

    explicit SpectralOperator(GridSpec grid);
    ~SpectralOperator();
    SpectralOperator(SpectralOperator&&) noexcept;
    SpectralOperator& operator=(SpectralOperator&&) noexcept;

    const GridSpec& grid() const noexcept;
    std::size_t size() const noexcept;
    /// Number of stored non-negative modes, n/2 + 1.
    std::size_t modes() const noexcept;
    /// Angular wavenumber 2 pi k of mode k; zero for the Nyquist mode.
    double wavenumber(std::size_t k) const noexcept;

    void forward(std::span<const double> x, std::span<Complex> spectrum);
    void inverse(std::span<const Complex> spectrum, std::span<double> x);

    std::vector<double> first_derivative(std::span<const double> u);
    std::vector<double> second_derivative(std::span<const double> u);
    std::vector<double> cubic_dealiased(std::span<const double> u);

    /// Spectrum of the projected nonlinear force mu u - u^3 (cube formed on
    /// the padded grid) from the spectrum of u. Returns max |u| over the
    /// padded grid, or NaN if a non-finite value was seen.
    double nonlinear_force_spectrum(std::span<const Complex> u_hat, double mu,
                                    std::span<Complex> force_hat);

    /// du = v, dv = c_sq u_xx - u^3 + mu u.
    FieldRates rhs(const FieldState& state, const ModelParams& params);
    void rhs(const FieldState& state, const ModelParams& params,
             std::span<double> du, std::span<double> dv);

    /// Discrete energy: mean of v^2/2 + c_sq u_x^2/2 on the grid, plus the
    /// mean of V(u) over the padded grid (exact for the band-limited
    /// interpolant, and the functional conserved by the semi-discrete flow).
    double energy(const FieldState& state, const ModelParams& params);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot helpers building a temporary operator for the input length.
std::vector<double> second_derivative(std::span<const double> u);
std::vector<double> cubic_dealiased(std::span<const double> u, int factor = 2);
double pde_energy(const FieldState& state, const ModelParams& params, int dealias_factor = 2);

}  // namespace kg
