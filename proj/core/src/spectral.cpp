#include "kg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fft.hpp"

namespace kg {

void GridSpec::validate() const {
    if (n < 16 || (n & (n - 1)) != 0) throw DomainError("grid size n must be a power of two >= 16");
    if (dealias_factor < 2) throw DomainError("dealias factor must be >= 2");
}

bool FieldState::finite() const noexcept {
    auto ok = [](double x) { return std::isfinite(x); };
    return std::isfinite(t) && std::all_of(u.begin(), u.end(), ok) && std::all_of(v.begin(), v.end(), ok);
}

FieldState initial_state(double amplitude, double mu, const GridSpec& grid) {
    grid.validate();
    if (!(std::isfinite(amplitude) && amplitude >= 0.0)) throw DomainError("amplitude must satisfy A >= 0");
    if (!(std::isfinite(mu) && mu > 0.0)) throw DomainError("mu must satisfy mu > 0");
    FieldState s;
    s.u.resize(grid.n);
    s.v.assign(grid.n, 0.0);
    const double base = std::sqrt(mu);
    for (std::size_t j = 0; j < grid.n; ++j) {
        s.u[j] = amplitude * std::sin(2.0 * std::numbers::pi * grid.x(j)) + base;
    }
    return s;
}

struct SpectralOperator::Impl {
    explicit Impl(GridSpec g)
        : grid(g),
          coarse(g.n),
          fine(g.n * static_cast<std::size_t>(g.dealias_factor)),
          hat(coarse.modes()),
          hat2(coarse.modes()),
          fine_hat(fine.modes()),
          fine_x(fine.size()),
          work(g.n) {}

    GridSpec grid;
    detail::RealFft coarse;
    detail::RealFft fine;
    std::vector<Complex> hat;
    std::vector<Complex> hat2;
    std::vector<Complex> fine_hat;
    std::vector<double> fine_x;
    std::vector<double> work;

    std::size_t nyquist() const noexcept { return grid.n / 2; }

    // Coarse spectrum -> padded-grid samples, Nyquist mode dropped.
    void to_fine(std::span<const Complex> u_hat) {
        const double scale = static_cast<double>(fine.size()) / static_cast<double>(grid.n);
        std::fill(fine_hat.begin(), fine_hat.end(), Complex{});
        for (std::size_t k = 0; k < nyquist(); ++k) fine_hat[k] = scale * u_hat[k];
        fine.inverse(fine_hat, fine_x);
    }

    // Padded-grid samples -> coarse spectrum truncated to |k| < n/2.
    void from_fine(std::span<Complex> out_hat) {
        fine.forward(fine_x, fine_hat);
        const double scale = static_cast<double>(grid.n) / static_cast<double>(fine.size());
        for (std::size_t k = 0; k < nyquist(); ++k) out_hat[k] = scale * fine_hat[k];
        out_hat[nyquist()] = Complex{};
    }
};

SpectralOperator::SpectralOperator(GridSpec grid) {
    grid.validate();
    impl_ = std::make_unique<Impl>(grid);
}

SpectralOperator::~SpectralOperator() = default;
SpectralOperator::SpectralOperator(SpectralOperator&&) noexcept = default;
SpectralOperator& SpectralOperator::operator=(SpectralOperator&&) noexcept = default;

const GridSpec& SpectralOperator::grid() const noexcept { return impl_->grid; }
std::size_t SpectralOperator::size() const noexcept { return impl_->grid.n; }
std::size_t SpectralOperator::modes() const noexcept { return impl_->coarse.modes(); }

double SpectralOperator::wavenumber(std::size_t k) const noexcept {
    if (k >= impl_->nyquist()) return 0.0;
    return 2.0 * std::numbers::pi * static_cast<double>(k);
}

void SpectralOperator::forward(std::span<const double> x, std::span<Complex> spectrum) {
    impl_->coarse.forward(x, spectrum);
}

void SpectralOperator::inverse(std::span<const Complex> spectrum, std::span<double> x) {
    impl_->coarse.inverse(spectrum, x);
}

std::vector<double> SpectralOperator::first_derivative(std::span<const double> u) {
    auto& m = *impl_;
    m.coarse.forward(u, m.hat);
    for (std::size_t k = 0; k < modes(); ++k) m.hat[k] *= Complex(0.0, wavenumber(k));
    std::vector<double> out(size());
    m.coarse.inverse(m.hat, out);
    return out;
}

std::vector<double> SpectralOperator::second_derivative(std::span<const double> u) {
    auto& m = *impl_;
    m.coarse.forward(u, m.hat);
    for (std::size_t k = 0; k < modes(); ++k) {
        const double kk = wavenumber(k);
        m.hat[k] *= -kk * kk;
    }
    std::vector<double> out(size());
    m.coarse.inverse(m.hat, out);
    return out;
}

std::vector<double> SpectralOperator::cubic_dealiased(std::span<const double> u) {
    auto& m = *impl_;
    m.coarse.forward(u, m.hat);
    m.to_fine(m.hat);
    for (double& x : m.fine_x) x = x * x * x;
    m.from_fine(m.hat2);
    std::vector<double> out(size());
    m.coarse.inverse(m.hat2, out);
    return out;
}

double SpectralOperator::nonlinear_force_spectrum(std::span<const Complex> u_hat, double mu,
                                                  std::span<Complex> force_hat) {
    auto& m = *impl_;
    m.to_fine(u_hat);
    double peak = 0.0;
    for (double& x : m.fine_x) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
        peak = std::max(peak, std::abs(x));
        x = mu * x - x * x * x;
    }
    m.from_fine(force_hat);
    return peak;
}

void SpectralOperator::rhs(const FieldState& state, const ModelParams& params,
                           std::span<double> du, std::span<double> dv) {
    auto& m = *impl_;
    std::copy(state.v.begin(), state.v.end(), du.begin());
    m.coarse.forward(state.u, m.hat);
    nonlinear_force_spectrum(m.hat, params.mu(), m.hat2);
    const double c_sq = params.c_sq();
    for (std::size_t k = 0; k < modes(); ++k) {
        const double kk = wavenumber(k);
        m.hat2[k] -= c_sq * kk * kk * m.hat[k];
    }
    m.hat2[m.nyquist()] = Complex{};
    m.coarse.inverse(m.hat2, dv);
}

FieldRates SpectralOperator::rhs(const FieldState& state, const ModelParams& params) {
    FieldRates r{std::vector<double>(size()), std::vector<double>(size())};
    rhs(state, params, r.du, r.dv);
    return r;
}

double SpectralOperator::energy(const FieldState& state, const ModelParams& params) {
    auto& m = *impl_;
    const auto n = static_cast<double>(size());
    m.coarse.forward(state.u, m.hat);

    for (std::size_t k = 0; k < modes(); ++k) m.hat2[k] = m.hat[k] * Complex(0.0, wavenumber(k));
    m.coarse.inverse(m.hat2, m.work);
    double gradient = 0.0;
    double kinetic = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
        gradient += m.work[j] * m.work[j];
        kinetic += state.v[j] * state.v[j];
    }

    m.to_fine(m.hat);
    double pot = 0.0;
    for (double x : m.fine_x) pot += potential(x, params.mu());
    pot /= static_cast<double>(m.fine_x.size());

    return 0.5 * kinetic / n + 0.5 * params.c_sq() * gradient / n + pot;
}

std::vector<double> second_derivative(std::span<const double> u) {
    SpectralOperator op(GridSpec{u.size(), 2});
    return op.second_derivative(u);
}

std::vector<double> cubic_dealiased(std::span<const double> u, int factor) {
    SpectralOperator op(GridSpec{u.size(), factor});
    return op.cubic_dealiased(u);
}

double pde_energy(const FieldState& state, const ModelParams& params, int dealias_factor) {
    SpectralOperator op(GridSpec{state.size(), dealias_factor});
    return op.energy(state, params);
}

}  // namespace kg
