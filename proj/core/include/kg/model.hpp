#pragma once

#include <numbers>

#include "kg/errors.hpp"

namespace kg {

/// Coefficients of u_tt + alpha u_xx + beta u (u^2 - mu) = 0 on a periodic
/// interval of length L, together with the rescaled squared phase speed
/// c_sq = -alpha / (beta L^2) that multiplies u_xx once time and space are
/// rescaled to beta = 1 and the unit interval.
///
/// Construct through make_params(); c_sq cannot be set independently.
class ModelParams {
public:
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double mu() const noexcept { return mu_; }
    double length() const noexcept { return length_; }
    double c_sq() const noexcept { return c_sq_; }

    friend ModelParams make_params(double alpha, double beta, double mu, double length);

private:
    ModelParams(double alpha, double beta, double mu, double length)
        : alpha_(alpha), beta_(beta), mu_(mu), length_(length),
          c_sq_(-alpha / (beta * length * length)) {}

    double alpha_;
    double beta_;
    double mu_;
    double length_;
    double c_sq_;
};

/// Throws DomainError unless alpha < 0 and beta, mu, L > 0 (all finite).
ModelParams make_params(double alpha, double beta, double mu, double length = 1.0);

/// Convenience for the beta = 1, L = 1 normalization with alpha = -2^e.
ModelParams params_from_alpha_exp(int alpha_exp, double mu);

/// Amplitude of the sinusoidal perturbation added to the stable state +sqrt(mu).
struct InitialCondition {
    double amplitude = 0.0;
    double mu = 1.0;
};

/// Double-well potential V(u) = u^4/4 - mu u^2/2, normalized so V(0) = 0.
constexpr double potential(double u, double mu) noexcept {
    const double u2 = u * u;
    return 0.25 * u2 * u2 - 0.5 * mu * u2;
}

/// V'(u) = u (u^2 - mu).
constexpr double potential_derivative(double u, double mu) noexcept {
    return u * (u * u - mu);
}

/// Small-oscillation frequency of Fourier mode k about u = sqrt(mu):
/// sqrt(4 pi^2 k^2 c_sq + 2 mu).
double linearized_frequency(const ModelParams& params, int wavenumber);
double linearized_frequency(double c_sq, double mu, int wavenumber);

/// Amplitude A at which the zero-velocity energy V(A + sqrt(mu)) reaches the
/// barrier V(0) = 0, i.e. (sqrt(2) - 1) sqrt(mu).
double critical_amplitude(double mu);

/// A' = A / critical_amplitude(mu).
double normalized_amplitude(double amplitude, double mu);

/// Inverse of normalized_amplitude.
double amplitude_from_normalized(double a_prime, double mu);

/// Values of |u| above this are treated as numerical blow-up:
/// 10 max(sqrt(2 mu), 1).
double blowup_limit(double mu);

}  // namespace kg
