#include "kg/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kg {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw DomainError(message);
}

}  // namespace

ModelParams make_params(double alpha, double beta, double mu, double length) {
    require(std::isfinite(alpha) && alpha < 0.0, "alpha must satisfy alpha < 0");
    require(std::isfinite(beta) && beta > 0.0, "beta must satisfy beta > 0");
    require(std::isfinite(mu) && mu > 0.0, "mu must satisfy mu > 0");
    require(std::isfinite(length) && length > 0.0, "L must satisfy L > 0");
    return ModelParams(alpha, beta, mu, length);
}

ModelParams params_from_alpha_exp(int alpha_exp, double mu) {
    return make_params(-std::ldexp(1.0, alpha_exp), 1.0, mu, 1.0);
}

double linearized_frequency(double c_sq, double mu, int wavenumber) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(wavenumber);
    return std::sqrt(k * k * c_sq + 2.0 * mu);
}

double linearized_frequency(const ModelParams& params, int wavenumber) {
    return linearized_frequency(params.c_sq(), params.mu(), wavenumber);
}

double critical_amplitude(double mu) {
    require(std::isfinite(mu) && mu > 0.0, "mu must satisfy mu > 0");
    return (std::numbers::sqrt2 - 1.0) * std::sqrt(mu);
}

double normalized_amplitude(double amplitude, double mu) {
    require(std::isfinite(amplitude) && amplitude >= 0.0, "amplitude must satisfy A >= 0");
    return amplitude / critical_amplitude(mu);
}

double amplitude_from_normalized(double a_prime, double mu) {
    require(std::isfinite(a_prime) && a_prime >= 0.0, "normalized amplitude must satisfy A' >= 0");
    return a_prime * critical_amplitude(mu);
}

double blowup_limit(double mu) {
    return 10.0 * std::max(std::sqrt(2.0 * mu), 1.0);
}

}  // namespace kg
