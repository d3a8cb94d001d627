#pragma once

#include <vector>

#include "kg/classifier.hpp"

namespace kg::verify {

// Pass thresholds used by `kgsim verify`.
inline constexpr double kEnergyDriftMax = 1e-7;
inline constexpr double kOrderMinTwoStage = 3.7;
inline constexpr double kOrderMinThreeStage = 5.5;
inline constexpr double kSpectralAgreementMax = 1e-9;
inline constexpr double kThresholdRelTol = 1e-3;
inline constexpr double kOdePeriodRelTol = 1e-3;
inline constexpr double kPdePeriodRelTol = 5e-3;
inline constexpr double kCrossOracleMax = 1e-8;

/// Max over steps of |E(t) - E(0)| / |E(0)| for the field run
/// mu = 1, A = 0.1, c_sq = 0.25, n = 64 with the given step and stages.
double energy_drift(double t_end = 1000.0, double dt = 0.0625, int stages = 2);

struct OrderStudy {
    std::vector<double> dts;
    std::vector<double> errors;
    /// log2(errors[i] / errors[i + 1]).
    std::vector<double> orders;
    double min_order() const;
};

/// Self-convergence of the scalar model (mu = 1, A = 0.2) over [0, t_end]
/// against a run at dts.back() / 64.
OrderStudy temporal_order(int stages, std::vector<double> dts, double t_end = 10.0);
OrderStudy temporal_order(int stages);

/// Max-norm difference of (u, v) at t = 1 between n = 64 and n = 256
/// (mu = 1, A = 0.1, c_sq = 0.25, dt = 2^-6), on the shared points.
double spectral_agreement();

/// Bisection on A with classify_ode; returns the estimated boundary.
double ode_threshold(double mu, double t_end = 4096.0, double dt = 0.0625);

struct PeriodMeasurement {
    double measured = 0.0;
    double expected = 0.0;
    double rel_error() const;
};

/// Period of u - sqrt(mu) for the scalar model at A = 1e-4 sqrt(mu).
PeriodMeasurement ode_linear_period(double mu);
/// Period of the mode-1 sine coefficient of the field at A = 1e-4 sqrt(mu).
PeriodMeasurement pde_linear_period(double mu, double c_sq);

struct AgreementCase {
    double mu = 0.0;
    double a_prime = 0.0;
    RunOutcome pde;
    RunOutcome ode;
    bool agree() const;
};

/// classify_pde at -alpha = 2^-20 against classify_ode for A' in {0.5, 2}
/// and mu in {2^-6, 2^-2, 1, 2}.
std::vector<AgreementCase> pde_ode_agreement(double t_end = 2048.0);

/// Max-norm difference at t = 10 between the implicit integrator and the
/// explicit reference (dt = 2^-8, mu = 1, A = 0.1, c_sq = 0.25, n = 64).
double cross_oracle();

}  // namespace kg::verify
