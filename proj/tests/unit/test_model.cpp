#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "kg/model.hpp"

namespace {

using std::numbers::pi;

TEST(ModelParams, PhaseSpeedFromCoefficients) {
    EXPECT_DOUBLE_EQ(kg::make_params(-0.25, 1.0, 1.0, 1.0).c_sq(), 0.25);
    EXPECT_DOUBLE_EQ(kg::make_params(-1.0, 1.0, 1.0, 1.0).c_sq(), 1.0);
    const auto p = kg::make_params(-3.0, 2.0, 0.5, 0.5);
    EXPECT_DOUBLE_EQ(p.c_sq(), 6.0);
    EXPECT_DOUBLE_EQ(p.alpha(), -3.0);
    EXPECT_DOUBLE_EQ(p.beta(), 2.0);
    EXPECT_DOUBLE_EQ(p.mu(), 0.5);
    EXPECT_DOUBLE_EQ(p.length(), 0.5);
}

TEST(ModelParams, RejectsOutOfDomain) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(kg::make_params(0.0, 1.0, 1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(0.1, 1.0, 1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-1.0, 0.0, 1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-1.0, 1.0, 0.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-1.0, 1.0, -1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-1.0, 1.0, 1.0, 0.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(nan, 1.0, 1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-inf, 1.0, 1.0), kg::DomainError);
    EXPECT_THROW(kg::make_params(-1.0, 1.0, nan), kg::DomainError);
}

TEST(ModelParams, AlphaExponent) {
    const auto p = kg::params_from_alpha_exp(-2, 1.0);
    EXPECT_DOUBLE_EQ(p.alpha(), -0.25);
    EXPECT_DOUBLE_EQ(p.c_sq(), 0.25);
    EXPECT_DOUBLE_EQ(kg::params_from_alpha_exp(-20, 2.0).c_sq(), std::ldexp(1.0, -20));
}

TEST(Potential, Values) {
    EXPECT_EQ(kg::potential(0.0, 1.0), 0.0);
    for (double mu : {0.015625, 0.25, 1.0, 2.0}) {
        EXPECT_NEAR(kg::potential(std::sqrt(mu), mu), -mu * mu / 4.0, 1e-15);
        EXPECT_NEAR(kg::potential(std::sqrt(2.0 * mu), mu), 0.0, 1e-15);
        const double u = std::sqrt(2.0 * mu);
        EXPECT_NEAR(u * u * (u * u - 2.0 * mu) / 4.0, 0.0, 1e-15);
    }
}

TEST(Potential, DerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(-2.0, 2.0), mm(0.01, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double u = uu(rng), mu = mm(rng), h = 1e-5;
        const double fd = (kg::potential(u + h, mu) - kg::potential(u - h, mu)) / (2 * h);
        EXPECT_NEAR(kg::potential_derivative(u, mu), fd, 1e-8);
    }
}

TEST(Potential, WellsAndBarrier) {
    for (double mu : {0.015625, 0.25, 1.0, 2.0}) {
        EXPECT_EQ(kg::potential_derivative(0.0, mu), 0.0);
        EXPECT_NEAR(kg::potential_derivative(std::sqrt(mu), mu), 0.0, 1e-15);
        EXPECT_NEAR(kg::potential_derivative(-std::sqrt(mu), mu), 0.0, 1e-15);
        EXPECT_EQ(kg::potential(1.3, mu), kg::potential(-1.3, mu));
    }
}

TEST(LinearizedFrequency, Values) {
    EXPECT_NEAR(kg::linearized_frequency(0.25, 0.5, 0), 1.0, 1e-15);
    EXPECT_NEAR(kg::linearized_frequency(0.25, 1.0, 1), std::sqrt(pi * pi + 2.0), 1e-14);
    EXPECT_NEAR(kg::linearized_frequency(0.25, 1.0, 1), 3.4452, 5e-5);
    EXPECT_NEAR(kg::linearized_frequency(kg::make_params(-0.25, 1.0, 1.0), 1), std::sqrt(pi * pi + 2.0), 1e-14);
}

TEST(LinearizedFrequency, ZeroModeIgnoresCoupling) {
    for (double mu : {0.01, 0.3, 1.0, 7.0}) {
        EXPECT_EQ(kg::linearized_frequency(0.25, mu, 0), kg::linearized_frequency(1e-9, mu, 0));
        EXPECT_DOUBLE_EQ(kg::linearized_frequency(0.25, mu, 0), std::sqrt(2.0 * mu));
    }
}

TEST(LinearizedFrequency, CurvatureOfPotential) {
    // omega_0^2 equals V''(sqrt(mu)) measured by a second difference.
    for (double mu : {0.015625, 0.25, 1.0, 2.0}) {
        const double u = std::sqrt(mu), h = 1e-4;
        const double curv = (kg::potential(u + h, mu) - 2 * kg::potential(u, mu) + kg::potential(u - h, mu)) / (h * h);
        const double w = kg::linearized_frequency(0.25, mu, 0);
        EXPECT_NEAR(w * w, curv, 1e-6 * std::max(1.0, curv));
    }
}

TEST(CriticalAmplitude, Values) {
    EXPECT_NEAR(kg::critical_amplitude(1.0), std::sqrt(2.0) - 1.0, 1e-15);
    EXPECT_NEAR(kg::critical_amplitude(1.0), 0.4142136, 1e-7);
    EXPECT_NEAR(kg::critical_amplitude(0.015625), 0.0517767, 1e-7);
    EXPECT_NEAR(kg::critical_amplitude(2.0), 2.0 - std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(kg::critical_amplitude(2.0), 0.5857864, 1e-7);
    EXPECT_THROW(kg::critical_amplitude(0.0), kg::DomainError);
}

TEST(CriticalAmplitude, EnergyReachesBarrier) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mm(1e-3, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = mm(rng);
        const double ac = kg::critical_amplitude(mu);
        EXPECT_NEAR(kg::potential(ac + std::sqrt(mu), mu), 0.0, 1e-13 * mu * mu);
        EXPECT_LT(kg::potential(0.99 * ac + std::sqrt(mu), mu), 0.0);
        EXPECT_GT(kg::potential(1.01 * ac + std::sqrt(mu), mu), 0.0);
    }
}

TEST(NormalizedAmplitude, Values) {
    for (double mu : {0.015625, 0.25, 1.0, 2.0}) {
        EXPECT_NEAR(kg::normalized_amplitude(kg::critical_amplitude(mu), mu), 1.0, 1e-15);
    }
    EXPECT_EQ(kg::normalized_amplitude(0.0, 1.0), 0.0);
    EXPECT_NEAR(kg::normalized_amplitude(0.04, 0.015625), 0.7726, 1e-4);
    EXPECT_NEAR(kg::normalized_amplitude(0.3, 1.0), 0.724, 5e-4);
    EXPECT_NEAR(kg::normalized_amplitude(0.5, 1.0), 1.207, 5e-4);
}

TEST(NormalizedAmplitude, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mm(1e-3, 4.0), aa(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = mm(rng), ap = aa(rng);
        EXPECT_NEAR(kg::normalized_amplitude(kg::amplitude_from_normalized(ap, mu), mu), ap, 1e-14);
    }
}

TEST(BlowupLimit, Values) {
    EXPECT_DOUBLE_EQ(kg::blowup_limit(2.0), 20.0);
    EXPECT_DOUBLE_EQ(kg::blowup_limit(0.015625), 10.0);
}

}  // namespace
