#include "kg/ode.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace kg {

namespace {

void require_ode_domain(double amplitude, double mu) {
    if (!(std::isfinite(mu) && mu > 0.0)) throw DomainError("mu must satisfy mu > 0");
    if (!(std::isfinite(amplitude) && amplitude >= 0.0)) throw DomainError("amplitude must satisfy A >= 0");
}

}  // namespace

double ode_energy(const OdeState& s, double mu) noexcept {
    return 0.5 * s.v * s.v + potential(s.u, mu);
}

OdeIntegrator::OdeIntegrator(IRKScheme scheme, double mu)
    : scheme_(scheme), mu_(mu), limit_(blowup_limit(mu)) {
    StepConfig{1.0, scheme}.validate();
    if (!(std::isfinite(mu) && mu > 0.0)) throw DomainError("mu must satisfy mu > 0");
}

void OdeIntegrator::step(OdeState& s, double h) {
    const auto stages = static_cast<std::size_t>(scheme_.stages);
    double zu[IRKScheme::kMaxStages] = {};
    double zv[IRKScheme::kMaxStages] = {};
    double fu[IRKScheme::kMaxStages];
    double fv[IRKScheme::kMaxStages];
    const double scale = std::max({std::abs(s.u), std::abs(s.v), 1e-300});

    int iter = 0;
    double delta = 0.0;
    for (iter = 1; iter <= scheme_.max_stage_iters; ++iter) {
        for (std::size_t i = 0; i < stages; ++i) {
            const double u = s.u + zu[i];
            if (!(std::abs(u) <= limit_)) {
                throw NumericalBlowup(fmt::format("numerical blow-up at t={} (stage u={})", s.t, u), s.t);
            }
            fu[i] = s.v + zv[i];
            fv[i] = -potential_derivative(u, mu_);
        }
        delta = 0.0;
        for (std::size_t i = 0; i < stages; ++i) {
            double nu = 0.0, nv = 0.0;
            for (std::size_t j = 0; j < stages; ++j) {
                nu += scheme_.a[i][j] * fu[j];
                nv += scheme_.a[i][j] * fv[j];
            }
            nu *= h;
            nv *= h;
            delta = std::max({delta, std::abs(nu - zu[i]), std::abs(nv - zv[i])});
            zu[i] = nu;
            zv[i] = nv;
        }
        if (delta <= scheme_.stage_tol * scale) break;
    }
    last_iters_ = iter;
    if (iter > scheme_.max_stage_iters) {
        throw StageDivergence(fmt::format("stage iteration did not converge at t={} (dt={})", s.t, h), s.t);
    }
    for (std::size_t i = 0; i < stages; ++i) {
        s.u += scheme_.d[i] * zu[i];
        s.v += scheme_.d[i] * zv[i];
    }
    s.t += h;
    if (!(std::abs(s.u) <= limit_) || !std::isfinite(s.v)) {
        throw NumericalBlowup(fmt::format("numerical blow-up at t={} (u={})", s.t, s.u), s.t);
    }
}

std::size_t OdeIntegrator::integrate(OdeState& s, double t_end, double dt, const OdeObserver& observer) {
    if (!(std::isfinite(dt) && dt > 0.0)) throw DomainError("time step dt must be finite and > 0");
    if (!(t_end >= s.t)) throw DomainError("t_end must not precede the state time");
    const double t0 = s.t;
    std::size_t count = 0;
    while (s.t < t_end) {
        const double remaining = t_end - s.t;
        double h = dt;
        double next = t0 + static_cast<double>(count + 1) * dt;
        if (remaining <= dt * (1.0 + 1e-9)) {
            if (remaining < dt * (1.0 - 1e-9)) h = remaining;
            next = t_end;
        }
        step(s, h);
        s.t = next;
        ++count;
        if (observer && observer(s) == ObserverAction::Stop) break;
    }
    return count;
}

OdeState ode_integrate(double amplitude, double mu, double t_end, double dt, const OdeObserver& observer,
                       const IRKScheme& scheme) {
    require_ode_domain(amplitude, mu);
    OdeIntegrator integrator(scheme, mu);
    OdeState s{0.0, amplitude + std::sqrt(mu), 0.0};
    integrator.integrate(s, t_end, dt, observer);
    return s;
}

OdeState ode_rk4_step(const OdeState& s, double dt, double mu) {
    auto f = [mu](double u, double v) { return std::pair{v, -potential_derivative(u, mu)}; };
    const auto [k1u, k1v] = f(s.u, s.v);
    const auto [k2u, k2v] = f(s.u + 0.5 * dt * k1u, s.v + 0.5 * dt * k1v);
    const auto [k3u, k3v] = f(s.u + 0.5 * dt * k2u, s.v + 0.5 * dt * k2v);
    const auto [k4u, k4v] = f(s.u + dt * k3u, s.v + dt * k3v);
    OdeState out{s.t + dt, s.u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
                 s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
    if (!(std::abs(out.u) <= blowup_limit(mu))) {
        throw NumericalBlowup(fmt::format("numerical blow-up at t={}", s.t), s.t);
    }
    return out;
}

bool ode_confined_predicate(double amplitude, double mu) {
    require_ode_domain(amplitude, mu);
    return potential(amplitude + std::sqrt(mu), mu) < 0.0;
}

}  // namespace kg
