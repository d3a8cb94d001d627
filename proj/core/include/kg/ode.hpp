#pragma once

#include <functional>

#include "kg/integrator.hpp"

namespace kg {

/// Point-wise dynamics u'' = -u (u^2 - mu): the field equation with the
/// spatial coupling removed.
struct OdeState {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
};

using OdeObserver = std::function<ObserverAction(const OdeState&)>;

/// v^2/2 + V(u).
double ode_energy(const OdeState& s, double mu) noexcept;

/// Same Gauss-Legendre scheme as the field integrator, specialized to the
/// scalar system. The stage equations are solved by plain fixed-point
/// iteration.
class OdeIntegrator {
public:
    OdeIntegrator(IRKScheme scheme, double mu);

    void step(OdeState& s, double dt);
    std::size_t integrate(OdeState& s, double t_end, double dt, const OdeObserver& observer = {});
    int last_iterations() const noexcept { return last_iters_; }

private:
    IRKScheme scheme_;
    double mu_;
    double limit_;
    int last_iters_ = 0;
};

/// Integrates from (A + sqrt(mu), 0) at t = 0 to t_end (or until the
/// observer stops).
OdeState ode_integrate(double amplitude, double mu, double t_end, double dt, const OdeObserver& observer = {},
                       const IRKScheme& scheme = IRKScheme::gauss_legendre(2));

/// Explicit classical four-stage step of the scalar system.
OdeState ode_rk4_step(const OdeState& s, double dt, double mu);

/// Exact confinement criterion of the scalar model: V(A + sqrt(mu)) < V(0).
bool ode_confined_predicate(double amplitude, double mu);

}  // namespace kg
