#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>

#include "kg/model.hpp"
#include "kg/spectral.hpp"

namespace kg {

/// Butcher tableau of an s-stage Gauss-Legendre method (order 2s) plus the
/// stage-iteration controls.
struct IRKScheme {
    static constexpr int kMaxStages = 3;
    using Vec = std::array<double, kMaxStages>;
    using Mat = std::array<Vec, kMaxStages>;

    int stages = 0;
    Mat a{};
    Vec b{};
    Vec c{};
    /// Weights d = b^T A^{-1}, so that y+ = y + sum_i d_i Z_i for stage
    /// increments Z_i = dt sum_j a_ij K_j.
    Vec d{};
    double stage_tol = 1e-12;
    int max_stage_iters = 100;

    /// Gauss-Legendre tableau for 2 or 3 stages; DomainError otherwise.
    static IRKScheme gauss_legendre(int stages);
    /// Order 2s of the underlying collocation method.
    int order() const noexcept { return 2 * stages; }
};

struct StepConfig {
    double dt = 0.0625;
    IRKScheme scheme = IRKScheme::gauss_legendre(2);

    /// DomainError unless dt is finite and positive.
    void validate() const;
};

enum class ObserverAction { Continue, Stop };
using FieldObserver = std::function<ObserverAction(const FieldState&)>;

/// Fixed-step Gauss-Legendre integrator for the pseudospectral system.
///
/// Stage equations are solved by a fixed-point iteration in which the linear
/// wave operator (du = v, dv = c_sq u_xx) is treated exactly, mode by mode,
/// and only the force mu u - u^3 is lagged. At convergence this is the Gauss
/// method itself; the splitting only sets the contraction rate, which then
/// depends on dt |3u^2 - mu| rather than on dt * sqrt(c_sq) * pi * n.
class PdeIntegrator {
public:
    PdeIntegrator(const GridSpec& grid, IRKScheme scheme, const ModelParams& params);
    ~PdeIntegrator();
    PdeIntegrator(PdeIntegrator&&) noexcept;
    PdeIntegrator& operator=(PdeIntegrator&&) noexcept;

    /// One step of signed size dt (negative steps integrate backward).
    /// Throws StageDivergence or NumericalBlowup.
    void step(FieldState& state, double dt);

    /// Fixed steps of size dt until t_end, the last one shortened to land on
    /// t_end exactly. The observer runs after every accepted step. Returns
    /// the number of steps taken.
    std::size_t integrate(FieldState& state, double t_end, double dt, const FieldObserver& observer = {});

    /// Stage iterations used by the most recent step.
    int last_iterations() const noexcept;
    SpectralOperator& spectral() noexcept;
    const ModelParams& params() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Single implicit step with a fresh integrator.
FieldState irk_step(const FieldState& state, const StepConfig& cfg, const ModelParams& params,
                    const GridSpec& grid = {});

FieldState integrate(const FieldState& state, double t_end, const StepConfig& cfg,
                     const ModelParams& params, const FieldObserver& observer = {},
                     const GridSpec& grid = {});

/// Classical explicit four-stage step, used as an independent reference.
FieldState rk4_reference_step(const FieldState& state, double dt, const ModelParams& params,
                              SpectralOperator& op);
FieldState rk4_reference_step(const FieldState& state, double dt, const ModelParams& params);

}  // namespace kg
