#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "kg/integrator.hpp"
#include "kg/ode.hpp"

namespace kg {

/// Case i) = Confined (the trajectory never leaves the positive side),
/// case ii) = Crossing. Coded 0 / 1.
enum class Classification { Confined = 0, Crossing = 1 };

enum class RunStatus { Completed, EarlyStopped, Failed };

enum class FailureReason { None, StageDivergence, NumericalBlowup };

struct RunOutcome {
    Classification classification = Classification::Confined;
    std::optional<double> first_crossing_time;
    /// Max over steps of |E(t) - E(0)| / max(|E(0)|, mu^2/4).
    double energy_drift = 0.0;
    double t_final = 0.0;
    RunStatus status = RunStatus::Completed;
    FailureReason failure = FailureReason::None;
    std::string message;
    std::size_t steps = 0;

    bool valid() const noexcept { return status != RunStatus::Failed; }
    int code() const noexcept { return static_cast<int>(classification); }
};

std::string to_string(RunStatus status, FailureReason reason = FailureReason::None);
std::string to_string(Classification c);

/// Called after every accepted step with the state, its energy and the
/// running drift.
using PdeStepTap = std::function<void(const FieldState&, double energy, double drift)>;
using OdeStepTap = std::function<void(const OdeState&, double energy, double drift)>;

/// Integrates to t_end, stopping at the first step whose grid minimum of u
/// is negative. Integration failures are returned as Failed outcomes.
/// Throws DomainError if the initial field is not strictly positive.
RunOutcome classify_pde(const FieldState& initial, const ModelParams& params, const StepConfig& cfg,
                        double t_end, int dealias_factor = 2, const PdeStepTap& tap = {});

/// Same protocol for the point-wise model, starting from (A + sqrt(mu), 0).
RunOutcome classify_ode(double amplitude, double mu, double dt, double t_end,
                        const IRKScheme& scheme = IRKScheme::gauss_legendre(2), const OdeStepTap& tap = {});

}  // namespace kg
