#include "kg/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace kg {

std::string to_string(RunStatus status, FailureReason reason) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::EarlyStopped: return "early_stopped";
        case RunStatus::Failed:
            switch (reason) {
                case FailureReason::StageDivergence: return "failed:stage_divergence";
                case FailureReason::NumericalBlowup: return "failed:numerical_blowup";
                case FailureReason::None: break;
            }
            return "failed";
    }
    return "unknown";
}

std::string to_string(Classification c) {
    return c == Classification::Crossing ? "crossing" : "confined";
}

namespace {

class DriftMonitor {
public:
    DriftMonitor(double e0, double mu) : e0_(e0), norm_(std::max(std::abs(e0), 0.25 * mu * mu)) {}

    double update(double e) {
        max_ = std::max(max_, std::abs(e - e0_) / norm_);
        return max_;
    }
    double max() const noexcept { return max_; }

private:
    double e0_;
    double norm_;
    double max_ = 0.0;
};

template <class Run>
void run_guarded(RunOutcome& out, Run&& run) {
    try {
        run();
    } catch (const StageDivergence& e) {
        out.status = RunStatus::Failed;
        out.failure = FailureReason::StageDivergence;
        out.message = e.what();
        out.t_final = e.time();
    } catch (const NumericalBlowup& e) {
        out.status = RunStatus::Failed;
        out.failure = FailureReason::NumericalBlowup;
        out.message = e.what();
        out.t_final = e.time();
    }
    if (!out.valid()) {
        out.classification = Classification::Confined;
        out.first_crossing_time.reset();
    }
}

}  // namespace

RunOutcome classify_pde(const FieldState& initial, const ModelParams& params, const StepConfig& cfg,
                        double t_end, int dealias_factor, const PdeStepTap& tap) {
    cfg.validate();
    if (initial.u.empty() || *std::min_element(initial.u.begin(), initial.u.end()) <= 0.0) {
        throw DomainError("initial field must be strictly positive");
    }
    GridSpec grid{initial.size(), dealias_factor};
    PdeIntegrator integrator(grid, cfg.scheme, params);
    RunOutcome out;
    out.t_final = initial.t;
    FieldState state = initial;

    auto& op = integrator.spectral();
    DriftMonitor drift(op.energy(state, params), params.mu());

    run_guarded(out, [&] {
        out.steps = integrator.integrate(state, t_end, cfg.dt, [&](const FieldState& s) {
            const double e = op.energy(s, params);
            const double d = drift.update(e);
            if (tap) tap(s, e, d);
            out.t_final = s.t;
            if (*std::min_element(s.u.begin(), s.u.end()) < 0.0) {
                out.classification = Classification::Crossing;
                out.first_crossing_time = s.t;
                return ObserverAction::Stop;
            }
            return ObserverAction::Continue;
        });
        out.t_final = state.t;
    });
    out.energy_drift = drift.max();
    if (out.valid()) {
        out.status = out.first_crossing_time ? RunStatus::EarlyStopped : RunStatus::Completed;
    }
    return out;
}

RunOutcome classify_ode(double amplitude, double mu, double dt, double t_end, const IRKScheme& scheme,
                        const OdeStepTap& tap) {
    if (!(std::isfinite(amplitude) && amplitude >= 0.0)) throw DomainError("amplitude must satisfy A >= 0");
    if (!(std::isfinite(mu) && mu > 0.0)) throw DomainError("mu must satisfy mu > 0");
    OdeIntegrator integrator(scheme, mu);
    OdeState s{0.0, amplitude + std::sqrt(mu), 0.0};
    if (s.u <= 0.0) throw DomainError("initial value must be strictly positive");

    RunOutcome out;
    DriftMonitor drift(ode_energy(s, mu), mu);
    run_guarded(out, [&] {
        out.steps = integrator.integrate(s, t_end, dt, [&](const OdeState& st) {
            const double e = ode_energy(st, mu);
            const double d = drift.update(e);
            if (tap) tap(st, e, d);
            out.t_final = st.t;
            if (st.u < 0.0) {
                out.classification = Classification::Crossing;
                out.first_crossing_time = st.t;
                return ObserverAction::Stop;
            }
            return ObserverAction::Continue;
        });
        out.t_final = s.t;
    });
    out.energy_drift = drift.max();
    if (out.valid()) {
        out.status = out.first_crossing_time ? RunStatus::EarlyStopped : RunStatus::Completed;
    }
    return out;
}

}  // namespace kg
