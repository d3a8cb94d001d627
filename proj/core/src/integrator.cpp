#include "kg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "small_linalg.hpp"

namespace kg {

IRKScheme IRKScheme::gauss_legendre(int stages) {
    IRKScheme s;
    s.stages = stages;
    if (stages == 2) {
        const double r = std::sqrt(3.0) / 6.0;
        s.a[0] = {0.25, 0.25 - r, 0.0};
        s.a[1] = {0.25 + r, 0.25, 0.0};
        s.b = {0.5, 0.5, 0.0};
        s.c = {0.5 - r, 0.5 + r, 0.0};
    } else if (stages == 3) {
        const double r = std::sqrt(15.0);
        s.a[0] = {5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0};
        s.a[1] = {5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0};
        s.a[2] = {5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0};
        s.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
        s.c = {0.5 - r / 10.0, 0.5, 0.5 + r / 10.0};
    } else {
        throw DomainError("Gauss-Legendre scheme supports 2 or 3 stages");
    }

    // d solves A^T d = b.
    const auto dim = static_cast<std::size_t>(stages);
    double at[9] = {};
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) at[i * dim + j] = s.a[j][i];
    detail::invert_in_place(std::span<double>(at, dim * dim), dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += at[i * dim + j] * s.b[j];
        s.d[i] = acc;
    }
    return s;
}

void StepConfig::validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) throw DomainError("time step dt must be finite and > 0");
    if (scheme.stages < 2 || scheme.stages > IRKScheme::kMaxStages)
        throw DomainError("Gauss-Legendre scheme supports 2 or 3 stages");
    if (!(scheme.stage_tol > 0.0) || scheme.max_stage_iters < 1)
        throw DomainError("stage tolerance and iteration limit must be positive");
}

namespace {

using Complex = std::complex<double>;

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double e : x) m = std::max(m, std::abs(e));
    return m;
}

}  // namespace

struct PdeIntegrator::Impl {
    Impl(const GridSpec& grid, IRKScheme s, const ModelParams& p)
        : op(grid), scheme(s), params(p), modes(op.modes()), stages(static_cast<std::size_t>(s.stages)) {
        y_u.resize(modes);
        y_v.resize(modes);
        z.assign(stages * 2, std::vector<Complex>(modes));
        z_next = z;
        force.assign(stages, std::vector<Complex>(modes));
        lambda.resize(modes);
        for (std::size_t k = 0; k < modes; ++k) {
            const double kk = op.wavenumber(k);
            lambda[k] = params.c_sq() * kk * kk;
        }
        limit = blowup_limit(params.mu());
    }

    SpectralOperator op;
    IRKScheme scheme;
    ModelParams params;
    std::size_t modes;
    std::size_t stages;
    double limit;
    int last_iters = 0;

    std::vector<Complex> y_u, y_v;
    // z[2i] / z[2i+1]: u / v components of stage increment i.
    std::vector<std::vector<Complex>> z, z_next, force;
    std::vector<double> lambda;
    std::vector<Complex> stage_u;

    // (I - h A (x) L_k)^{-1} per mode, row-major, for the cached h.
    double cached_h = 0.0;
    std::vector<double> inverses;

    void prepare(double h) {
        if (h == cached_h && !inverses.empty()) return;
        const std::size_t dim = 2 * stages;
        inverses.assign(modes * dim * dim, 0.0);
        for (std::size_t k = 0; k < modes; ++k) {
            std::span<double> m(inverses.data() + k * dim * dim, dim * dim);
            // L_k = [[0, 1], [-lambda_k, 0]].
            const double l[2][2] = {{0.0, 1.0}, {-lambda[k], 0.0}};
            for (std::size_t i = 0; i < stages; ++i)
                for (std::size_t p = 0; p < 2; ++p)
                    for (std::size_t j = 0; j < stages; ++j)
                        for (std::size_t q = 0; q < 2; ++q) {
                            const double id = (i == j && p == q) ? 1.0 : 0.0;
                            m[(2 * i + p) * dim + (2 * j + q)] = id - h * scheme.a[i][j] * l[p][q];
                        }
            detail::invert_in_place(m, dim);
        }
        cached_h = h;
    }

    // Conservative bound on the grid max-norm of a real field from its
    // half spectrum: (|X_0| + 2 sum_{0<k<n/2} |X_k| + |X_{n/2}|) / n.
    double spectral_sup_bound(const std::vector<Complex>& a, const std::vector<Complex>& b) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < modes; ++k) {
            const double w = (k == 0 || k == modes - 1) ? 1.0 : 2.0;
            acc += w * std::abs(a[k] - b[k]);
        }
        return acc / static_cast<double>(op.size());
    }

    void step(FieldState& state, double h) {
        const double t0 = state.t;
        op.forward(state.u, y_u);
        op.forward(state.v, y_v);
        prepare(h);

        const double scale = std::max({max_abs(state.u), max_abs(state.v), 1e-300});
        const double mu = params.mu();
        const std::size_t dim = 2 * stages;
        stage_u.resize(modes);

        for (auto& zi : z) std::fill(zi.begin(), zi.end(), Complex{});

        double delta = 0.0;
        int iter = 0;
        for (iter = 1; iter <= scheme.max_stage_iters; ++iter) {
            for (std::size_t i = 0; i < stages; ++i) {
                for (std::size_t k = 0; k < modes; ++k) stage_u[k] = y_u[k] + z[2 * i][k];
                const double peak = op.nonlinear_force_spectrum(stage_u, mu, force[i]);
                if (!(peak <= limit)) {
                    throw NumericalBlowup(fmt::format("numerical blow-up at t={} (stage |u|={})", t0, peak), t0);
                }
            }

            Complex rhs[2 * IRKScheme::kMaxStages];
            delta = 0.0;
            for (std::size_t k = 0; k < modes; ++k) {
                for (std::size_t i = 0; i < stages; ++i) {
                    Complex nonlinear{};
                    for (std::size_t j = 0; j < stages; ++j) nonlinear += scheme.a[i][j] * force[j][k];
                    rhs[2 * i] = h * scheme.c[i] * y_v[k];
                    rhs[2 * i + 1] = h * (scheme.c[i] * -lambda[k] * y_u[k] + nonlinear);
                }
                const double* minv = inverses.data() + k * dim * dim;
                for (std::size_t r = 0; r < dim; ++r) {
                    Complex acc{};
                    for (std::size_t q = 0; q < dim; ++q) acc += minv[r * dim + q] * rhs[q];
                    z_next[r][k] = acc;
                }
            }
            for (std::size_t r = 0; r < dim; ++r) delta = std::max(delta, spectral_sup_bound(z_next[r], z[r]));
            std::swap(z, z_next);
            if (!std::isfinite(delta)) {
                throw NumericalBlowup(fmt::format("non-finite stage values at t={}", t0), t0);
            }
            if (delta <= scheme.stage_tol * scale) break;
        }
        last_iters = iter;
        if (iter > scheme.max_stage_iters) {
            throw StageDivergence(
                fmt::format("stage iteration did not converge at t={} (dt={}, last increment {:.3e})", t0, h,
                            delta),
                t0);
        }

        for (std::size_t k = 0; k < modes; ++k) {
            Complex du{}, dv{};
            for (std::size_t i = 0; i < stages; ++i) {
                du += scheme.d[i] * z[2 * i][k];
                dv += scheme.d[i] * z[2 * i + 1][k];
            }
            y_u[k] += du;
            y_v[k] += dv;
        }
        op.inverse(y_u, state.u);
        op.inverse(y_v, state.v);
        state.t = t0 + h;

        const double peak = max_abs(state.u);
        if (!(peak <= limit) || !state.finite()) {
            throw NumericalBlowup(fmt::format("numerical blow-up at t={} (|u|={})", t0, peak), t0);
        }
    }
};

PdeIntegrator::PdeIntegrator(const GridSpec& grid, IRKScheme scheme, const ModelParams& params) {
    StepConfig{1.0, scheme}.validate();
    impl_ = std::make_unique<Impl>(grid, scheme, params);
}

PdeIntegrator::~PdeIntegrator() = default;
PdeIntegrator::PdeIntegrator(PdeIntegrator&&) noexcept = default;
PdeIntegrator& PdeIntegrator::operator=(PdeIntegrator&&) noexcept = default;

void PdeIntegrator::step(FieldState& state, double dt) {
    if (!(std::isfinite(dt) && dt != 0.0)) throw DomainError("step size must be finite and nonzero");
    if (state.size() != impl_->op.size() || state.v.size() != state.u.size())
        throw DomainError("field length does not match the grid");
    impl_->step(state, dt);
}

std::size_t PdeIntegrator::integrate(FieldState& state, double t_end, double dt, const FieldObserver& observer) {
    if (!(std::isfinite(dt) && dt > 0.0)) throw DomainError("time step dt must be finite and > 0");
    if (!(t_end >= state.t)) throw DomainError("t_end must not precede the state time");
    const double t0 = state.t;
    std::size_t count = 0;
    while (state.t < t_end) {
        const double remaining = t_end - state.t;
        double h = dt;
        double next = t0 + static_cast<double>(count + 1) * dt;
        if (remaining <= dt * (1.0 + 1e-9)) {
            if (remaining < dt * (1.0 - 1e-9)) h = remaining;
            next = t_end;
        }
        step(state, h);
        state.t = next;
        ++count;
        if (observer && observer(state) == ObserverAction::Stop) break;
    }
    return count;
}

int PdeIntegrator::last_iterations() const noexcept { return impl_->last_iters; }
SpectralOperator& PdeIntegrator::spectral() noexcept { return impl_->op; }
const ModelParams& PdeIntegrator::params() const noexcept { return impl_->params; }

FieldState irk_step(const FieldState& state, const StepConfig& cfg, const ModelParams& params,
                    const GridSpec& grid) {
    cfg.validate();
    GridSpec g = grid;
    g.n = state.size();
    PdeIntegrator integrator(g, cfg.scheme, params);
    FieldState out = state;
    integrator.step(out, cfg.dt);
    return out;
}

FieldState integrate(const FieldState& state, double t_end, const StepConfig& cfg, const ModelParams& params,
                     const FieldObserver& observer, const GridSpec& grid) {
    cfg.validate();
    GridSpec g = grid;
    g.n = state.size();
    PdeIntegrator integrator(g, cfg.scheme, params);
    FieldState out = state;
    integrator.integrate(out, t_end, cfg.dt, observer);
    return out;
}

FieldState rk4_reference_step(const FieldState& state, double dt, const ModelParams& params,
                              SpectralOperator& op) {
    const std::size_t n = state.size();
    const double limit = blowup_limit(params.mu());
    auto guard = [&](const FieldState& s) {
        const double peak = max_abs(s.u);
        if (!(peak <= limit) || !s.finite()) {
            throw NumericalBlowup(fmt::format("numerical blow-up at t={} (|u|={})", state.t, peak), state.t);
        }
    };

    FieldRates k1 = op.rhs(state, params);
    FieldState tmp = state;
    auto stage = [&](const FieldRates& k, double w) {
        for (std::size_t j = 0; j < n; ++j) {
            tmp.u[j] = state.u[j] + w * dt * k.du[j];
            tmp.v[j] = state.v[j] + w * dt * k.dv[j];
        }
        guard(tmp);
    };
    stage(k1, 0.5);
    FieldRates k2 = op.rhs(tmp, params);
    stage(k2, 0.5);
    FieldRates k3 = op.rhs(tmp, params);
    stage(k3, 1.0);
    FieldRates k4 = op.rhs(tmp, params);

    FieldState out = state;
    for (std::size_t j = 0; j < n; ++j) {
        out.u[j] += dt / 6.0 * (k1.du[j] + 2.0 * k2.du[j] + 2.0 * k3.du[j] + k4.du[j]);
        out.v[j] += dt / 6.0 * (k1.dv[j] + 2.0 * k2.dv[j] + 2.0 * k3.dv[j] + k4.dv[j]);
    }
    out.t = state.t + dt;
    guard(out);
    return out;
}

FieldState rk4_reference_step(const FieldState& state, double dt, const ModelParams& params) {
    SpectralOperator op(GridSpec{state.size(), 2});
    return rk4_reference_step(state, dt, params, op);
}

}  // namespace kg
