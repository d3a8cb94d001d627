#include "kg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kg::verify {

namespace {

const double kMuPanels[] = {0.015625, 0.25, 1.0, 2.0};

// c_sq = 0.25 corresponds to alpha = -1/4 with beta = L = 1.
ModelParams reference_params() { return make_params(-0.25, 1.0, 1.0, 1.0); }

double max_diff(std::span<const double> a, std::span<const double> b, std::size_t stride_b = 1) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j * stride_b]));
    return m;
}

// Mean spacing of same-direction zero crossings of a sampled signal.
double period_from_crossings(const std::vector<double>& t, const std::vector<double>& x) {
    std::vector<double> ups;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i - 1] < 0.0 && x[i] >= 0.0) {
            const double f = x[i - 1] / (x[i - 1] - x[i]);
            ups.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    }
    if (ups.size() < 2) return std::nan("");
    return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

}  // namespace

double energy_drift(double t_end, double dt, int stages) {
    const GridSpec grid{64, 2};
    const ModelParams params = reference_params();
    PdeIntegrator integrator(grid, IRKScheme::gauss_legendre(stages), params);
    FieldState s = initial_state(0.1, 1.0, grid);
    auto& op = integrator.spectral();
    const double e0 = op.energy(s, params);
    double worst = 0.0;
    integrator.integrate(s, t_end, dt, [&](const FieldState& st) {
        worst = std::max(worst, std::abs(op.energy(st, params) - e0) / std::abs(e0));
        return ObserverAction::Continue;
    });
    return worst;
}

double OrderStudy::min_order() const {
    return orders.empty() ? std::nan("") : *std::min_element(orders.begin(), orders.end());
}

OrderStudy temporal_order(int stages, std::vector<double> dts, double t_end) {
    const double mu = 1.0;
    const double amplitude = 0.2;
    const IRKScheme scheme = IRKScheme::gauss_legendre(stages);
    const OdeState ref = ode_integrate(amplitude, mu, t_end, dts.back() / 64.0, {}, scheme);
    OrderStudy study;
    study.dts = std::move(dts);
    for (double dt : study.dts) {
        const OdeState s = ode_integrate(amplitude, mu, t_end, dt, {}, scheme);
        study.errors.push_back(std::max(std::abs(s.u - ref.u), std::abs(s.v - ref.v)));
    }
    for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
        study.orders.push_back(std::log2(study.errors[i] / study.errors[i + 1]) /
                               std::log2(study.dts[i] / study.dts[i + 1]));
    }
    return study;
}

OrderStudy temporal_order(int stages) {
    if (stages == 3) return temporal_order(3, {0.5, 0.25, 0.125});
    return temporal_order(stages, {0.25, 0.125, 0.0625});
}

double spectral_agreement() {
    const ModelParams params = reference_params();
    StepConfig cfg;
    cfg.dt = 1.0 / 64.0;
    auto run = [&](std::size_t n) {
        return integrate(initial_state(0.1, 1.0, GridSpec{n, 2}), 1.0, cfg, params, {}, GridSpec{n, 2});
    };
    const FieldState coarse = run(64);
    const FieldState fine = run(256);
    return std::max(max_diff(coarse.u, fine.u, 4), max_diff(coarse.v, fine.v, 4));
}

double ode_threshold(double mu, double t_end, double dt) {
    const double root = std::sqrt(mu);
    double lo = 0.0;          // confined: the stationary state
    double hi = 0.99 * root;  // initial value stays positive
    auto crossing = [&](double a) {
        return classify_ode(a, mu, dt, t_end).classification == Classification::Crossing;
    };
    if (crossing(lo) || !crossing(hi)) return std::nan("");
    while (hi - lo > 1e-6 * root) {
        const double mid = 0.5 * (lo + hi);
        (crossing(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double PeriodMeasurement::rel_error() const { return std::abs(measured - expected) / expected; }

PeriodMeasurement ode_linear_period(double mu) {
    const double dt = 1.0 / 64.0;
    const double root = std::sqrt(mu);
    const double expected = 2.0 * std::numbers::pi / std::sqrt(2.0 * mu);
    std::vector<double> t{0.0}, x{1e-4 * root};
    ode_integrate(1e-4 * root, mu, 12.0 * expected, dt, [&](const OdeState& s) {
        t.push_back(s.t);
        x.push_back(s.u - root);
        return ObserverAction::Continue;
    });
    return {period_from_crossings(t, x), expected};
}

PeriodMeasurement pde_linear_period(double mu, double c_sq) {
    const GridSpec grid{64, 2};
    const ModelParams params = make_params(-c_sq, 1.0, mu, 1.0);
    const double expected = 2.0 * std::numbers::pi / linearized_frequency(params, 1);
    FieldState s = initial_state(1e-4 * std::sqrt(mu), mu, grid);
    auto mode1 = [&](const FieldState& st) {
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) acc += st.u[j] * std::sin(2.0 * std::numbers::pi * grid.x(j));
        return 2.0 * acc / static_cast<double>(grid.n);
    };
    std::vector<double> t{0.0}, x{mode1(s)};
    PdeIntegrator integrator(grid, IRKScheme::gauss_legendre(2), params);
    integrator.integrate(s, 12.0 * expected, 1.0 / 64.0, [&](const FieldState& st) {
        t.push_back(st.t);
        x.push_back(mode1(st));
        return ObserverAction::Continue;
    });
    return {period_from_crossings(t, x), expected};
}

bool AgreementCase::agree() const {
    return pde.valid() && ode.valid() && pde.classification == ode.classification;
}

std::vector<AgreementCase> pde_ode_agreement(double t_end) {
    std::vector<AgreementCase> cases;
    const StepConfig cfg;
    const GridSpec grid{64, 2};
    for (double mu : kMuPanels) {
        for (double a_prime : {0.5, 2.0}) {
            AgreementCase c;
            c.mu = mu;
            c.a_prime = a_prime;
            const double amplitude = amplitude_from_normalized(a_prime, mu);
            c.pde = classify_pde(initial_state(amplitude, mu, grid), params_from_alpha_exp(-20, mu), cfg, t_end);
            c.ode = classify_ode(amplitude, mu, cfg.dt, t_end);
            cases.push_back(c);
        }
    }
    return cases;
}

double cross_oracle() {
    const GridSpec grid{64, 2};
    const ModelParams params = reference_params();
    const double dt = 1.0 / 256.0;
    const FieldState start = initial_state(0.1, 1.0, grid);

    StepConfig cfg;
    cfg.dt = dt;
    const FieldState implicit_end = integrate(start, 10.0, cfg, params, {}, grid);

    SpectralOperator op(grid);
    FieldState explicit_end = start;
    for (int i = 0; i < 2560; ++i) explicit_end = rk4_reference_step(explicit_end, dt, params, op);

    return std::max(max_diff(implicit_end.u, explicit_end.u), max_diff(implicit_end.v, explicit_end.v));
}

}  // namespace kg::verify
