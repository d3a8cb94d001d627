#include "kgsim/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "kg/errors.hpp"

namespace kg::cli {

using nlohmann::json;

void RunConfig::merge_json(const json& j) {
    static const std::set<std::string> keys = {"mu", "alpha", "alpha_exp", "beta", "L", "A", "A_prime",
                                               "t_end", "sample_every", "out", "numerics"};
    if (!j.is_object()) throw DomainError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!keys.contains(key)) throw DomainError(fmt::format("unknown config key '{}'", key));
    }
    try {
        if (j.contains("mu")) mu = j["mu"].get<double>();
        if (j.contains("alpha")) alpha = j["alpha"].get<double>();
        if (j.contains("alpha_exp")) alpha_exp = j["alpha_exp"].get<int>();
        if (j.contains("beta")) beta = j["beta"].get<double>();
        if (j.contains("L")) length = j["L"].get<double>();
        if (j.contains("A")) amplitude = j["A"].get<double>();
        if (j.contains("A_prime")) amplitude_prime = j["A_prime"].get<double>();
        if (j.contains("t_end")) t_end = j["t_end"].get<double>();
        if (j.contains("sample_every")) sample_every = j["sample_every"].get<int>();
        if (j.contains("out")) out = j["out"].get<std::string>();
        if (j.contains("numerics")) {
            const json& n = j["numerics"];
            if (n.contains("n")) grid.n = n["n"].get<std::size_t>();
            if (n.contains("dealias_factor")) grid.dealias_factor = n["dealias_factor"].get<int>();
            if (n.contains("dt")) step.dt = n["dt"].get<double>();
            if (n.contains("stages")) {
                const auto keep = step.scheme;
                step.scheme = IRKScheme::gauss_legendre(n["stages"].get<int>());
                step.scheme.stage_tol = keep.stage_tol;
                step.scheme.max_stage_iters = keep.max_stage_iters;
            }
            if (n.contains("stage_tol")) step.scheme.stage_tol = n["stage_tol"].get<double>();
            if (n.contains("max_stage_iters")) step.scheme.max_stage_iters = n["max_stage_iters"].get<int>();
        }
    } catch (const json::exception& e) {
        throw DomainError(fmt::format("config value has the wrong type: {}", e.what()));
    }
}

void RunConfig::validate(bool needs_alpha) const {
    if (needs_alpha) {
        if (alpha && alpha_exp) throw DomainError("--alpha and --alpha-exp are mutually exclusive");
        (void)params();
    } else if (!(std::isfinite(mu) && mu > 0.0)) {
        throw DomainError("mu must satisfy mu > 0");
    }
    if (amplitude && amplitude_prime) throw DomainError("--A and --A-prime are mutually exclusive");
    if (!amplitude && !amplitude_prime) throw DomainError("one of --A or --A-prime is required");
    (void)resolved_amplitude();
    grid.validate();
    step.validate();
    if (!(std::isfinite(t_end) && t_end >= 0.0)) throw DomainError("t_end must be >= 0");
    if (sample_every < 1) throw DomainError("sample-every must be >= 1");
}

double RunConfig::resolved_alpha() const {
    if (alpha_exp) return -std::ldexp(1.0, *alpha_exp);
    if (alpha) return *alpha;
    return -0.25;
}

double RunConfig::resolved_amplitude() const {
    if (amplitude_prime) return amplitude_from_normalized(*amplitude_prime, mu);
    if (!(amplitude && std::isfinite(*amplitude) && *amplitude >= 0.0))
        throw DomainError("amplitude must satisfy A >= 0");
    return *amplitude;
}

ModelParams RunConfig::params() const { return make_params(resolved_alpha(), beta, mu, length); }

json RunConfig::to_json(bool with_alpha) const {
    const double a = resolved_amplitude();
    json j{{"mu", mu},
           {"A", a},
           {"A_prime", normalized_amplitude(a, mu)},
           {"t_end", t_end},
           {"sample_every", sample_every},
           {"numerics",
            {{"n", grid.n},
             {"dealias_factor", grid.dealias_factor},
             {"dt", step.dt},
             {"stages", step.scheme.stages},
             {"stage_tol", step.scheme.stage_tol},
             {"max_stage_iters", step.scheme.max_stage_iters}}}};
    if (with_alpha) {
        const ModelParams p = params();
        j["alpha"] = p.alpha();
        j["beta"] = p.beta();
        j["L"] = p.length();
        j["c_sq"] = p.c_sq();
    }
    return j;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(fmt::format("cannot open config file {}", path.string()));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(fmt::format("config file {} is not valid JSON: {}", path.string(), e.what()));
    }
}

}  // namespace kg::cli
