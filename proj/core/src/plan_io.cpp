#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "kg/sweep.hpp"

namespace kg {

using nlohmann::json;

namespace {

const std::set<std::string> kPlanKeys = {"mu_values", "alpha_exponents", "A_units", "A_interval", "A_bins",
                                         "samples_per_bin", "t_end", "seed", "numerics"};
const std::set<std::string> kNumericsKeys = {"n", "dealias_factor", "dt", "stages", "stage_tol",
                                             "max_stage_iters"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw PlanError(fmt::format("unknown key '{}' in {}", key, where));
    }
}

}  // namespace

SweepPlan plan_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw PlanError(fmt::format("plan is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) throw PlanError("plan must be a JSON object");
    reject_unknown(j, kPlanKeys, "plan");

    SweepPlan p;
    try {
        if (j.contains("mu_values")) p.mu_values = j.at("mu_values").get<std::vector<double>>();
        if (j.contains("alpha_exponents")) p.alpha_exponents = j.at("alpha_exponents").get<std::vector<int>>();
        if (j.contains("A_units")) {
            const auto u = j.at("A_units").get<std::string>();
            if (u == "absolute") {
                p.amplitude_units = AmplitudeUnits::Absolute;
            } else if (u == "normalized") {
                p.amplitude_units = AmplitudeUnits::Normalized;
                p.amplitude_lo = SweepPlan::kNormalizedLo;
                p.amplitude_hi = SweepPlan::kNormalizedHi;
            } else {
                throw PlanError("A_units must be \"absolute\" or \"normalized\"");
            }
        }
        if (j.contains("A_interval")) {
            const auto iv = j.at("A_interval").get<std::vector<double>>();
            if (iv.size() != 2) throw PlanError("A_interval must have two entries");
            p.amplitude_lo = iv[0];
            p.amplitude_hi = iv[1];
        }
        if (j.contains("A_bins")) p.amplitude_bins = j.at("A_bins").get<int>();
        if (j.contains("samples_per_bin")) p.samples_per_bin = j.at("samples_per_bin").get<int>();
        if (j.contains("t_end")) p.t_end = j.at("t_end").get<double>();
        if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("numerics")) {
            const json& n = j.at("numerics");
            reject_unknown(n, kNumericsKeys, "numerics");
            if (n.contains("n")) p.grid.n = n.at("n").get<std::size_t>();
            if (n.contains("dealias_factor")) p.grid.dealias_factor = n.at("dealias_factor").get<int>();
            if (n.contains("dt")) p.step.dt = n.at("dt").get<double>();
            if (n.contains("stages")) {
                const double tol = p.step.scheme.stage_tol;
                const int iters = p.step.scheme.max_stage_iters;
                try {
                    p.step.scheme = IRKScheme::gauss_legendre(n.at("stages").get<int>());
                } catch (const DomainError& e) {
                    throw PlanError(e.what());
                }
                p.step.scheme.stage_tol = tol;
                p.step.scheme.max_stage_iters = iters;
            }
            if (n.contains("stage_tol")) p.step.scheme.stage_tol = n.at("stage_tol").get<double>();
            if (n.contains("max_stage_iters")) p.step.scheme.max_stage_iters = n.at("max_stage_iters").get<int>();
        }
    } catch (const json::exception& e) {
        throw PlanError(fmt::format("plan field has the wrong type: {}", e.what()));
    }
    p.validate();
    return p;
}

SweepPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open plan file {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return plan_from_json(buf.str());
}

std::string plan_to_json(const SweepPlan& p) {
    json j;
    j["mu_values"] = p.mu_values;
    j["alpha_exponents"] = p.alpha_exponents;
    j["A_units"] = p.amplitude_units == AmplitudeUnits::Normalized ? "normalized" : "absolute";
    j["A_interval"] = {p.amplitude_lo, p.amplitude_hi};
    j["A_bins"] = p.amplitude_bins;
    j["samples_per_bin"] = p.samples_per_bin;
    j["t_end"] = p.t_end;
    j["seed"] = p.seed;
    j["numerics"] = {{"n", p.grid.n},
                     {"dealias_factor", p.grid.dealias_factor},
                     {"dt", p.step.dt},
                     {"stages", p.step.scheme.stages},
                     {"stage_tol", p.step.scheme.stage_tol},
                     {"max_stage_iters", p.step.scheme.max_stage_iters}};
    return j.dump(2);
}

}  // namespace kg
