#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "kg/integrator.hpp"
#include "kg/model.hpp"
#include "kg/spectral.hpp"

namespace kg::cli {

/// Settings of a single-trajectory run, merged from defaults, an optional
/// JSON file, and command-line flags (in that order of precedence).
struct RunConfig {
    double mu = 1.0;
    std::optional<double> alpha;
    std::optional<int> alpha_exp;
    double beta = 1.0;
    double length = 1.0;
    std::optional<double> amplitude;
    std::optional<double> amplitude_prime;
    GridSpec grid{};
    StepConfig step{};
    double t_end = 16384.0;
    int sample_every = 16;
    std::filesystem::path out = ".";

    /// Applies keys of a JSON config object; unknown keys throw DomainError.
    void merge_json(const nlohmann::json& j);

    /// Throws DomainError on inconsistent or missing settings.
    void validate(bool needs_alpha) const;
    double resolved_alpha() const;
    double resolved_amplitude() const;
    ModelParams params() const;

    nlohmann::json to_json(bool with_alpha) const;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace kg::cli
