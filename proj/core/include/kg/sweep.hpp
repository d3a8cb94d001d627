#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kg/classifier.hpp"
#include "kg/integrator.hpp"
#include "kg/spectral.hpp"

namespace kg {

/// Units in which the amplitude interval of a plan is given.
enum class AmplitudeUnits { Absolute, Normalized };

/// Description of a phase-diagram campaign: for every mu, every
/// alpha = -2^e, every amplitude bin, samples_per_bin random amplitudes.
struct SweepPlan {
    std::vector<double> mu_values{0.015625, 0.25, 1.0, 2.0};
    std::vector<int> alpha_exponents = default_alpha_exponents();
    AmplitudeUnits amplitude_units = AmplitudeUnits::Absolute;
    double amplitude_lo = 0.04;
    double amplitude_hi = 0.13;
    int amplitude_bins = 24;
    int samples_per_bin = 32;
    double t_end = 16384.0;
    std::uint64_t seed = 0x6b67'7377'6565'7001ULL;
    GridSpec grid{};
    StepConfig step{};

    static std::vector<int> default_alpha_exponents();
    /// Normalized-mode interval used when a plan asks for A' units without
    /// giving one.
    static constexpr double kNormalizedLo = 0.5;
    static constexpr double kNormalizedHi = 1.6;

    /// Throws PlanError on empty or inconsistent ranges.
    void validate() const;
    std::size_t jobs_per_mu() const;
    std::size_t job_count() const;

    /// Bin edges in absolute A for the given mu.
    double bin_lo(double mu, int bin) const;
    double bin_hi(double mu, int bin) const;
};

struct JobKey {
    std::size_t mu_idx = 0;
    std::size_t alpha_idx = 0;
    std::size_t bin_idx = 0;
    std::size_t sample_idx = 0;

    auto operator<=>(const JobKey&) const = default;
};

struct SweepJob {
    JobKey key;
    double mu = 0.0;
    int alpha_exp = 0;
    double alpha = 0.0;
    double amplitude = 0.0;
    double amplitude_prime = 0.0;
};

/// Uniform draw in [0, 1) that depends only on (seed, key).
double job_uniform(std::uint64_t seed, const JobKey& key) noexcept;

/// All jobs of the plan in lexicographic key order.
std::vector<SweepJob> expand(const SweepPlan& plan);

/// One journal line.
struct JournalRecord {
    double mu = 0.0;
    int alpha_exp = 0;
    double alpha = 0.0;
    std::size_t bin_idx = 0;
    std::size_t sample_idx = 0;
    double amplitude = 0.0;
    double amplitude_prime = 0.0;
    std::optional<int> classification;
    std::optional<double> first_crossing_time;
    double energy_drift = 0.0;
    double t_final = 0.0;
    std::string status;
    std::size_t steps = 0;
    double wall_ms = 0.0;

    bool valid() const { return status.rfind("failed", 0) != 0; }
};

/// Runs one job to completion with the plan's numerics.
JournalRecord run_job(const SweepJob& job, const SweepPlan& plan);

struct PhaseDiagram {
    double mu = 0.0;
    std::size_t mu_idx = 0;
    std::vector<int> alpha_exponents;
    /// Bin edges in absolute A and in A'.
    std::vector<double> bin_lo, bin_hi, bin_lo_prime, bin_hi_prime;
    /// Indexed [bin][alpha].
    std::vector<std::vector<int>> crossings;
    std::vector<std::vector<int>> valid;
    std::vector<std::vector<int>> failed;

    std::size_t bins() const noexcept { return bin_lo.size(); }
    std::size_t columns() const noexcept { return alpha_exponents.size(); }
    /// Crossing / valid runs; NaN when the pixel has no valid run.
    double fraction(std::size_t bin, std::size_t alpha) const;
    bool missing(std::size_t bin, std::size_t alpha) const { return valid[bin][alpha] == 0; }
};

/// Groups journal records into one diagram per mu. Throws IoError on
/// records that do not belong to the plan or on duplicate keys.
std::vector<PhaseDiagram> aggregate(const SweepPlan& plan, const std::vector<JournalRecord>& records);

struct ColumnBoundary {
    int alpha_exp = 0;
    /// A' where the fraction first exceeds 1/2, interpolated between bin
    /// centres. Empty when the column is undefined.
    std::optional<double> boundary_prime;
    /// Why the column has no boundary (empty when it has one).
    std::string undefined_reason;
};

struct DiagramSummary {
    std::vector<ColumnBoundary> columns;
    std::size_t mixed_pixels = 0;
    std::size_t valid_runs = 0;
    std::size_t failed_runs = 0;
};

DiagramSummary diagram_stats(const PhaseDiagram& d);

struct SweepOptions {
    int parallelism = 1;
    std::filesystem::path journal;
    /// Keep existing journal records and only run missing keys.
    bool resume = false;
    /// With resume: drop failed records and run those keys again.
    bool retry_failed = false;
    /// Stop after executing this many jobs (the rest stay pending).
    std::optional<std::size_t> max_jobs;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SweepResult {
    std::vector<PhaseDiagram> diagrams;
    std::size_t scheduled = 0;
    std::size_t executed = 0;
    std::size_t skipped = 0;
    std::size_t pending = 0;
    std::size_t failed = 0;
};

/// Executes every job not yet in the journal on a pool of worker threads,
/// appending one record per job, then aggregates the whole journal.
SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options);

// Journal file access.
std::string journal_header();
std::string format_record(const JournalRecord& r);
JournalRecord parse_record(const std::string& line);
/// Reads all complete records; a truncated trailing line is ignored.
std::vector<JournalRecord> read_journal(const std::filesystem::path& path);
/// Rewrites the journal with exactly the given records.
void write_journal(const std::filesystem::path& path, const std::vector<JournalRecord>& records);

// Plan files (JSON).
SweepPlan plan_from_json(const std::string& text);
SweepPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json(const SweepPlan& plan);

// Diagram outputs.
std::string diagram_csv(const PhaseDiagram& d);
std::string diagram_matrix(const PhaseDiagram& d);
std::string diagram_pgm(const PhaseDiagram& d);
std::string diagram_mask_pgm(const PhaseDiagram& d);
/// Writes phase_mu<i>.{csv,dat,pgm} and phase_mu<i>_mask.pgm per diagram
/// plus sweep_meta.json with the plan and summaries. Returns written paths.
std::vector<std::filesystem::path> write_diagrams(const std::filesystem::path& dir, const SweepPlan& plan,
                                                  const std::vector<PhaseDiagram>& diagrams);

}  // namespace kg
