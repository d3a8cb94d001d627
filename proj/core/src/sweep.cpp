#include "kg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

namespace kg {

std::vector<int> SweepPlan::default_alpha_exponents() {
    std::vector<int> e;
    for (int i = -20; i <= -2; ++i) e.push_back(i);
    return e;
}

void SweepPlan::validate() const {
    if (mu_values.empty()) throw PlanError("plan has no mu values");
    if (alpha_exponents.empty()) throw PlanError("plan has no alpha exponents");
    if (amplitude_bins < 1) throw PlanError("A_bins must be >= 1");
    if (samples_per_bin < 1) throw PlanError("samples_per_bin must be >= 1");
    if (!(std::isfinite(amplitude_lo) && std::isfinite(amplitude_hi) && amplitude_lo >= 0.0 &&
          amplitude_hi > amplitude_lo)) {
        throw PlanError("A_interval must satisfy 0 <= lo < hi");
    }
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw PlanError("t_end must be > 0");
    for (double mu : mu_values) {
        if (!(std::isfinite(mu) && mu > 0.0)) throw PlanError("mu values must be > 0");
    }
    if (std::set<double>(mu_values.begin(), mu_values.end()).size() != mu_values.size())
        throw PlanError("mu values must be distinct");
    if (std::set<int>(alpha_exponents.begin(), alpha_exponents.end()).size() != alpha_exponents.size())
        throw PlanError("alpha exponents must be distinct");
    try {
        grid.validate();
        step.validate();
    } catch (const DomainError& e) {
        throw PlanError(e.what());
    }
}

std::size_t SweepPlan::jobs_per_mu() const {
    return alpha_exponents.size() * static_cast<std::size_t>(amplitude_bins) *
           static_cast<std::size_t>(samples_per_bin);
}

std::size_t SweepPlan::job_count() const { return mu_values.size() * jobs_per_mu(); }

double SweepPlan::bin_lo(double mu, int bin) const {
    const double w = (amplitude_hi - amplitude_lo) / amplitude_bins;
    const double lo = amplitude_lo + bin * w;
    return amplitude_units == AmplitudeUnits::Normalized ? amplitude_from_normalized(lo, mu) : lo;
}

double SweepPlan::bin_hi(double mu, int bin) const {
    // The last edge is pinned to the interval end rather than lo + bins * w.
    if (bin + 1 == amplitude_bins) {
        return amplitude_units == AmplitudeUnits::Normalized ? amplitude_from_normalized(amplitude_hi, mu)
                                                             : amplitude_hi;
    }
    return bin_lo(mu, bin + 1);
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double job_uniform(std::uint64_t seed, const JobKey& key) noexcept {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t part : {key.mu_idx, key.alpha_idx, key.bin_idx, key.sample_idx}) {
        h = splitmix64(h ^ splitmix64(part));
    }
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<SweepJob> expand(const SweepPlan& plan) {
    plan.validate();
    std::vector<SweepJob> jobs;
    jobs.reserve(plan.job_count());
    for (std::size_t m = 0; m < plan.mu_values.size(); ++m) {
        const double mu = plan.mu_values[m];
        for (std::size_t a = 0; a < plan.alpha_exponents.size(); ++a) {
            const int e = plan.alpha_exponents[a];
            for (int b = 0; b < plan.amplitude_bins; ++b) {
                const double lo = plan.bin_lo(mu, b);
                const double hi = plan.bin_hi(mu, b);
                for (int s = 0; s < plan.samples_per_bin; ++s) {
                    SweepJob job;
                    job.key = {m, a, static_cast<std::size_t>(b), static_cast<std::size_t>(s)};
                    job.mu = mu;
                    job.alpha_exp = e;
                    job.alpha = -std::ldexp(1.0, e);
                    job.amplitude = lo + job_uniform(plan.seed, job.key) * (hi - lo);
                    job.amplitude_prime = normalized_amplitude(job.amplitude, mu);
                    jobs.push_back(job);
                }
            }
        }
    }
    return jobs;
}

JournalRecord run_job(const SweepJob& job, const SweepPlan& plan) {
    const auto start = std::chrono::steady_clock::now();
    JournalRecord r;
    r.mu = job.mu;
    r.alpha_exp = job.alpha_exp;
    r.alpha = job.alpha;
    r.bin_idx = job.key.bin_idx;
    r.sample_idx = job.key.sample_idx;
    r.amplitude = job.amplitude;
    r.amplitude_prime = job.amplitude_prime;
    try {
        const ModelParams params = make_params(job.alpha, 1.0, job.mu, 1.0);
        const FieldState initial = initial_state(job.amplitude, job.mu, plan.grid);
        const RunOutcome out = classify_pde(initial, params, plan.step, plan.t_end, plan.grid.dealias_factor);
        if (out.valid()) r.classification = out.code();
        r.first_crossing_time = out.first_crossing_time;
        r.energy_drift = out.energy_drift;
        r.t_final = out.t_final;
        r.status = to_string(out.status, out.failure);
        r.steps = out.steps;
    } catch (const DomainError& e) {
        r.status = "failed:domain_error";
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

namespace {

std::optional<JobKey> key_of(const SweepPlan& plan, const JournalRecord& r) {
    const auto mu_it = std::find(plan.mu_values.begin(), plan.mu_values.end(), r.mu);
    const auto a_it = std::find(plan.alpha_exponents.begin(), plan.alpha_exponents.end(), r.alpha_exp);
    if (mu_it == plan.mu_values.end() || a_it == plan.alpha_exponents.end()) return std::nullopt;
    if (r.bin_idx >= static_cast<std::size_t>(plan.amplitude_bins) ||
        r.sample_idx >= static_cast<std::size_t>(plan.samples_per_bin)) {
        return std::nullopt;
    }
    return JobKey{static_cast<std::size_t>(mu_it - plan.mu_values.begin()),
                  static_cast<std::size_t>(a_it - plan.alpha_exponents.begin()), r.bin_idx, r.sample_idx};
}

JobKey require_key(const SweepPlan& plan, const JournalRecord& r) {
    auto key = key_of(plan, r);
    if (!key) {
        throw IoError(fmt::format("journal record (mu={}, alpha_exp={}, bin={}, sample={}) is not part of the plan",
                                  r.mu, r.alpha_exp, r.bin_idx, r.sample_idx));
    }
    return *key;
}

}  // namespace

double PhaseDiagram::fraction(std::size_t bin, std::size_t alpha) const {
    if (valid[bin][alpha] == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(crossings[bin][alpha]) / static_cast<double>(valid[bin][alpha]);
}

std::vector<PhaseDiagram> aggregate(const SweepPlan& plan, const std::vector<JournalRecord>& records) {
    plan.validate();
    const auto bins = static_cast<std::size_t>(plan.amplitude_bins);
    const auto cols = plan.alpha_exponents.size();
    std::vector<PhaseDiagram> out(plan.mu_values.size());
    for (std::size_t m = 0; m < out.size(); ++m) {
        auto& d = out[m];
        d.mu = plan.mu_values[m];
        d.mu_idx = m;
        d.alpha_exponents = plan.alpha_exponents;
        for (int b = 0; b < plan.amplitude_bins; ++b) {
            d.bin_lo.push_back(plan.bin_lo(d.mu, b));
            d.bin_hi.push_back(plan.bin_hi(d.mu, b));
            d.bin_lo_prime.push_back(normalized_amplitude(d.bin_lo.back(), d.mu));
            d.bin_hi_prime.push_back(normalized_amplitude(d.bin_hi.back(), d.mu));
        }
        d.crossings.assign(bins, std::vector<int>(cols, 0));
        d.valid = d.crossings;
        d.failed = d.crossings;
    }

    std::set<JobKey> seen;
    for (const auto& r : records) {
        const JobKey key = require_key(plan, r);
        if (!seen.insert(key).second) {
            throw IoError(fmt::format("duplicate journal record for mu={}, alpha_exp={}, bin={}, sample={}", r.mu,
                                      r.alpha_exp, r.bin_idx, r.sample_idx));
        }
        auto& d = out[key.mu_idx];
        if (!r.valid()) {
            ++d.failed[key.bin_idx][key.alpha_idx];
            continue;
        }
        ++d.valid[key.bin_idx][key.alpha_idx];
        if (r.classification.value_or(0) == 1) ++d.crossings[key.bin_idx][key.alpha_idx];
    }
    return out;
}

DiagramSummary diagram_stats(const PhaseDiagram& d) {
    DiagramSummary s;
    for (std::size_t b = 0; b < d.bins(); ++b) {
        for (std::size_t a = 0; a < d.columns(); ++a) {
            s.valid_runs += static_cast<std::size_t>(d.valid[b][a]);
            s.failed_runs += static_cast<std::size_t>(d.failed[b][a]);
            const double f = d.fraction(b, a);
            if (f > 0.0 && f < 1.0) ++s.mixed_pixels;
        }
    }

    for (std::size_t a = 0; a < d.columns(); ++a) {
        ColumnBoundary col;
        col.alpha_exp = d.alpha_exponents[a];
        std::optional<std::size_t> prev;
        bool any_valid = false;
        bool all_zero = true;
        bool all_one = true;
        for (std::size_t b = 0; b < d.bins(); ++b) {
            if (d.missing(b, a)) continue;
            any_valid = true;
            const double f = d.fraction(b, a);
            all_zero = all_zero && f == 0.0;
            all_one = all_one && f == 1.0;
        }
        if (!any_valid) {
            col.undefined_reason = "no valid runs";
        } else if (all_zero) {
            col.undefined_reason = "all pixels 0 (boundary above the scanned range)";
        } else if (all_one) {
            col.undefined_reason = "all pixels 1 (boundary below the scanned range)";
        } else {
            for (std::size_t b = 0; b < d.bins(); ++b) {
                if (d.missing(b, a)) continue;
                const double f = d.fraction(b, a);
                const double centre = 0.5 * (d.bin_lo_prime[b] + d.bin_hi_prime[b]);
                if (f > 0.5) {
                    if (!prev) {
                        col.undefined_reason = "fraction exceeds 1/2 in the lowest bin (boundary below range)";
                    } else {
                        const double fp = d.fraction(*prev, a);
                        const double cp = 0.5 * (d.bin_lo_prime[*prev] + d.bin_hi_prime[*prev]);
                        col.boundary_prime = cp + (0.5 - fp) / (f - fp) * (centre - cp);
                    }
                    break;
                }
                prev = b;
            }
            if (!col.boundary_prime && col.undefined_reason.empty()) {
                col.undefined_reason = "fraction never exceeds 1/2 (boundary above the scanned range)";
            }
        }
        s.columns.push_back(col);
    }
    return s;
}

SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options) {
    const std::vector<SweepJob> jobs = expand(plan);
    if (options.journal.empty()) throw IoError("no journal path given");

    std::set<JobKey> done;
    const bool existing = std::filesystem::exists(options.journal);
    if (options.resume && existing) {
        std::vector<JournalRecord> records = read_journal(options.journal);
        if (options.retry_failed) {
            std::erase_if(records, [](const JournalRecord& r) { return !r.valid(); });
        }
        // Rewriting drops any torn trailing line left by an interrupted writer.
        write_journal(options.journal, records);
        for (const auto& r : records) {
            if (!done.insert(require_key(plan, r)).second)
                throw IoError("journal contains duplicate records for one job key");
        }
    } else {
        write_journal(options.journal, {});
    }

    std::vector<const SweepJob*> todo;
    for (const auto& job : jobs) {
        if (!done.contains(job.key)) todo.push_back(&job);
    }

    SweepResult result;
    result.scheduled = jobs.size();
    result.skipped = jobs.size() - todo.size();
    std::size_t to_run = todo.size();
    if (options.max_jobs) to_run = std::min(to_run, *options.max_jobs);
    result.pending = todo.size() - to_run;

    std::ofstream journal(options.journal, std::ios::app);
    if (!journal) throw IoError(fmt::format("cannot open journal {} for appending", options.journal.string()));

    std::mutex journal_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> completed{0};
    std::atomic<bool> io_failed{false};

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= to_run || io_failed.load()) return;
            const JournalRecord record = run_job(*todo[i], plan);
            const std::string line = format_record(record);
            std::lock_guard lock(journal_mutex);
            journal << line << '\n';
            journal.flush();
            if (!journal) io_failed = true;
            const std::size_t n = ++completed;
            if (options.progress) options.progress(n, to_run);
        }
    };

    const int width = std::max(1, options.parallelism);
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    journal.close();
    if (io_failed) throw IoError(fmt::format("write to journal {} failed", options.journal.string()));

    result.executed = completed.load();
    const std::vector<JournalRecord> records = read_journal(options.journal);
    result.failed = static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const JournalRecord& r) { return !r.valid(); }));
    result.diagrams = aggregate(plan, records);
    return result;
}

}  // namespace kg
