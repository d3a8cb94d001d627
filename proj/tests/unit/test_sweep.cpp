#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "kg/sweep.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kg_unit_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

kg::SweepPlan tiny_plan() {
    kg::SweepPlan p;
    p.mu_values = {0.015625, 1.0};
    p.alpha_exponents = {-14, -2};
    p.amplitude_units = kg::AmplitudeUnits::Normalized;
    p.amplitude_lo = 0.6;
    p.amplitude_hi = 1.8;
    p.amplitude_bins = 3;
    p.samples_per_bin = 2;
    p.t_end = 128.0;
    p.seed = 42;
    return p;
}

TEST(SweepPlan, DefaultJobCount) {
    const kg::SweepPlan p;
    EXPECT_EQ(p.alpha_exponents.size(), 19u);
    EXPECT_EQ(p.alpha_exponents.front(), -20);
    EXPECT_EQ(p.alpha_exponents.back(), -2);
    EXPECT_EQ(p.jobs_per_mu(), 14592u);
    EXPECT_EQ(p.job_count(), 4u * 14592u);
    kg::SweepPlan one = p;
    one.mu_values = {1.0};
    EXPECT_EQ(expand(one).size(), 14592u);
}

TEST(SweepPlan, SmallCount) {
    kg::SweepPlan p;
    p.mu_values = {1.0};
    p.alpha_exponents = {-4, -2};
    p.amplitude_bins = 3;
    p.samples_per_bin = 4;
    EXPECT_EQ(p.job_count(), 24u);
    EXPECT_EQ(kg::expand(p).size(), 24u);
}

TEST(SweepPlan, Validation) {
    auto bad = tiny_plan();
    bad.mu_values.clear();
    EXPECT_THROW(bad.validate(), kg::PlanError);
    bad = tiny_plan();
    bad.amplitude_bins = 0;
    EXPECT_THROW(bad.validate(), kg::PlanError);
    bad = tiny_plan();
    bad.amplitude_hi = bad.amplitude_lo;
    EXPECT_THROW(bad.validate(), kg::PlanError);
    bad = tiny_plan();
    bad.mu_values = {-1.0};
    EXPECT_THROW(bad.validate(), kg::PlanError);
    bad = tiny_plan();
    bad.t_end = 0.0;
    EXPECT_THROW(bad.validate(), kg::PlanError);
    EXPECT_NO_THROW(tiny_plan().validate());
}

TEST(Expand, DeterministicAndOrdered) {
    const auto p = tiny_plan();
    const auto a = kg::expand(p), b = kg::expand(p);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].key, b[i].key);
        EXPECT_EQ(a[i].amplitude, b[i].amplitude);
        if (i) {
            EXPECT_LT(a[i - 1].key, a[i].key);
        }
    }
}

TEST(Expand, SamplesInsideTheirBins) {
    for (auto units : {kg::AmplitudeUnits::Absolute, kg::AmplitudeUnits::Normalized}) {
        kg::SweepPlan p;
        p.amplitude_units = units;
        if (units == kg::AmplitudeUnits::Normalized) {
            p.amplitude_lo = 0.5;
            p.amplitude_hi = 1.6;
        }
        p.alpha_exponents = {-3};
        for (const auto& j : kg::expand(p)) {
            const double lo = p.bin_lo(j.mu, int(j.key.bin_idx)), hi = p.bin_hi(j.mu, int(j.key.bin_idx));
            EXPECT_GE(j.amplitude, lo);
            EXPECT_LE(j.amplitude, hi);
            EXPECT_DOUBLE_EQ(j.amplitude_prime, kg::normalized_amplitude(j.amplitude, j.mu));
            EXPECT_DOUBLE_EQ(j.alpha, -std::ldexp(1.0, j.alpha_exp));
        }
    }
    kg::SweepPlan p;
    const double w = (p.amplitude_hi - p.amplitude_lo) / p.amplitude_bins;
    EXPECT_DOUBLE_EQ(p.bin_lo(1.0, 5), p.amplitude_lo + 5 * w);
    EXPECT_DOUBLE_EQ(p.bin_hi(1.0, 5), p.amplitude_lo + 6 * w);
}

TEST(Expand, SamplesCoverBinsUniformly) {
    kg::SweepPlan p;
    p.mu_values = {1.0};
    p.alpha_exponents = {-2};
    p.amplitude_bins = 1;
    p.samples_per_bin = 4000;
    const auto jobs = kg::expand(p);
    double mean = 0.0;
    for (const auto& j : jobs) mean += (j.amplitude - p.amplitude_lo) / (p.amplitude_hi - p.amplitude_lo);
    mean /= double(jobs.size());
    EXPECT_NEAR(mean, 0.5, 0.02);
}

TEST(JobUniform, RangeAndSeparation) {
    std::set<double> seen;
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            for (std::size_t s = 0; s < 5; ++s) {
                const double u = kg::job_uniform(7, {0, a, b, s});
                EXPECT_GE(u, 0.0);
                EXPECT_LT(u, 1.0);
                seen.insert(u);
            }
        }
    }
    EXPECT_EQ(seen.size(), 125u);
    EXPECT_NE(kg::job_uniform(7, {0, 1, 2, 3}), kg::job_uniform(8, {0, 1, 2, 3}));
    EXPECT_EQ(kg::job_uniform(7, {0, 1, 2, 3}), kg::job_uniform(7, {0, 1, 2, 3}));
}

TEST(PlanJson, RoundTripAndDefaults) {
    const auto p = tiny_plan();
    const auto q = kg::plan_from_json(kg::plan_to_json(p));
    EXPECT_EQ(q.mu_values, p.mu_values);
    EXPECT_EQ(q.alpha_exponents, p.alpha_exponents);
    EXPECT_EQ(q.amplitude_units, p.amplitude_units);
    EXPECT_EQ(q.amplitude_lo, p.amplitude_lo);
    EXPECT_EQ(q.amplitude_hi, p.amplitude_hi);
    EXPECT_EQ(q.amplitude_bins, p.amplitude_bins);
    EXPECT_EQ(q.samples_per_bin, p.samples_per_bin);
    EXPECT_EQ(q.t_end, p.t_end);
    EXPECT_EQ(q.seed, p.seed);
    EXPECT_EQ(kg::plan_to_json(q), kg::plan_to_json(p));

    const auto d = kg::plan_from_json("{}");
    EXPECT_EQ(d.jobs_per_mu(), 14592u);
    const auto n = kg::plan_from_json(R"({"A_units": "normalized"})");
    EXPECT_EQ(n.amplitude_lo, 0.5);
    EXPECT_EQ(n.amplitude_hi, 1.6);
}

TEST(PlanJson, ShippedPlans) {
    const fs::path dir = fs::path(KG_SOURCE_DIR) / "plans";
    const auto lit = kg::load_plan(dir / "full_absolute.json");
    EXPECT_EQ(lit.jobs_per_mu(), 14592u);
    EXPECT_EQ(lit.amplitude_units, kg::AmplitudeUnits::Absolute);
    EXPECT_EQ(lit.amplitude_lo, 0.04);
    EXPECT_EQ(lit.amplitude_hi, 0.13);
    EXPECT_EQ(lit.t_end, 16384.0);
    const auto norm = kg::load_plan(dir / "full_normalized.json");
    EXPECT_EQ(norm.jobs_per_mu(), 14592u);
    EXPECT_EQ(norm.amplitude_units, kg::AmplitudeUnits::Normalized);
    const auto desk = kg::load_plan(dir / "desk.json");
    EXPECT_EQ(desk.job_count(), 7u * 12u * 8u);
    EXPECT_EQ(desk.t_end, 2048.0);
}

TEST(PlanJson, Errors) {
    EXPECT_THROW(kg::plan_from_json("not json"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json("[]"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"mu": [1]})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"A_units": "meters"})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"A_interval": [0.1]})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"A_bins": 0})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"numerics": {"stages": 5}})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"numerics": {"tol": 1}})"), kg::PlanError);
    EXPECT_THROW(kg::plan_from_json(R"({"mu_values": "x"})"), kg::PlanError);
    EXPECT_THROW(kg::load_plan("/nonexistent/plan.json"), kg::IoError);
}

kg::JournalRecord random_record(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    kg::JournalRecord r;
    r.mu = u(rng);
    r.alpha_exp = -int(rng() % 20);
    r.alpha = -std::ldexp(1.0, r.alpha_exp);
    r.bin_idx = rng() % 24;
    r.sample_idx = rng() % 32;
    r.amplitude = u(rng) * 0.1;
    r.amplitude_prime = u(rng) * 2;
    switch (rng() % 3) {
    case 0:
        r.classification = 0;
        r.status = "completed";
        break;
    case 1:
        r.classification = 1;
        r.first_crossing_time = u(rng) * 1000;
        r.status = "early_stopped";
        break;
    default:
        r.status = "failed:stage_divergence";
        break;
    }
    r.energy_drift = u(rng) * 1e-8;
    r.t_final = u(rng) * 2048;
    r.steps = rng() % 100000;
    r.wall_ms = 12.5;
    return r;
}

TEST(Journal, RecordRoundTrip) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto r = random_record(rng);
        const auto line = kg::format_record(r);
        EXPECT_EQ(line.find('\n'), std::string::npos);
        const auto q = kg::parse_record(line);
        EXPECT_EQ(q.mu, r.mu);
        EXPECT_EQ(q.alpha_exp, r.alpha_exp);
        EXPECT_EQ(q.alpha, r.alpha);
        EXPECT_EQ(q.bin_idx, r.bin_idx);
        EXPECT_EQ(q.sample_idx, r.sample_idx);
        EXPECT_EQ(q.amplitude, r.amplitude);
        EXPECT_EQ(q.amplitude_prime, r.amplitude_prime);
        EXPECT_EQ(q.classification, r.classification);
        EXPECT_EQ(q.first_crossing_time, r.first_crossing_time);
        EXPECT_EQ(q.energy_drift, r.energy_drift);
        EXPECT_EQ(q.t_final, r.t_final);
        EXPECT_EQ(q.status, r.status);
        EXPECT_EQ(q.steps, r.steps);
        EXPECT_EQ(q.valid(), r.status.rfind("failed", 0) != 0);
        EXPECT_EQ(kg::format_record(q), line);
    }
}

TEST(Journal, Header) {
    EXPECT_EQ(kg::journal_header(),
              "mu,alpha_exp,alpha,bin_idx,sample_idx,A,A_prime,classification,first_crossing_time,"
              "energy_drift,t_final,status,steps,wall_ms");
}

TEST(Journal, MalformedLinesRejected) {
    EXPECT_THROW(kg::parse_record("1,2,3"), kg::IoError);
    EXPECT_THROW(kg::parse_record("x,-2,-0.25,0,0,0.1,1,0,,0,1,completed,1,1"), kg::IoError);
}

TEST(Journal, TornTrailingLineIgnored) {
    const auto dir = scratch("torn");
    std::mt19937_64 rng(2);
    std::vector<kg::JournalRecord> recs;
    for (int i = 0; i < 5; ++i) recs.push_back(random_record(rng));
    kg::write_journal(dir / "j.csv", recs);
    {
        std::ofstream f(dir / "j.csv", std::ios::app);
        const auto line = kg::format_record(random_record(rng));
        f << line.substr(0, line.size() / 2);
    }
    const auto back = kg::read_journal(dir / "j.csv");
    ASSERT_EQ(back.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(kg::format_record(back[i]), kg::format_record(recs[i]));
    EXPECT_THROW(kg::read_journal(dir / "missing.csv"), kg::IoError);
    fs::remove_all(dir);
}

kg::PhaseDiagram synthetic(const std::vector<std::vector<double>>& frac) {
    kg::PhaseDiagram d;
    d.mu = 1.0;
    const std::size_t bins = frac.size(), cols = frac[0].size();
    for (std::size_t a = 0; a < cols; ++a) d.alpha_exponents.push_back(-int(2 * a + 2));
    for (std::size_t b = 0; b < bins; ++b) {
        d.bin_lo_prime.push_back(0.5 + 0.1 * b);
        d.bin_hi_prime.push_back(0.6 + 0.1 * b);
        d.bin_lo.push_back(kg::amplitude_from_normalized(d.bin_lo_prime.back(), 1.0));
        d.bin_hi.push_back(kg::amplitude_from_normalized(d.bin_hi_prime.back(), 1.0));
        d.crossings.emplace_back();
        d.valid.emplace_back();
        d.failed.emplace_back();
        for (std::size_t a = 0; a < cols; ++a) {
            const bool missing = std::isnan(frac[b][a]);
            d.valid[b].push_back(missing ? 0 : 8);
            d.crossings[b].push_back(missing ? 0 : int(std::lround(8 * frac[b][a])));
            d.failed[b].push_back(missing ? 8 : 0);
        }
    }
    return d;
}

TEST(DiagramStats, AllZero) {
    const auto s = kg::diagram_stats(synthetic(std::vector<std::vector<double>>(6, std::vector<double>(3, 0.0))));
    EXPECT_EQ(s.mixed_pixels, 0u);
    ASSERT_EQ(s.columns.size(), 3u);
    for (const auto& c : s.columns) {
        EXPECT_FALSE(c.boundary_prime);
        EXPECT_FALSE(c.undefined_reason.empty());
    }
    EXPECT_EQ(s.valid_runs, 6u * 3u * 8u);
}

TEST(DiagramStats, AllOne) {
    const auto s = kg::diagram_stats(synthetic(std::vector<std::vector<double>>(4, std::vector<double>(2, 1.0))));
    for (const auto& c : s.columns) EXPECT_FALSE(c.boundary_prime);
}

TEST(DiagramStats, StepBoundaryAtBinEdge) {
    for (std::size_t step = 1; step < 6; ++step) {
        std::vector<std::vector<double>> f(6, std::vector<double>(1, 0.0));
        for (std::size_t b = step; b < 6; ++b) f[b][0] = 1.0;
        const auto d = synthetic(f);
        const auto s = kg::diagram_stats(d);
        ASSERT_TRUE(s.columns[0].boundary_prime);
        EXPECT_NEAR(*s.columns[0].boundary_prime, d.bin_lo_prime[step], 1e-12);
        EXPECT_EQ(s.mixed_pixels, 0u);
    }
}

TEST(DiagramStats, InterpolatesAndCountsMixed) {
    const double nan = std::nan("");
    const auto d = synthetic({{0.0, nan}, {0.25, 0.0}, {0.75, 0.5}, {1.0, 1.0}});
    const auto s = kg::diagram_stats(d);
    EXPECT_EQ(s.mixed_pixels, 3u);
    EXPECT_EQ(s.failed_runs, 8u);
    ASSERT_TRUE(s.columns[0].boundary_prime);
    const double c1 = 0.5 * (d.bin_lo_prime[1] + d.bin_hi_prime[1]);
    const double c2 = 0.5 * (d.bin_lo_prime[2] + d.bin_hi_prime[2]);
    EXPECT_NEAR(*s.columns[0].boundary_prime, 0.5 * (c1 + c2), 1e-12);
    ASSERT_TRUE(s.columns[1].boundary_prime);
    EXPECT_NEAR(*s.columns[1].boundary_prime, c2, 1e-12);
    EXPECT_TRUE(std::isnan(d.fraction(0, 1)));
}

TEST(DiagramStats, LowestBinAboveHalfIsUndefined) {
    const auto s = kg::diagram_stats(synthetic({{0.75}, {1.0}}));
    EXPECT_FALSE(s.columns[0].boundary_prime);
    EXPECT_FALSE(s.columns[0].undefined_reason.empty());
}

TEST(DiagramOutputs, Formats) {
    const double nan = std::nan("");
    const auto d = synthetic({{0.0, nan}, {0.5, 1.0}});
    const auto csv = kg::diagram_csv(d);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin,A_lo,A_hi,A_prime_lo,A_prime_hi,e-2,e-4");
    EXPECT_NE(csv.find(",0,nan\n"), std::string::npos);
    EXPECT_NE(csv.find(",0.5,1\n"), std::string::npos);
    const auto pgm = kg::diagram_pgm(d);
    const std::string head = "P5\n2 2\n255\n";
    ASSERT_EQ(pgm.size(), head.size() + 4);
    EXPECT_EQ(pgm.substr(0, head.size()), head);
    // Top row is the highest bin.
    EXPECT_EQ(static_cast<unsigned char>(pgm[head.size() + 0]), 128);
    EXPECT_EQ(static_cast<unsigned char>(pgm[head.size() + 1]), 255);
    EXPECT_EQ(static_cast<unsigned char>(pgm[head.size() + 2]), 0);
    EXPECT_EQ(static_cast<unsigned char>(pgm[head.size() + 3]), 0);
    const auto mask = kg::diagram_mask_pgm(d);
    EXPECT_EQ(static_cast<unsigned char>(mask[head.size() + 3]), 0);
    EXPECT_EQ(static_cast<unsigned char>(mask[head.size() + 2]), 255);
    EXPECT_EQ(kg::diagram_matrix(d), "0 NaN\n0.5 1\n");
}

TEST(Aggregate, RejectsForeignAndDuplicateRecords) {
    const auto p = tiny_plan();
    const auto jobs = kg::expand(p);
    kg::JournalRecord r;
    r.mu = jobs[0].mu;
    r.alpha_exp = jobs[0].alpha_exp;
    r.alpha = jobs[0].alpha;
    r.classification = 0;
    r.status = "completed";
    EXPECT_NO_THROW(kg::aggregate(p, {r}));
    EXPECT_THROW(kg::aggregate(p, {r, r}), kg::IoError);
    auto foreign = r;
    foreign.mu = 0.5;
    EXPECT_THROW(kg::aggregate(p, {foreign}), kg::IoError);
    auto far = r;
    far.bin_idx = 99;
    EXPECT_THROW(kg::aggregate(p, {far}), kg::IoError);
}

TEST(RunSweep, DeepRegimesGiveUniformDiagrams) {
    const auto dir = scratch("regimes");
    kg::SweepPlan confined;
    confined.mu_values = {0.015625};
    confined.alpha_exponents = {-2};
    confined.amplitude_units = kg::AmplitudeUnits::Normalized;
    confined.amplitude_lo = 0.3;
    confined.amplitude_hi = 0.5;
    confined.amplitude_bins = 2;
    confined.samples_per_bin = 2;
    confined.t_end = 512.0;
    kg::SweepOptions opts;
    opts.journal = dir / "a.csv";
    const auto a = kg::run_sweep(confined, opts);
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(a.diagrams[0].fraction(b, 0), 0.0);

    auto crossing = confined;
    crossing.alpha_exponents = {-20};
    crossing.amplitude_lo = 2.0;
    crossing.amplitude_hi = 2.4;
    opts.journal = dir / "b.csv";
    const auto b = kg::run_sweep(crossing, opts);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(b.diagrams[0].fraction(i, 0), 1.0);
    for (const auto& rec : kg::read_journal(opts.journal)) {
        EXPECT_EQ(rec.classification, 1);
        EXPECT_GE(rec.amplitude_prime, 2.0);
    }
    fs::remove_all(dir);
}

TEST(RunSweep, ParallelInterruptedAndResumedRunsAgree) {
    const auto dir = scratch("determinism");
    const auto plan = tiny_plan();
    kg::SweepOptions serial;
    serial.journal = dir / "serial.csv";
    const auto s = kg::run_sweep(plan, serial);
    EXPECT_EQ(s.executed, plan.job_count());
    EXPECT_EQ(s.pending, 0u);

    kg::SweepOptions par;
    par.parallelism = 4;
    par.journal = dir / "par.csv";
    const auto p = kg::run_sweep(plan, par);

    kg::SweepOptions part;
    part.parallelism = 3;
    part.journal = dir / "part.csv";
    part.max_jobs = plan.job_count() / 2;
    const auto first = kg::run_sweep(plan, part);
    EXPECT_EQ(first.executed, plan.job_count() / 2);
    EXPECT_EQ(first.pending, plan.job_count() - plan.job_count() / 2);
    {
        // Simulate a crash mid-write.
        std::ofstream f(part.journal, std::ios::app);
        f << "0.015625,-14,-6.1035";
    }
    part.resume = true;
    part.max_jobs.reset();
    const auto second = kg::run_sweep(plan, part);
    EXPECT_EQ(second.skipped, plan.job_count() / 2);
    EXPECT_EQ(second.executed, plan.job_count() - plan.job_count() / 2);

    for (std::size_t m = 0; m < plan.mu_values.size(); ++m) {
        EXPECT_EQ(kg::diagram_csv(s.diagrams[m]), kg::diagram_csv(p.diagrams[m]));
        EXPECT_EQ(kg::diagram_csv(s.diagrams[m]), kg::diagram_csv(second.diagrams[m]));
    }

    // Resuming a complete journal runs nothing and changes nothing.
    serial.resume = true;
    const auto again = kg::run_sweep(plan, serial);
    EXPECT_EQ(again.executed, 0u);
    EXPECT_EQ(again.skipped, plan.job_count());
    for (std::size_t m = 0; m < plan.mu_values.size(); ++m) {
        EXPECT_EQ(kg::diagram_csv(s.diagrams[m]), kg::diagram_csv(again.diagrams[m]));
    }

    // Journals match once the wall-clock column is dropped.
    auto strip = [](std::vector<kg::JournalRecord> v) {
        std::vector<std::string> lines;
        for (auto& r : v) {
            r.wall_ms = 0.0;
            lines.push_back(kg::format_record(r));
        }
        std::sort(lines.begin(), lines.end());
        return lines;
    };
    EXPECT_EQ(strip(kg::read_journal(serial.journal)), strip(kg::read_journal(par.journal)));
    EXPECT_EQ(strip(kg::read_journal(serial.journal)), strip(kg::read_journal(part.journal)));

    const auto files = kg::write_diagrams(dir / "out", plan, s.diagrams);
    EXPECT_EQ(files.size(), 2u * 4u + 1u);
    const auto meta1 = slurp(dir / "out" / "sweep_meta.json");
    kg::write_diagrams(dir / "out2", plan, p.diagrams);
    EXPECT_EQ(meta1, slurp(dir / "out2" / "sweep_meta.json"));
    EXPECT_NE(meta1.find("\"plan\""), std::string::npos);
    fs::remove_all(dir);
}

TEST(RunSweep, FailedJobsAreRecordedAndRetried) {
    const auto dir = scratch("failures");
    auto plan = tiny_plan();
    plan.mu_values = {1.0};
    plan.alpha_exponents = {-2};
    plan.amplitude_lo = 0.9;
    plan.amplitude_hi = 0.95;
    plan.amplitude_bins = 1;
    plan.step.dt = 4.0;
    kg::SweepOptions opts;
    opts.journal = dir / "j.csv";
    const auto r = kg::run_sweep(plan, opts);
    EXPECT_EQ(r.failed, 2u);
    EXPECT_TRUE(r.diagrams[0].missing(0, 0));
    EXPECT_EQ(r.diagrams[0].failed[0][0], 2);
    EXPECT_NE(kg::diagram_csv(r.diagrams[0]).find("nan"), std::string::npos);

    opts.resume = true;
    const auto kept = kg::run_sweep(plan, opts);
    EXPECT_EQ(kept.executed, 0u);
    opts.retry_failed = true;
    const auto retried = kg::run_sweep(plan, opts);
    EXPECT_EQ(retried.executed, 2u);
    EXPECT_EQ(kg::read_journal(opts.journal).size(), 2u);
    fs::remove_all(dir);
}

TEST(RunSweep, RequiresJournal) {
    EXPECT_THROW(kg::run_sweep(tiny_plan(), {}), kg::IoError);
}

}  // namespace
