#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "kg/classifier.hpp"
#include "kg/sweep.hpp"
#include "kg/verify.hpp"
#include "kgsim/cli.hpp"
#include "kgsim/run_config.hpp"

namespace kg::cli {

using nlohmann::json;

namespace {

// Flag values as parsed; presence is checked through the CLI11 option.
struct RunFlags {
    std::string config;
    double mu = 0, alpha = 0, beta = 0, length = 0, amplitude = 0, amplitude_prime = 0, t_end = 0, dt = 0;
    int alpha_exp = 0, stages = 0, sample_every = 0, dealias = 0;
    std::size_t n = 0;
    double stage_tol = 0;
    std::string out;

    CLI::Option *o_mu{}, *o_alpha{}, *o_alpha_exp{}, *o_beta{}, *o_length{}, *o_a{}, *o_ap{}, *o_t_end{},
        *o_dt{}, *o_stages{}, *o_sample{}, *o_n{}, *o_dealias{}, *o_tol{}, *o_out{};

    void attach(CLI::App* app, bool with_space) {
        app->add_option("--config", config, "JSON config file; flags override its values");
        o_mu = app->add_option("--mu", mu, "mass parameter mu > 0");
        if (with_space) {
            o_alpha = app->add_option("--alpha", alpha, "coefficient alpha < 0");
            o_alpha_exp = app->add_option("--alpha-exp", alpha_exp, "alpha = -2^e");
            o_beta = app->add_option("--beta", beta, "coefficient beta > 0 (default 1)");
            o_length = app->add_option("--L", length, "domain length L > 0 (default 1)");
            o_n = app->add_option("--n", n, "grid points, power of two >= 16 (default 64)");
            o_dealias = app->add_option("--dealias", dealias, "padding factor for the cubic term (default 2)");
        }
        o_a = app->add_option("--A", amplitude, "perturbation amplitude A >= 0");
        o_ap = app->add_option("--A-prime", amplitude_prime, "normalized amplitude A' = A / ((sqrt2-1) sqrt(mu))");
        o_t_end = app->add_option("--t-end", t_end, "final time (default 16384)");
        o_dt = app->add_option("--dt", dt, "time step (default 0.0625)");
        o_stages = app->add_option("--stages", stages, "Gauss-Legendre stages, 2 or 3");
        o_tol = app->add_option("--stage-tol", stage_tol, "relative stage-iteration tolerance");
        o_sample = app->add_option("--sample-every", sample_every, "time-series sampling stride in steps");
        o_out = app->add_option("--out", out, "output directory (default .)");
    }

    RunConfig resolve() const {
        RunConfig c;
        if (!config.empty()) c.merge_json(load_json_file(config));
        if (o_alpha && o_alpha_exp && *o_alpha && *o_alpha_exp)
            throw DomainError("--alpha and --alpha-exp are mutually exclusive");
        if (*o_a && *o_ap) throw DomainError("--A and --A-prime are mutually exclusive");
        if (*o_mu) c.mu = mu;
        if (o_alpha && *o_alpha) {
            c.alpha = alpha;
            c.alpha_exp.reset();
        }
        if (o_alpha_exp && *o_alpha_exp) {
            c.alpha_exp = alpha_exp;
            c.alpha.reset();
        }
        if (o_beta && *o_beta) c.beta = beta;
        if (o_length && *o_length) c.length = length;
        if (*o_a) {
            c.amplitude = amplitude;
            c.amplitude_prime.reset();
        }
        if (*o_ap) {
            c.amplitude_prime = amplitude_prime;
            c.amplitude.reset();
        }
        if (*o_t_end) c.t_end = t_end;
        if (*o_dt) c.step.dt = dt;
        if (*o_stages) {
            const auto keep = c.step.scheme;
            c.step.scheme = IRKScheme::gauss_legendre(stages);
            c.step.scheme.stage_tol = keep.stage_tol;
            c.step.scheme.max_stage_iters = keep.max_stage_iters;
        }
        if (*o_tol) c.step.scheme.stage_tol = stage_tol;
        if (*o_sample) c.sample_every = sample_every;
        if (o_n && *o_n) c.grid.n = n;
        if (o_dealias && *o_dealias) c.grid.dealias_factor = dealias;
        if (*o_out) c.out = out;
        return c;
    }
};

json outcome_json(const RunOutcome& o) {
    json j{{"classification", to_string(o.classification)},
           {"code", o.code()},
           {"first_crossing_time", nullptr},
           {"energy_drift", o.energy_drift},
           {"t_final", o.t_final},
           {"status", to_string(o.status, o.failure)},
           {"steps", o.steps}};
    if (o.first_crossing_time) j["first_crossing_time"] = *o.first_crossing_time;
    if (!o.valid()) {
        j.erase("classification");
        j.erase("code");
        j["message"] = o.message;
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot write {}", path.string()));
    f << text;
}

void print_outcome(std::ostream& out, const RunOutcome& o) {
    if (o.valid()) {
        fmt::print(out, "classification: {} ({})\n", to_string(o.classification), o.code());
    } else {
        fmt::print(out, "classification: none (run failed: {})\n", o.message);
    }
    fmt::print(out, "first_crossing_time: {}\n",
               o.first_crossing_time ? fmt::format("{}", *o.first_crossing_time) : std::string("-"));
    fmt::print(out, "energy_drift: {:.3e}\nstatus: {}\nsteps: {}\nt_final: {}\n", o.energy_drift,
               to_string(o.status, o.failure), o.steps, o.t_final);
}

int cmd_simulate(const RunFlags& flags, std::ostream& out) {
    RunConfig cfg = flags.resolve();
    cfg.validate(true);
    const ModelParams params = cfg.params();
    const double amplitude = cfg.resolved_amplitude();
    const FieldState initial = initial_state(amplitude, cfg.mu, cfg.grid);

    std::filesystem::create_directories(cfg.out);
    const auto series_path = cfg.out / "simulate_timeseries.csv";
    const auto outcome_path = cfg.out / "simulate_outcome.json";
    std::ofstream series(series_path, std::ios::trunc);
    if (!series) throw IoError(fmt::format("cannot write {}", series_path.string()));
    series << "t,min_u,max_u,mean_u,energy,energy_drift\n";

    auto row = [&](const FieldState& s, double e, double drift) {
        const auto [lo, hi] = std::minmax_element(s.u.begin(), s.u.end());
        double mean = 0.0;
        for (double x : s.u) mean += x;
        mean /= static_cast<double>(s.size());
        series << fmt::format("{},{},{},{},{},{}\n", s.t, *lo, *hi, mean, e, drift);
    };
    row(initial, pde_energy(initial, params, cfg.grid.dealias_factor), 0.0);

    std::size_t step = 0;
    double last_t = initial.t;
    FieldState last = initial;
    double last_e = 0.0, last_drift = 0.0;
    const RunOutcome o = classify_pde(initial, params, cfg.step, cfg.t_end, cfg.grid.dealias_factor,
                                      [&](const FieldState& s, double e, double drift) {
                                          ++step;
                                          last = s;
                                          last_e = e;
                                          last_drift = drift;
                                          if (step % static_cast<std::size_t>(cfg.sample_every) == 0) {
                                              row(s, e, drift);
                                              last_t = s.t;
                                          }
                                      });
    if (step > 0 && last.t != last_t) row(last, last_e, last_drift);
    series.close();

    json doc{{"command", "simulate"}, {"config", cfg.to_json(true)}, {"outcome", outcome_json(o)},
             {"timeseries", series_path.filename().string()}};
    write_text(outcome_path, doc.dump(2) + "\n");

    fmt::print(out, "mu={} alpha={} c_sq={} A={} A'={:.6f}\n", cfg.mu, params.alpha(), params.c_sq(), amplitude,
               normalized_amplitude(amplitude, cfg.mu));
    print_outcome(out, o);
    fmt::print(out, "wrote {} and {}\n", series_path.string(), outcome_path.string());
    return o.valid() ? kExitOk : kExitFailure;
}

int cmd_ode(const RunFlags& flags, std::ostream& out) {
    RunConfig cfg = flags.resolve();
    cfg.validate(false);
    const double amplitude = cfg.resolved_amplitude();

    std::filesystem::create_directories(cfg.out);
    const auto series_path = cfg.out / "ode_timeseries.csv";
    const auto outcome_path = cfg.out / "ode_outcome.json";
    std::ofstream series(series_path, std::ios::trunc);
    if (!series) throw IoError(fmt::format("cannot write {}", series_path.string()));
    series << "t,u,v,energy,energy_drift\n";
    const OdeState s0{0.0, amplitude + std::sqrt(cfg.mu), 0.0};
    series << fmt::format("{},{},{},{},{}\n", s0.t, s0.u, s0.v, ode_energy(s0, cfg.mu), 0.0);

    std::size_t step = 0;
    const RunOutcome o = classify_ode(amplitude, cfg.mu, cfg.step.dt, cfg.t_end, cfg.step.scheme,
                                      [&](const OdeState& s, double e, double drift) {
                                          ++step;
                                          if (step % static_cast<std::size_t>(cfg.sample_every) == 0 ||
                                              s.u < 0.0) {
                                              series << fmt::format("{},{},{},{},{}\n", s.t, s.u, s.v, e, drift);
                                          }
                                      });
    series.close();

    const double critical = critical_amplitude(cfg.mu);
    json doc{{"command", "ode"},
             {"config", cfg.to_json(false)},
             {"critical_amplitude", critical},
             {"outcome", outcome_json(o)},
             {"timeseries", series_path.filename().string()}};
    write_text(outcome_path, doc.dump(2) + "\n");

    fmt::print(out, "mu={} A={}\ncritical_amplitude: {:.7f}\nA_prime: {:.6f}\n", cfg.mu, amplitude, critical,
               normalized_amplitude(amplitude, cfg.mu));
    print_outcome(out, o);
    fmt::print(out, "wrote {} and {}\n", series_path.string(), outcome_path.string());
    return o.valid() ? kExitOk : kExitFailure;
}

void print_summary(std::ostream& out, const std::vector<PhaseDiagram>& diagrams) {
    fmt::print(out, "{:>10} {:>7} {:>7} {:>6}  boundaries (alpha_exp:A')\n", "mu", "valid", "failed", "mixed");
    for (const auto& d : diagrams) {
        const DiagramSummary s = diagram_stats(d);
        std::string cols;
        for (const auto& c : s.columns) {
            cols += fmt::format(" {}:{}", c.alpha_exp,
                                c.boundary_prime ? fmt::format("{:.3f}", *c.boundary_prime) : std::string("undef"));
        }
        fmt::print(out, "{:>10} {:>7} {:>7} {:>6} {}\n", d.mu, s.valid_runs, s.failed_runs, s.mixed_pixels, cols);
    }
}

struct SweepFlags {
    std::string plan;
    std::string journal;
    std::string out = "sweep_out";
    int parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool resume = false;
    bool retry_failed = false;
    bool overwrite = false;
    bool dry_run = false;
    bool quiet = false;
    std::size_t max_jobs = 0;
    CLI::Option* o_max_jobs{};
};

int cmd_sweep(const SweepFlags& f, std::ostream& out, std::ostream& err) {
    const SweepPlan plan = load_plan(f.plan);
    fmt::print(out, "plan: {} mu x {} alpha x {} bins x {} samples = {} jobs per mu, {} total\n",
               plan.mu_values.size(), plan.alpha_exponents.size(), plan.amplitude_bins, plan.samples_per_bin,
               plan.jobs_per_mu(), plan.job_count());
    if (f.dry_run) return kExitOk;

    const std::filesystem::path out_dir = f.out;
    const std::filesystem::path journal = f.journal.empty() ? out_dir / "journal.csv" : std::filesystem::path(f.journal);
    if (std::filesystem::exists(journal) && !f.resume && !f.overwrite) {
        fmt::print(err, "error: journal {} exists; pass --resume to continue it or --overwrite to start over\n",
                   journal.string());
        return kExitUsage;
    }
    if (f.retry_failed && !f.resume) {
        fmt::print(err, "error: --retry-failed requires --resume\n");
        return kExitUsage;
    }

    SweepOptions opts;
    opts.parallelism = f.parallelism;
    opts.journal = journal;
    opts.resume = f.resume;
    opts.retry_failed = f.retry_failed;
    if (*f.o_max_jobs) opts.max_jobs = f.max_jobs;
    std::size_t last_pct = 0;
    if (!f.quiet) {
        opts.progress = [&](std::size_t done, std::size_t total) {
            const std::size_t pct = total ? 100 * done / total : 100;
            if (pct / 10 != last_pct / 10 || done == total) {
                fmt::print(err, "progress: {}/{} jobs\n", done, total);
            }
            last_pct = pct;
        };
    }

    const SweepResult r = run_sweep(plan, opts);
    write_text(journal.string() + ".plan.json", plan_to_json(plan) + "\n");
    write_diagrams(out_dir, plan, r.diagrams);

    fmt::print(out, "scheduled {} jobs: executed {}, already in journal {}, pending {}, failed {}\n", r.scheduled,
               r.executed, r.skipped, r.pending, r.failed);
    print_summary(out, r.diagrams);
    fmt::print(out, "diagrams written to {}\n", out_dir.string());
    if (r.pending) fmt::print(out, "{} jobs pending; rerun with --resume to finish\n", r.pending);
    return r.failed ? kExitFailure : kExitOk;
}

int cmd_diagram(const std::string& plan_path, const std::string& journal, const std::string& out_dir,
                std::ostream& out) {
    const SweepPlan plan = load_plan(plan_path);
    const auto diagrams = aggregate(plan, read_journal(journal));
    write_diagrams(out_dir, plan, diagrams);
    print_summary(out, diagrams);
    fmt::print(out, "diagrams written to {}\n", out_dir);
    return kExitOk;
}

bool report(std::ostream& out, const std::string& metric, double measured, const std::string& op, double required) {
    const bool pass = op == "<=" ? measured <= required : measured >= required;
    fmt::print(out, "{}: measured {:.6e}, required {} {:.6e}  {}\n", metric, measured, op, required,
               pass ? "PASS" : "FAIL");
    return pass;
}

int cmd_verify(const std::string& suite, std::ostream& out) {
    bool ok = true;
    const bool all = suite == "all";
    if (all || suite == "energy") {
        ok &= report(out, "energy.max_relative_drift", verify::energy_drift(), "<=", verify::kEnergyDriftMax);
    }
    if (all || suite == "order") {
        const auto two = verify::temporal_order(2);
        const auto three = verify::temporal_order(3);
        ok &= report(out, "order.gauss2", two.min_order(), ">=", verify::kOrderMinTwoStage);
        ok &= report(out, "order.gauss3", three.min_order(), ">=", verify::kOrderMinThreeStage);
    }
    if (all || suite == "spectral") {
        ok &= report(out, "spectral.n64_vs_n256", verify::spectral_agreement(), "<=",
                     verify::kSpectralAgreementMax);
    }
    if (all || suite == "ode-threshold") {
        for (double mu : {0.015625, 0.25, 1.0, 2.0}) {
            const double a = verify::ode_threshold(mu);
            const double rel = std::abs(a / critical_amplitude(mu) - 1.0);
            ok &= report(out, fmt::format("ode-threshold.mu={} (A={:.7f})", mu, a), rel, "<=",
                         verify::kThresholdRelTol);
        }
    }
    if (all || suite == "frequency") {
        ok &= report(out, "frequency.ode", verify::ode_linear_period(1.0).rel_error(), "<=",
                     verify::kOdePeriodRelTol);
        ok &= report(out, "frequency.pde_mode1", verify::pde_linear_period(1.0, 0.25).rel_error(), "<=",
                     verify::kPdePeriodRelTol);
    }
    if (all || suite == "cross-oracle") {
        ok &= report(out, "cross-oracle.irk_vs_rk4", verify::cross_oracle(), "<=", verify::kCrossOracleMax);
    }
    if (all || suite == "pde-ode-agreement") {
        for (const auto& c : verify::pde_ode_agreement()) {
            const bool agree = c.agree();
            fmt::print(out, "pde-ode-agreement.mu={} A'={}: pde={} ode={}  {}\n", c.mu, c.a_prime,
                       c.pde.valid() ? std::to_string(c.pde.code()) : "failed",
                       c.ode.valid() ? std::to_string(c.ode.code()) : "failed", agree ? "PASS" : "FAIL");
            ok &= agree;
        }
    }
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cubic Klein-Gordon simulator: single runs, reduced ODE, sweeps, verification", "kgsim"};
    app.require_subcommand(1);

    RunFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "integrate one field trajectory and classify it");
    sim_flags.attach(sim, true);

    RunFlags ode_flags;
    auto* ode = app.add_subcommand("ode", "integrate the point-wise model and classify it");
    ode_flags.attach(ode, false);

    SweepFlags sw;
    auto* sweep = app.add_subcommand("sweep", "run a phase-diagram sweep from a plan file");
    sweep->add_option("plan", sw.plan, "plan file (JSON)")->required();
    sweep->add_option("--parallelism,-j", sw.parallelism, "worker threads");
    sweep->add_option("--journal", sw.journal, "journal path (default <out>/journal.csv)");
    sweep->add_option("--out", sw.out, "output directory");
    sweep->add_flag("--resume", sw.resume, "skip jobs already in the journal");
    sweep->add_flag("--retry-failed", sw.retry_failed, "with --resume: rerun failed jobs");
    sweep->add_flag("--overwrite", sw.overwrite, "discard an existing journal");
    sweep->add_flag("--dry-run", sw.dry_run, "expand the plan and report job counts only");
    sweep->add_flag("--quiet", sw.quiet, "no progress output");
    sw.o_max_jobs = sweep->add_option("--max-jobs", sw.max_jobs, "stop after this many jobs");

    std::string dg_plan, dg_journal, dg_out = "sweep_out";
    auto* diagram = app.add_subcommand("diagram", "re-aggregate a journal into diagrams");
    diagram->add_option("plan", dg_plan, "plan file (JSON)")->required();
    diagram->add_option("--journal", dg_journal, "journal path")->required();
    diagram->add_option("--out", dg_out, "output directory");

    std::string suite;
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"energy", "order", "spectral", "ode-threshold", "pde-ode-agreement", "frequency",
                               "cross-oracle", "all"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }

    try {
        if (*sim) return cmd_simulate(sim_flags, out);
        if (*ode) return cmd_ode(ode_flags, out);
        if (*sweep) return cmd_sweep(sw, out, err);
        if (*diagram) return cmd_diagram(dg_plan, dg_journal, dg_out, out);
        if (*ver) return cmd_verify(suite, out);
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const PlanError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace kg::cli
