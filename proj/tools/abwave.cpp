#include "abwave/config.hpp"
#include "abwave/errors.hpp"
#include "abwave/io.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace abwave;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int threads = 0;
    int snapshots = -1;
};

void add_common(CLI::App* app, CommonOpts& opt) {
    app->add_option("-c,--config", opt.config_path, "scenario config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("-o,--out", opt.out_dir, "output directory");
    app->add_option("--threads", opt.threads, "OpenMP thread count (0 = runtime default)");
    app->add_option("--snapshots", opt.snapshots, "override snapshot_every");
}

ScenarioConfig prepare(const CommonOpts& opt) {
#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
    fs::create_directories(opt.out_dir);
    ScenarioConfig cfg = load_config(opt.config_path);
    if (opt.snapshots >= 0) cfg.snapshot_every = opt.snapshots;
    cfg.validate();
    return cfg;
}

int cmd_run(const CommonOpts& opt) {
    const ScenarioConfig cfg = prepare(opt);
    const SimulationResult res = run_scenario(cfg);
    const fs::path out(opt.out_dir);

    std::vector<std::string> files;
    write_profile_csv((out / "profile.csv").string(), res.profile);
    files.push_back((out / "profile.csv").string());
    write_run_report((out / "report.json").string(), cfg, res);
    files.push_back((out / "report.json").string());
    for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
        std::ostringstream name;
        name << "snapshot_" << s << ".csv";
        write_snapshot_csv((out / name.str()).string(), cfg.grid(), res.snapshots[s]);
        files.push_back((out / name.str()).string());
    }
    if (cfg.kind != ScenarioKind::Free) {
        const auto [lo, hi] = default_window(cfg);
        write_fringe_json((out / "fringe.json").string(), fringe_extract(res.profile, lo, hi));
        files.push_back((out / "fringe.json").string());
    }
    write_manifest((out / "manifest.json").string(), files);
    std::cout << "wrote " << files.size() + 1 << " files to " << opt.out_dir << " (steps "
              << res.metadata.steps << ", crossed " << res.metadata.crossed_fraction << ")\n";
    for (const auto& w : res.metadata.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_audit(const CommonOpts& opt) {
    const ScenarioConfig cfg = prepare(opt);
    if (cfg.gauges.empty())
        throw ConfigError("audit: config has no gauges; add a \"gauges\" array");
    const AuditReport report = gauge_audit(cfg, cfg.gauges);
    const fs::path out(opt.out_dir);
    write_audit_json((out / "audit.json").string(), cfg, report);
    write_manifest((out / "manifest.json").string(), {(out / "audit.json").string()});
    for (const auto& b : report.branches)
        std::cout << b.gauge_name << ": snapshot_dev " << b.snapshot_max_dev << ", profile_dev "
                  << b.profile_max_dev << ", loop_phase " << b.loop_phase << "\n";
    if (report.failed) {
        std::cerr << "audit branch failed: " << report.failure << "\n";
        return 4;
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opt, const std::vector<double>& values) {
    const ScenarioConfig cfg = prepare(opt);
    const EffectReport report = toroidal_effect_experiment(cfg, values);
    const fs::path out(opt.out_dir);
    write_sweep_csv((out / "sweep.csv").string(), report);
    write_manifest((out / "manifest.json").string(), {(out / "sweep.csv").string()});
    std::cout << "baseline spacing " << report.baseline_spacing << ", " << report.rows.size()
              << " sweep points\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gauge-covariant charged-particle wave-optics simulator"};
    app.require_subcommand(1);

    CommonOpts run_opt, audit_opt, sweep_opt;
    std::vector<double> values;

    CLI::App* run = app.add_subcommand("run", "propagate one scenario and record the screen");
    add_common(run, run_opt);
    CLI::App* audit = app.add_subcommand("audit", "re-run under every configured gauge");
    add_common(audit, audit_opt);
    CLI::App* sweep = app.add_subcommand("sweep", "channel-amplitude sweep (toroidal scenario)");
    add_common(sweep, sweep_opt);
    sweep->add_option("--values", values, "channel amplitudes (must include 0)")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    const CommonOpts& opt = run->parsed() ? run_opt : audit->parsed() ? audit_opt : sweep_opt;
    auto report_error = [&](int code, const char* kind, const std::string& msg) {
        std::cerr << kind << ": " << msg << "\n";
        try {
            fs::create_directories(opt.out_dir);
            write_error_json((fs::path(opt.out_dir) / "error.json").string(), code, kind, msg);
        } catch (...) {
        }
        return code;
    };

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (audit->parsed()) return cmd_audit(audit_opt);
        return cmd_sweep(sweep_opt, values);
    } catch (const ConfigError& e) {
        return report_error(2, "config error", e.what());
    } catch (const InvariantViolation& e) {
        return report_error(4, "invariant violation", e.what());
    } catch (const NumericalError& e) {
        return report_error(3, "numerical error", e.what());
    } catch (const std::exception& e) {
        return report_error(3, "error", e.what());
    }
}
