// Experiment CLI: runs the digital AirComp pipeline, baselines, and the
// closed-form analyses over SNR grids and writes plot-ready CSV/JSON tables.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aircomp/aircomp.hpp"

namespace {

void add_common_options(CLI::App& sub, aircomp::ExperimentConfig& cfg, std::string& detector,
                        std::string& priors) {
    sub.add_option("--k", cfg.devices, "number of devices K")->capture_default_str();
    sub.add_option("--b", cfg.bits, "quantizer bits B")->capture_default_str();
    sub.add_option("--l", cfg.slices, "number of slices L")->capture_default_str();
    sub.add_option("--scheme", cfg.scheme, "slicing: 'ube', 'adaptive', or explicit widths like 3+2+1")
        ->capture_default_str();
    sub.add_option("--detector", detector, "detection rule: map or ml")
        ->check(CLI::IsMember({"map", "ml"}))
        ->capture_default_str();
    sub.add_option("--priors", priors, "prior model: exact or normal")
        ->check(CLI::IsMember({"exact", "normal"}))
        ->capture_default_str();
    sub.add_option("--snr-min", cfg.snr_min_db, "SNR grid start (dB)")->capture_default_str();
    sub.add_option("--snr-max", cfg.snr_max_db, "SNR grid end (dB)")->capture_default_str();
    sub.add_option("--snr-step", cfg.snr_step_db, "SNR grid step (dB)")->capture_default_str();
    sub.add_option("--snr-avg", cfg.snr_avg_db, "average SNR for offline precision selection (dB)")
        ->capture_default_str();
    sub.add_option("--trials", cfg.trials, "aggregated values per Monte Carlo point")
        ->capture_default_str();
    sub.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    sub.add_option("--xmin", cfg.x_min, "source range lower edge")->capture_default_str();
    sub.add_option("--xmax", cfg.x_max, "source range upper edge")->capture_default_str();
    sub.add_option("--rate", cfg.symbol_rate, "total symbol rate (symbols/s)")->capture_default_str();
    sub.add_option("--m", cfg.payload, "payload length M (scalar samples)")->capture_default_str();
    sub.add_option("--out", cfg.out, "output path prefix (.csv/.json appended)")
        ->capture_default_str();
    sub.add_option("--format", cfg.format, "output format: both, csv, or json")
        ->check(CLI::IsMember({"both", "csv", "json"}))
        ->capture_default_str();
}

int run(aircomp::ExperimentKind kind, aircomp::ExperimentConfig cfg, const std::string& detector,
        const std::string& priors) {
    cfg.kind = kind;
    cfg.detector = detector == "ml" ? aircomp::DetectorRule::ml : aircomp::DetectorRule::map;
    cfg.priors = priors == "normal" ? aircomp::PriorModel::normal : aircomp::PriorModel::exact;
    cfg.validate();
    const auto rows = aircomp::sweep(cfg);
    const auto files = aircomp::emit(rows, cfg.out, cfg.format);
    std::printf("%zu rows", rows.size());
    for (const auto& f : files) std::printf("  %s", f.c_str());
    std::printf("\n");

    if (kind == aircomp::ExperimentKind::analyze && cfg.bits % cfg.slices == 0) {
        const int b = cfg.bits / cfg.slices;
        const auto window = aircomp::snr_regime(cfg.bits, b, cfg.slices, cfg.devices);
        if (window.empty)
            std::printf("snr window: empty (K above regime_max_K = %d)\n",
                        aircomp::regime_max_K(cfg.bits, b, cfg.slices));
        else
            std::printf("snr window: [%.4f, %.4f] dB; regime_max_K = %d\n", window.lo_db(),
                        window.hi_db(), aircomp::regime_max_K(cfg.bits, b, cfg.slices));
    }
    if (kind == aircomp::ExperimentKind::adaptive) {
        const auto plan = aircomp::adaptive_plan(aircomp::db_to_linear(cfg.snr_avg_db),
                                                 aircomp::db_to_linear(cfg.snr_avg_db), cfg.slices,
                                                 cfg.devices);
        std::printf("offline precision B* = %d, scheme at average SNR: %s\n", plan.bits,
                    plan.scheme.label().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"digital AirComp link-level experiments"};
    app.set_config("--config", "",
                   "config file with a [subcommand] section of key=value flag pairs");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    aircomp::ExperimentConfig cfg;
    std::string detector = "map";
    std::string priors = "exact";

    struct Sub {
        aircomp::ExperimentKind kind;
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs = {
        {aircomp::ExperimentKind::sweep_snr, "sweep-snr",
         "Monte Carlo digital/analog/orthogonal NMSE over an SNR grid"},
        {aircomp::ExperimentKind::latency, "latency",
         "AirComp vs orthogonal-access latency over device counts 2..K"},
        {aircomp::ExperimentKind::region, "region",
         "closed-form crossover window of digital vs analog error"},
        {aircomp::ExperimentKind::adaptive, "adaptive",
         "adaptive bit allocation vs fixed UBE slicing over an SNR grid"},
        {aircomp::ExperimentKind::analyze, "analyze",
         "closed-form error curves and SNR-regime summary (no Monte Carlo)"},
    };
    for (const auto& s : subs) add_common_options(*app.add_subcommand(s.name, s.help), cfg, detector, priors);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& s : subs)
            if (app.got_subcommand(s.name)) return run(s.kind, cfg, detector, priors);
        std::fprintf(stderr, "no experiment selected\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
