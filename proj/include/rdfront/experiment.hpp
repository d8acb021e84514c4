#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdfront/config.hpp"
#include "rdfront/counterexample.hpp"
#include "rdfront/fits.hpp"

namespace rdfront {

struct RunArtifacts {
    std::string dir;           // content-addressed run directory
    ExperimentConfig config;
    double c_star = 0;
    Regime regime = Regime::ambiguous;
    StructureReport structure;
    HypothesisReport hypotheses;
    DiagnosticsSeries series;
    std::vector<FitReport> fits;
    bool wave_from_cache = false;
    bool all_fits_pass = true;
};

// Wave profile for the config's nonlinearity, cached on disk under
// out_root/waves/<hash> (content address of the nonlinearity+wave blocks).
WaveProfile obtain_wave_profile(const ExperimentConfig& cfg,
                                const std::string& out_root, double* c_star,
                                bool* from_cache);

// wave -> pde -> diagnostics -> asymptotics, all artifacts written under
// out_root/<hash(config)>: run_manifest.json, series.csv, fit_report.json
// and (optionally) the profile tables. Deterministic and byte-identical
// across reruns of the same config.
RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::string& out_root);

// Batch execution, one worker per run.
std::vector<RunArtifacts> run_experiments(
    const std::vector<ExperimentConfig>& cfgs, const std::string& out_root,
    int jobs);

// series.csv round-trip (pinned column schema).
void write_series_csv(const std::string& path, const DiagnosticsSeries& s);
DiagnosticsSeries read_series_csv(const std::string& path);

nlohmann::json fit_report_to_json(const FitReport& r);
nlohmann::json counterexample_report_to_json(const CounterexampleReport& r);

// Runs the counterexample construction and writes counterexample_f.csv
// plus a JSON verification report into dir.
CounterexampleReport run_counterexample(const std::string& dir,
                                        std::size_t grid_n = 4096);

// Profile serialization (cache format).
void save_profile(const std::string& path, const WaveProfile& wp);
std::optional<WaveProfile> load_profile(const std::string& path);

}  // namespace rdfront
