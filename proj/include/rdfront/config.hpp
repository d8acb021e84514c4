#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rdfront/diagnostics.hpp"
#include "rdfront/pde.hpp"
#include "rdfront/wave.hpp"

namespace rdfront {

struct FitSpec {
    std::string model;  // front_delay | algebraic_rate | exponential_rate |
                        // lower_bound_probe | phantom_slope
    std::string field = "E_front";
    double t_min = 0, t_max = 0;
    double target = 0, tolerance = 0;
};

// Full experiment description. Seedless and deterministic: identical
// configs produce byte-identical outputs.
struct ExperimentConfig {
    std::string name = "run";

    // nonlinearity
    std::string family = "fkpp";
    double n = 2.0;
    double chi = 0.0;
    std::string table_path;

    GridConfig grid;

    // time
    double t_final = 100.0;
    double sample_ratio = 1.05;
    double t_first_sample = 1.0;
    std::vector<double> extra_samples;
    bool richardson = false;  // dt-pair run with field-level extrapolation

    // ic
    std::string ic_kind = "step";
    std::string ic_table_path;

    DiagnosticsConfig diag;

    // wave computation
    WaveGridSpec wave;
    double speed_tol = 1e-8;

    // structure-report windows
    double delta0 = 0.009, delta1 = 0.009;

    // classification thresholds (recorded, not hidden)
    double classify_pulled_cut = -0.5;
    double classify_band = 0.1;

    std::vector<FitSpec> fits;

    std::string kernel_variant = "auto";
    bool write_tables = true;
    bool deterministic = true;  // always true; no randomness anywhere
};

ExperimentConfig default_config();
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Canonical serialization (sorted keys) used for content addressing.
std::string canonical_dump(const ExperimentConfig& c);

// Throws on invalid parameter combinations before any compute happens.
void validate_config(const ExperimentConfig& c);

Nonlinearity nonlinearity_from_config(const ExperimentConfig& c);

}  // namespace rdfront
