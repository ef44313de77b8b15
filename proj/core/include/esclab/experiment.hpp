#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esclab/averaging.hpp"
#include "esclab/loop.hpp"
#include "esclab/metrics.hpp"

namespace esclab {

/// Plant selection: the two-state example plant or the zero-state static
/// map, plus the objective polynomial [c0..c4] and the plant initial state.
struct PlantSpec {
    std::string kind = "example";  // example | static
    std::array<double, 5> objective{10.0, 0.0, 5.0 / 6.0, 8.0 / 15.0, -1.0};
    std::vector<double> x0{0.0, 0.0};
};

struct MetricsSpec {
    double band = 0.05;           // convergence band around theta*, absolute
    double grad_threshold = 0.2;  // settle threshold for the gradient error
};

struct OutputSpec {
    std::string dir = ".";
};

/// Periodic-solution study parameters (prop1 subcommand).
struct Prop1Spec {
    std::vector<double> a0_list{0.05, 0.1, 0.15};
    double delta = 1e-3;
    double tol = 1e-9;
    int steps_per_period = 1024;
    int max_periods = 20000;
};

/// One experiment: everything needed to reproduce a run from a flat
/// key-value config file (sections plant.*, scheme.*, sim.*, noise.*,
/// metrics.*, out.*, prop1.*).
struct ExperimentConfig {
    std::string name = "run";
    PlantSpec plant;
    SchemeConfig scheme;
    SimSpec sim{0.0, 8000.0, 0.05, 10};
    NoiseSpec noise;
    MetricsSpec metrics;
    OutputSpec output;
    Prop1Spec prop1;
};

/// A named, fully populated configuration for one of the stock experiments.
struct Preset {
    std::string name;
    std::string description;
    ExperimentConfig config;
};

/// The stock experiment table.
const std::vector<Preset>& presets();

/// Preset lookup by name; throws ConfigError when unknown.
ExperimentConfig preset_config(const std::string& name);

/// Parses the flat key-value format (one `section.key = value` per line,
/// '#' comments). Unknown keys and malformed values raise ConfigError naming
/// the offending key. Values omitted keep their defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Applies a single `section.key=value` override.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Renders the config in the same key-value format (stable key order), such
/// that parse(serialize(cfg)) reproduces the config.
std::string serialize_config(const ExperimentConfig& cfg);

/// Cross-field validation; throws ConfigError with the key path. Also
/// exercised by building the scheme, so gain invariants surface here too.
void validate_config(const ExperimentConfig& cfg);

/// Builds the PlantModel selected by the spec.
PlantModel make_plant(const PlantSpec& spec);

/// Output directory after applying the ESC_LAB_OUT environment override.
std::string resolve_output_dir(const ExperimentConfig& cfg);

struct RunResult {
    ExperimentConfig config;
    Trajectory trajectory;
    RunMetrics metrics;
    double theta_star = 0.0;
    double j_star = 0.0;
    std::string trajectory_path;  // empty when files were not written
    std::string metrics_path;
};

/// Runs one experiment; optionally writes <name>.trajectory.csv and
/// <name>.metrics.csv under the resolved output directory.
RunResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Metrics CSV row(s) for one or more runs (header + one row per run).
void write_metrics_csv(std::span<const RunResult> results, std::ostream& out);

/// Human-readable summary block for one run.
std::string format_run_summary(const RunResult& result);

struct CompareEntry {
    std::string name;
    std::optional<RunResult> result;  // empty on failure
    std::string error;                // failure reason when result is empty
};

struct CompareResult {
    std::vector<CompareEntry> entries;
    std::vector<std::size_t> ranking;  // indices of successful runs, best first
    std::string csv_path;
};

/// Runs each config (concurrently; runs are independent), ranks successful
/// runs by convergence time then steady-state theta_hat oscillation, and
/// reports per-run failures without aborting the batch.
CompareResult compare_experiments(std::span<const ExperimentConfig> configs,
                                  bool write_files = true);

std::string format_compare_summary(const CompareResult& result);

struct Prop1Result {
    Prop1Report report;
    double theta_star = 0.0;
    std::string csv_path;
};

/// Periodic-solution offsets of the averaged system for the config's
/// objective and O(1) gains, using prop1.delta as the slow gain. Writes
/// <name>.prop1.csv (rows a0, theta_mean, eta_mean, xi_mean, residual plus a
/// fitted-coefficient summary line).
Prop1Result run_prop1(const ExperimentConfig& cfg, bool write_files = true);

}  // namespace esclab
