// esclab: extremum-seeking control runs with decaying excitation amplitude.
//
// Subcommands: run, compare, prop1, presets, validate.
// Exit codes: 0 success, 1 configuration error, 2 numerical abort.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esclab/experiment.hpp"

namespace {

using namespace esclab;

bool is_preset(const std::string& name) {
    for (const auto& preset : presets()) {
        if (preset.name == name) return true;
    }
    return false;
}

ExperimentConfig load_target(const std::string& target) {
    if (is_preset(target)) return preset_config(target);
    if (std::filesystem::exists(target)) return load_config_file(target);
    throw ConfigError("'" + target + "' is neither a preset nor a config file (see 'esclab presets')");
}

ExperimentConfig assemble(const std::string& target, const std::string& config_path,
                          const std::vector<std::string>& overrides, const std::string& out_dir) {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        cfg = load_config_file(config_path);
    } else if (!target.empty()) {
        cfg = load_target(target);
    }
    for (const std::string& assignment : overrides) apply_override(cfg, assignment);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    return cfg;
}

void print_prop1(const Prop1Result& result) {
    std::printf("periodic-solution offsets (theta* = %.6g)\n", result.theta_star);
    std::printf("  %-8s %-14s %-14s %-14s %s\n", "a0", "theta_mean", "eta_mean", "xi_mean",
                "residual");
    for (const auto& row : result.report.rows) {
        std::printf("  %-8g %-14.6g %-14.6g %-14.6g %.3g\n", row.a0, row.theta_mean, row.eta_mean,
                    row.xi_mean, row.residual);
    }
    const auto& rep = result.report;
    std::printf("  fitted a0^2 coefficients: theta %.6g (expected %.6g), eta %.6g (expected %.6g)\n",
                rep.fitted_theta_coeff, rep.expected_theta_coeff, rep.fitted_eta_coeff,
                rep.expected_eta_coeff);
    std::printf("  fit within %.0f%%: %s\n", 100.0 * rep.fit_tolerance, rep.pass ? "yes" : "NO");
    if (!result.csv_path.empty()) std::printf("  wrote %s\n", result.csv_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremum-seeking control simulation lab"};
    app.require_subcommand(1);

    std::string target, config_path, out_dir;
    std::vector<std::string> targets, overrides;

    auto* run_cmd = app.add_subcommand("run", "run one experiment (preset or config file)");
    run_cmd->add_option("target", target, "preset name or config file");
    run_cmd->add_option("--config", config_path, "config file (takes precedence over target)");
    run_cmd->add_option("--set", overrides, "override a config key, e.g. --set sim.t_end=2000");
    run_cmd->add_option("--out", out_dir, "output directory (ESC_LAB_OUT overrides)");

    auto* compare_cmd = app.add_subcommand("compare", "run several experiments and rank them");
    compare_cmd->add_option("targets", targets, "preset names or config files")->required();
    compare_cmd->add_option("--set", overrides, "override a config key in every run");
    compare_cmd->add_option("--out", out_dir, "output directory (ESC_LAB_OUT overrides)");

    auto* prop1_cmd = app.add_subcommand("prop1", "averaged-system periodic-solution study");
    prop1_cmd->add_option("target", target, "preset name or config file");
    prop1_cmd->add_option("--config", config_path, "config file (takes precedence over target)");
    prop1_cmd->add_option("--set", overrides, "override a config key");
    prop1_cmd->add_option("--out", out_dir, "output directory (ESC_LAB_OUT overrides)");

    auto* presets_cmd = app.add_subcommand("presets", "list the stock experiments");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a config file without running it");
    validate_cmd->add_option("config", validate_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            if (target.empty() && config_path.empty()) {
                throw ConfigError("run: give a preset name or --config (see 'esclab presets')");
            }
            const RunResult result = run_experiment(assemble(target, config_path, overrides, out_dir));
            std::cout << format_run_summary(result);
        } else if (compare_cmd->parsed()) {
            std::vector<ExperimentConfig> configs;
            for (const std::string& t : targets) {
                configs.push_back(assemble(t, "", overrides, out_dir));
            }
            const CompareResult result = compare_experiments(configs);
            std::cout << format_compare_summary(result);
        } else if (prop1_cmd->parsed()) {
            ExperimentConfig cfg = assemble(target, config_path, overrides, out_dir);
            if (target.empty() && config_path.empty()) cfg.name = "prop1";
            print_prop1(run_prop1(cfg));
        } else if (presets_cmd->parsed()) {
            for (const auto& preset : presets()) {
                std::printf("%-14s %s\n", preset.name.c_str(), preset.description.c_str());
            }
        } else if (validate_cmd->parsed()) {
            validate_config(load_config_file(validate_path));
            std::printf("%s: ok\n", validate_path.c_str());
        }
    } catch (const NonFiniteState& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
