#include "esclab/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace esclab {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, trim(item)));
    }
    return out;
}

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "name") {
        if (value.empty()) throw ConfigError("name: must not be empty");
        cfg.name = value;
    } else if (key == "plant.kind") {
        cfg.plant.kind = value;
    } else if (key == "plant.objective") {
        const auto coeffs = parse_list(key, value);
        if (coeffs.size() != 5) throw ConfigError("plant.objective: expected 5 coefficients c0..c4");
        std::copy(coeffs.begin(), coeffs.end(), cfg.plant.objective.begin());
    } else if (key == "plant.x0") {
        cfg.plant.x0 = parse_list(key, value);
    } else if (key == "scheme.variant") {
        cfg.scheme.variant = variant_from_string(value);
    } else if (key == "scheme.omega") {
        cfg.scheme.omega = parse_double(key, value);
    } else if (key == "scheme.delta") {
        cfg.scheme.delta = parse_double(key, value);
    } else if (key == "scheme.epsilon") {
        cfg.scheme.epsilon = parse_double(key, value);
    } else if (key == "scheme.omega_h_prime") {
        cfg.scheme.omega_h_prime = parse_double(key, value);
    } else if (key == "scheme.omega_l_prime") {
        cfg.scheme.omega_l_prime = parse_double(key, value);
    } else if (key == "scheme.k_prime") {
        cfg.scheme.k_prime = parse_double(key, value);
    } else if (key == "scheme.lambda_prime") {
        cfg.scheme.lambda_prime = parse_double(key, value);
    } else if (key == "scheme.gamma") {
        cfg.scheme.gamma = parse_double(key, value);
    } else if (key == "scheme.a0") {
        cfg.scheme.a0 = parse_double(key, value);
    } else if (key == "scheme.theta_hat0") {
        cfg.scheme.theta_hat0 = parse_double(key, value);
    } else if (key == "scheme.g") {
        cfg.scheme.g_name = value;
    } else if (key == "sim.t0") {
        cfg.sim.t0 = parse_double(key, value);
    } else if (key == "sim.t_end") {
        cfg.sim.t_end = parse_double(key, value);
    } else if (key == "sim.dt") {
        cfg.sim.dt = parse_double(key, value);
    } else if (key == "sim.sample_every") {
        const long v = parse_long(key, value);
        if (v < 1) throw ConfigError("sim.sample_every: must be >= 1");
        cfg.sim.sample_every = static_cast<std::size_t>(v);
    } else if (key == "noise.enabled") {
        cfg.noise.enabled = parse_bool(key, value);
    } else if (key == "noise.seed") {
        cfg.noise.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "noise.q") {
        cfg.scheme.kf_q = parse_double(key, value);
    } else if (key == "noise.r") {
        cfg.scheme.kf_r = parse_double(key, value);
    } else if (key == "metrics.band") {
        cfg.metrics.band = parse_double(key, value);
    } else if (key == "metrics.grad_threshold") {
        cfg.metrics.grad_threshold = parse_double(key, value);
    } else if (key == "out.dir") {
        cfg.output.dir = value;
    } else if (key == "prop1.a0_list") {
        cfg.prop1.a0_list = parse_list(key, value);
    } else if (key == "prop1.delta") {
        cfg.prop1.delta = parse_double(key, value);
    } else if (key == "prop1.tol") {
        cfg.prop1.tol = parse_double(key, value);
    } else if (key == "prop1.steps_per_period") {
        cfg.prop1.steps_per_period = static_cast<int>(parse_long(key, value));
    } else if (key == "prop1.max_periods") {
        cfg.prop1.max_periods = static_cast<int>(parse_long(key, value));
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        apply_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "': expected key=value");
    }
    apply_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto emit = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    emit("name", cfg.name);
    emit("plant.kind", cfg.plant.kind);
    emit("plant.objective", join(cfg.plant.objective));
    emit("plant.x0", join(cfg.plant.x0));
    emit("scheme.variant", to_string(cfg.scheme.variant));
    emit("scheme.omega", format_double(cfg.scheme.omega));
    emit("scheme.delta", format_double(cfg.scheme.delta));
    emit("scheme.epsilon", format_double(cfg.scheme.epsilon));
    emit("scheme.omega_h_prime", format_double(cfg.scheme.omega_h_prime));
    emit("scheme.omega_l_prime", format_double(cfg.scheme.omega_l_prime));
    emit("scheme.k_prime", format_double(cfg.scheme.k_prime));
    emit("scheme.lambda_prime", format_double(cfg.scheme.lambda_prime));
    emit("scheme.gamma", format_double(cfg.scheme.gamma));
    emit("scheme.a0", format_double(cfg.scheme.a0));
    emit("scheme.theta_hat0", format_double(cfg.scheme.theta_hat0));
    emit("scheme.g", cfg.scheme.g_name);
    emit("sim.t0", format_double(cfg.sim.t0));
    emit("sim.t_end", format_double(cfg.sim.t_end));
    emit("sim.dt", format_double(cfg.sim.dt));
    emit("sim.sample_every", std::to_string(cfg.sim.sample_every));
    emit("noise.enabled", cfg.noise.enabled ? "true" : "false");
    emit("noise.seed", std::to_string(cfg.noise.seed));
    emit("noise.q", format_double(cfg.scheme.kf_q));
    emit("noise.r", format_double(cfg.scheme.kf_r));
    emit("metrics.band", format_double(cfg.metrics.band));
    emit("metrics.grad_threshold", format_double(cfg.metrics.grad_threshold));
    emit("out.dir", cfg.output.dir);
    emit("prop1.a0_list", join(cfg.prop1.a0_list));
    emit("prop1.delta", format_double(cfg.prop1.delta));
    emit("prop1.tol", format_double(cfg.prop1.tol));
    emit("prop1.steps_per_period", std::to_string(cfg.prop1.steps_per_period));
    emit("prop1.max_periods", std::to_string(cfg.prop1.max_periods));
    return out;
}

PlantModel make_plant(const PlantSpec& spec) {
    const ObjectivePoly objective(spec.objective);
    if (spec.kind == "example") return example_plant(objective);
    if (spec.kind == "static") return static_plant(objective);
    throw ConfigError("plant.kind: expected 'example' or 'static', got '" + spec.kind + "'");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.name.empty()) throw ConfigError("name: must not be empty");
    const PlantModel plant = make_plant(cfg.plant);
    if (!(cfg.plant.objective[4] < 0.0)) {
        throw ConfigError("plant.objective: leading coefficient c4 must be negative");
    }
    if (cfg.plant.x0.size() != static_cast<std::size_t>(plant.state_dim)) {
        throw ConfigError("plant.x0: expected " + std::to_string(plant.state_dim) +
                          " entries for plant kind '" + cfg.plant.kind + "'");
    }
    (void)build_scheme(plant, cfg.scheme);  // surfaces scheme.* violations
    if (!(cfg.sim.t_end > cfg.sim.t0)) throw ConfigError("sim.t_end: must exceed sim.t0");
    if (cfg.sim.dt < 0.0) throw ConfigError("sim.dt: must be >= 0 (0 selects the default)");
    if (!(cfg.metrics.band > 0.0)) throw ConfigError("metrics.band: must be > 0");
    if (!(cfg.metrics.grad_threshold > 0.0)) throw ConfigError("metrics.grad_threshold: must be > 0");
    if (cfg.prop1.a0_list.empty()) throw ConfigError("prop1.a0_list: must not be empty");
    for (double a0 : cfg.prop1.a0_list) {
        if (!(a0 > 0.0)) throw ConfigError("prop1.a0_list: amplitudes must be > 0");
    }
    if (!(cfg.prop1.delta > 0.0)) throw ConfigError("prop1.delta: must be > 0");
    if (!(cfg.prop1.tol > 0.0)) throw ConfigError("prop1.tol: must be > 0");
    if (cfg.prop1.steps_per_period < 16) throw ConfigError("prop1.steps_per_period: must be >= 16");
    if (cfg.prop1.max_periods < 1) throw ConfigError("prop1.max_periods: must be >= 1");
}

namespace {

ExperimentConfig example1_base() {
    ExperimentConfig cfg;
    cfg.plant.kind = "example";
    cfg.plant.objective = ObjectivePoly::example1().coefficients();
    cfg.plant.x0 = {0.0, 0.0};
    cfg.scheme.omega = 0.1;
    cfg.scheme.delta = 0.02;
    cfg.scheme.epsilon = 0.1;
    cfg.scheme.omega_h_prime = 15.0;
    cfg.scheme.omega_l_prime = 5.0;
    cfg.scheme.k_prime = 15.0;
    cfg.scheme.a0 = 1.0;
    cfg.scheme.theta_hat0 = -1.0;
    cfg.sim = {0.0, 8000.0, 0.05, 10};
    return cfg;
}

ExperimentConfig example2_base() {
    ExperimentConfig cfg;
    cfg.plant.kind = "example";
    cfg.plant.objective = ObjectivePoly::example2().coefficients();
    cfg.plant.x0 = {0.0, 0.0};
    cfg.scheme.omega = 0.1;
    cfg.scheme.delta = 0.0075;
    cfg.scheme.epsilon = 0.1;
    cfg.scheme.omega_h_prime = 6.0;
    cfg.scheme.omega_l_prime = 2.0;
    cfg.scheme.k_prime = 6.0;
    cfg.scheme.a0 = 1.0;
    cfg.scheme.theta_hat0 = 4.0;
    cfg.sim = {0.0, 14000.0, 0.05, 10};
    return cfg;
}

std::vector<Preset> build_presets() {
    std::vector<Preset> table;

    {
        ExperimentConfig cfg = example1_base();
        cfg.name = "ex1-scheme1";
        cfg.scheme.variant = Variant::scheme1;
        cfg.scheme.lambda_prime = 8.0;
        cfg.scheme.gamma = 5.0;
        table.push_back({cfg.name, "quartic example 1, estimator-gated amplitude decay", cfg});
    }
    {
        ExperimentConfig cfg = example1_base();
        cfg.name = "ex1-scheme2";
        cfg.scheme.variant = Variant::scheme2;
        cfg.scheme.lambda_prime = 5.0;
        cfg.scheme.gamma = 8.0;
        table.push_back({cfg.name, "quartic example 1, demodulation-gated amplitude decay", cfg});
    }
    {
        ExperimentConfig cfg = example1_base();
        cfg.name = "ex1-tan2009";
        cfg.scheme.variant = Variant::tan2009;
        cfg.scheme.lambda_prime = 1.0;
        cfg.metrics.band = 0.3;  // steady oscillation ~ delta*J(theta*) = 0.21
        table.push_back({cfg.name, "quartic example 1, slow-decay baseline", cfg});
    }
    {
        ExperimentConfig cfg = example1_base();
        cfg.name = "ex1-classical";
        cfg.scheme.variant = Variant::classical;
        cfg.scheme.lambda_prime = 0.0;
        table.push_back({cfg.name, "quartic example 1, constant-amplitude baseline", cfg});
    }
    {
        ExperimentConfig cfg = example2_base();
        cfg.name = "ex2-scheme1";
        cfg.scheme.variant = Variant::scheme1;
        cfg.scheme.lambda_prime = 2.0;
        cfg.scheme.gamma = 0.1;
        table.push_back({cfg.name, "quartic example 2, estimator-gated amplitude decay", cfg});
    }
    {
        ExperimentConfig cfg = example2_base();
        cfg.name = "ex2-scheme2";
        cfg.scheme.variant = Variant::scheme2;
        cfg.scheme.lambda_prime = 2.0;
        cfg.scheme.gamma = 1.0;
        table.push_back({cfg.name, "quartic example 2, demodulation-gated amplitude decay", cfg});
    }
    {
        ExperimentConfig cfg = example2_base();
        cfg.name = "ex2-tan2009";
        cfg.scheme.variant = Variant::tan2009;
        cfg.scheme.lambda_prime = 1.0;
        cfg.scheme.a0 = 3.5;
        // a0 = 3.5 with lambda = 7.5e-5 needs ~26000 s before the excitation
        // has decayed enough for the steady oscillation (~ delta*J(theta*) =
        // 1.09) to dominate the trailing window.
        cfg.sim.t_end = 26000.0;
        cfg.metrics.band = 1.1;
        table.push_back({cfg.name, "quartic example 2, slow-decay baseline", cfg});
    }
    return table;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = build_presets();
    return table;
}

ExperimentConfig preset_config(const std::string& name) {
    for (const auto& preset : presets()) {
        if (preset.name == name) return preset.config;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("ESC_LAB_OUT"); env && *env) return env;
    return cfg.output.dir;
}

namespace {

std::string write_text_file(const std::string& dir, const std::string& file,
                            const std::string& contents) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / file).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
    return path;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
    validate_config(cfg);
    const PlantModel plant = make_plant(cfg.plant);
    const Scheme scheme = build_scheme(plant, cfg.scheme);

    RunResult result;
    result.config = cfg;
    result.trajectory = simulate_scheme(scheme, cfg.sim, cfg.plant.x0, cfg.noise);

    const StationaryPoint star = global_maximum(plant.objective);
    result.theta_star = star.theta;
    result.j_star = plant.objective.value(star.theta);
    result.metrics = compute_metrics(result.trajectory, plant.objective, star.theta,
                                     cfg.metrics.band, cfg.metrics.grad_threshold);

    if (write_files) {
        const std::string dir = resolve_output_dir(cfg);
        std::ostringstream traj_csv;
        write_trajectory_csv(result.trajectory, traj_csv);
        result.trajectory_path = write_text_file(dir, cfg.name + ".trajectory.csv", traj_csv.str());

        std::ostringstream metrics_csv;
        write_metrics_csv({&result, 1}, metrics_csv);
        result.metrics_path = write_text_file(dir, cfg.name + ".metrics.csv", metrics_csv.str());
    }
    return result;
}

void write_metrics_csv(std::span<const RunResult> results, std::ostream& out) {
    out << "name,variant,theta_star,j_star,converge_time,final_theta_error_pct,"
           "ss_osc_amplitude_theta_hat,ss_osc_amplitude_y,final_amplitude,"
           "grad_error_settle_time,final_theta_hat,final_y\n";
    for (const RunResult& r : results) {
        out << r.config.name << ',' << to_string(r.config.scheme.variant) << ','
            << format_double(r.theta_star) << ',' << format_double(r.j_star) << ','
            << format_double(r.metrics.converge_time) << ','
            << format_double(r.metrics.final_theta_error_pct) << ','
            << format_double(r.metrics.ss_osc_amplitude_theta_hat) << ','
            << format_double(r.metrics.ss_osc_amplitude_y) << ','
            << format_double(r.metrics.final_amplitude) << ','
            << format_double(r.metrics.grad_error_settle_time) << ','
            << format_double(r.trajectory.theta_hat.back()) << ','
            << format_double(r.trajectory.y.back()) << '\n';
    }
}

std::string format_run_summary(const RunResult& r) {
    std::ostringstream out;
    out << "run " << r.config.name << " (" << to_string(r.config.scheme.variant) << ")\n"
        << "  theta* = " << format_short(r.theta_star) << ", J(theta*) = "
        << format_short(r.j_star) << "\n"
        << "  final theta_hat = " << format_short(r.trajectory.theta_hat.back())
        << " (error " << format_short(r.metrics.final_theta_error_pct) << " %)\n"
        << "  final y = " << format_short(r.trajectory.y.back()) << "\n"
        << "  convergence time (band " << format_short(r.config.metrics.band)
        << ") = " << format_short(r.metrics.converge_time) << " s\n"
        << "  steady-state osc amplitude: theta_hat "
        << format_short(r.metrics.ss_osc_amplitude_theta_hat) << ", y "
        << format_short(r.metrics.ss_osc_amplitude_y) << "\n"
        << "  final excitation amplitude = " << format_short(r.metrics.final_amplitude) << "\n";
    if (r.trajectory.has_gradient_estimates()) {
        out << "  gradient-error settle time (threshold "
            << format_short(r.config.metrics.grad_threshold)
            << ") = " << format_short(r.metrics.grad_error_settle_time) << " s\n";
    }
    if (!r.trajectory_path.empty()) {
        out << "  wrote " << r.trajectory_path << "\n  wrote " << r.metrics_path << "\n";
    }
    return out.str();
}

CompareResult compare_experiments(std::span<const ExperimentConfig> configs, bool write_files) {
    CompareResult result;
    result.entries.resize(configs.size());

    std::vector<std::future<RunResult>> futures;
    futures.reserve(configs.size());
    for (const ExperimentConfig& cfg : configs) {
        futures.push_back(
            std::async(std::launch::async, [cfg, write_files] { return run_experiment(cfg, write_files); }));
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
        result.entries[i].name = configs[i].name;
        try {
            result.entries[i].result = futures[i].get();
        } catch (const std::exception& e) {
            result.entries[i].error = e.what();
        }
    }

    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        if (result.entries[i].result) result.ranking.push_back(i);
    }
    std::sort(result.ranking.begin(), result.ranking.end(), [&](std::size_t a, std::size_t b) {
        const RunMetrics& ma = result.entries[a].result->metrics;
        const RunMetrics& mb = result.entries[b].result->metrics;
        if (ma.converge_time != mb.converge_time) return ma.converge_time < mb.converge_time;
        return ma.ss_osc_amplitude_theta_hat < mb.ss_osc_amplitude_theta_hat;
    });

    if (write_files && !configs.empty()) {
        std::vector<RunResult> ok;
        for (const auto& e : result.entries) {
            if (e.result) ok.push_back(*e.result);
        }
        std::ostringstream csv;
        write_metrics_csv(ok, csv);
        for (const auto& e : result.entries) {
            if (!e.result) csv << e.name << ",error: " << e.error << "\n";
        }
        result.csv_path = write_text_file(resolve_output_dir(configs[0]), "compare.csv", csv.str());
    }
    return result;
}

std::string format_compare_summary(const CompareResult& result) {
    std::ostringstream out;
    out << "rank  name            converge_time  ss_osc_theta_hat\n";
    int rank = 1;
    for (std::size_t idx : result.ranking) {
        const CompareEntry& e = result.entries[idx];
        char line[128];
        std::snprintf(line, sizeof(line), "%-5d %-15s %-14.6g %-.6g\n", rank++, e.name.c_str(),
                      e.result->metrics.converge_time,
                      e.result->metrics.ss_osc_amplitude_theta_hat);
        out << line;
    }
    for (const CompareEntry& e : result.entries) {
        if (!e.result) out << "failed: " << e.name << " (" << e.error << ")\n";
    }
    if (!result.csv_path.empty()) out << "wrote " << result.csv_path << "\n";
    return out.str();
}

Prop1Result run_prop1(const ExperimentConfig& cfg, bool write_files) {
    validate_config(cfg);
    const ObjectivePoly objective(cfg.plant.objective);
    const StationaryPoint star = global_maximum(objective);

    SchemeConfig averaged = cfg.scheme;
    averaged.delta = cfg.prop1.delta;

    PeriodicSearchOptions options;
    options.tol = cfg.prop1.tol;
    options.steps_per_period = cfg.prop1.steps_per_period;
    options.max_periods = cfg.prop1.max_periods;

    Prop1Result result;
    result.theta_star = star.theta;
    result.report = proposition1_check(averaged, cfg.prop1.a0_list, objective, star.theta, options);

    if (write_files) {
        std::ostringstream csv;
        csv << "a0,theta_mean,eta_mean,xi_mean,residual\n";
        for (const Prop1Row& row : result.report.rows) {
            csv << format_double(row.a0) << ',' << format_double(row.theta_mean) << ','
                << format_double(row.eta_mean) << ',' << format_double(row.xi_mean) << ','
                << format_double(row.residual) << '\n';
        }
        const Prop1Report& rep = result.report;
        csv << "# fit theta_coeff=" << format_double(rep.fitted_theta_coeff)
            << " expected=" << format_double(rep.expected_theta_coeff)
            << " eta_coeff=" << format_double(rep.fitted_eta_coeff)
            << " expected=" << format_double(rep.expected_eta_coeff)
            << " pass=" << (rep.pass ? "true" : "false") << '\n';
        result.csv_path =
            write_text_file(resolve_output_dir(cfg), cfg.name + ".prop1.csv", csv.str());
    }
    return result;
}

}  // namespace esclab
