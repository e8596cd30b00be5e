#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrcrit/pipeline.hpp"

namespace {

using lrcrit::invalid_params;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw invalid_params(key + " is not a number: " + value);
    }
    if (used != value.size()) throw invalid_params(key + " is not a number: " + value);
    return x;
}

int to_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    int x = 0;
    try {
        x = std::stoi(value, &used);
    } catch (const std::exception&) {
        throw invalid_params(key + " is not an integer: " + value);
    }
    if (used != value.size()) throw invalid_params(key + " is not an integer: " + value);
    return x;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
    if (value == "false" || value == "no" || value == "off" || value == "0") return false;
    throw invalid_params(key + " is not a boolean: " + value);
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        const auto item = trim(value.substr(start, comma - start));
        if (!item.empty()) out.push_back(to_int(key, item));
        start = comma + 1;
    }
    if (out.empty()) throw invalid_params(key + " must list at least one size");
    return out;
}

// Flat INI with one section per pipeline stage. Unknown sections and keys are
// rejected so a typo cannot silently fall back to a default.
lrcrit::run_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_params("cannot open config file " + path);
    lrcrit::run_config cfg;
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw invalid_params("config: malformed section " + line);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "protocol" && section != "sampling" &&
                section != "spectral" && section != "output")
                throw invalid_params("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_params("config: expected key = value, got: " + line);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto full = section + "." + key;
        if (section.empty()) throw invalid_params("config: key " + key + " outside any section");

        if (full == "model.kind")
            cfg.model = value;
        else if (full == "model.J")
            cfg.J = to_double(full, value);
        else if (full == "model.g")
            cfg.g = to_double(full, value);
        else if (full == "model.h")
            cfg.h = to_double(full, value);
        else if (full == "model.mu")
            cfg.mu = to_double(full, value);
        else if (full == "model.alpha")
            cfg.alpha = to_double(full, value);
        else if (full == "model.beta")
            cfg.beta = to_double(full, value);
        else if (full == "model.r")
            cfg.r = to_double(full, value);
        else if (full == "model.sizes")
            cfg.sizes = to_int_list(full, value);
        else if (full == "model.observable")
            cfg.observable = value;
        else if (full == "protocol.kind") {
            if (value == "sudden")
                cfg.protocol.kind = lrcrit::quench_kind::sudden;
            else if (value == "cosine")
                cfg.protocol.kind = lrcrit::quench_kind::cosine;
            else
                throw invalid_params("protocol.kind must be sudden or cosine, got " + value);
        } else if (full == "protocol.amplitude")
            cfg.protocol.amplitude = to_double(full, value);
        else if (full == "protocol.drive_frequency")
            cfg.protocol.drive_frequency = to_double(full, value);
        else if (full == "protocol.temperature")
            cfg.temperature = to_double(full, value);
        else if (full == "sampling.tau")
            cfg.tau = to_double(full, value);
        else if (full == "sampling.n_samples")
            cfg.n_samples = to_int(full, value);
        else if (full == "spectral.window")
            cfg.spectral.window = lrcrit::parse_window(value);
        else if (full == "spectral.mean_subtract")
            cfg.spectral.mean_subtract = to_bool(full, value);
        else if (full == "spectral.zero_pad")
            cfg.spectral.zero_pad = to_bool(full, value);
        else if (full == "spectral.noise_floor")
            cfg.noise_floor = to_double(full, value);
        else if (full == "spectral.refine")
            cfg.refine_peaks = to_bool(full, value);
        else if (full == "output.dir")
            cfg.out_dir = value;
        else if (full == "output.with_oracle")
            cfg.with_oracle = to_bool(full, value);
        else if (full == "output.seedless")
            cfg.seedless = to_bool(full, value);
        else
            throw invalid_params("config: unknown key " + full);
    }
    return cfg;
}

struct overrides {
    std::string out_dir;
    std::string window;
    double temperature = std::nan("");
    double noise_floor = std::nan("");
    bool with_oracle = false;
    bool seedless = false;
};

void apply(const overrides& ov, lrcrit::run_config& cfg) {
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    if (!ov.window.empty()) cfg.spectral.window = lrcrit::parse_window(ov.window);
    if (!std::isnan(ov.temperature)) cfg.temperature = ov.temperature;
    if (!std::isnan(ov.noise_floor)) cfg.noise_floor = ov.noise_floor;
    if (ov.with_oracle) cfg.with_oracle = true;
    if (ov.seedless) cfg.seedless = true;
    if (const char* root = std::getenv("LRCRIT_OUTPUT_ROOT");
        root && *root && cfg.out_dir.is_relative())
        cfg.out_dir = std::filesystem::path(root) / cfg.out_dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quench-response critical exponent toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    overrides ov;
    std::vector<std::string> series_inputs;
    std::string peaks_file;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "run config (INI, one section per stage)");
        sub->add_option("--out", ov.out_dir, "output directory (overrides output.dir)");
        sub->add_option("--temperature", ov.temperature, "initial thermal state temperature");
        sub->add_option("--window", ov.window, "spectral window: none | hann");
        sub->add_option("--noise-floor", ov.noise_floor, "peak threshold, fraction of max");
        sub->add_flag("--seedless", ov.seedless,
                      "assert determinism (no RNG exists to seed; echoed in the manifest)");
    };

    auto* c_respond = app.add_subcommand("respond", "compute response time series");
    add_common(c_respond);
    c_respond->add_flag("--with-oracle", ov.with_oracle, "emit exact-dynamics column");

    auto* c_spectrum = app.add_subcommand("spectrum", "transform series, locate lowest peaks");
    add_common(c_spectrum);
    c_spectrum->add_option("series", series_inputs,
                           "series CSV files (default: output.dir/series_N*.csv)");

    auto* c_scaling = app.add_subcommand("scaling", "fit the gap power law");
    add_common(c_scaling);
    c_scaling->add_option("--peaks", peaks_file, "peak summary JSON (default: output.dir/peaks.json)");

    auto* c_pipeline = app.add_subcommand("pipeline", "respond, spectrum, scaling in one run");
    add_common(c_pipeline);
    c_pipeline->add_flag("--with-oracle", ov.with_oracle, "emit exact-dynamics column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        lrcrit::run_config cfg =
            config_path.empty() ? lrcrit::run_config{} : load_config(config_path);
        apply(ov, cfg);
        cfg.validate();
        if (cfg.protocol.beyond_linear_comfort())
            std::cerr << "warning: protocol.amplitude " << cfg.protocol.amplitude
                      << " is large for a linear-response run (comfort zone |amplitude| <= 0.05)\n";

        if (c_respond->parsed()) {
            lrcrit::cmd_respond(cfg);
            std::cout << "wrote " << cfg.effective_sizes().size() << " series to "
                      << cfg.out_dir.string() << "\n";
        } else if (c_spectrum->parsed()) {
            std::vector<std::filesystem::path> inputs(series_inputs.begin(), series_inputs.end());
            lrcrit::cmd_spectrum(cfg, inputs);
            std::cout << "wrote spectra and peaks.json to " << cfg.out_dir.string() << "\n";
        } else if (c_scaling->parsed()) {
            lrcrit::cmd_scaling(cfg, peaks_file);
            std::cout << "wrote scaling.json and scaling_points.csv to " << cfg.out_dir.string()
                      << "\n";
        } else {
            const auto res = lrcrit::cmd_pipeline(cfg);
            const auto& fit = *res.fit;
            std::cout << "z = " << fit.z << " +/- " << fit.z_err << "  (prefactor "
                      << fit.prefactor << ", residual rms " << fit.residual_rms << ", "
                      << fit.points.size() << " sizes)\n";
        }
    } catch (const lrcrit::invalid_params& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const lrcrit::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
