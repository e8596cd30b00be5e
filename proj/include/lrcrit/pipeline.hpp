#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lrcrit/ed.hpp"
#include "lrcrit/errors.hpp"
#include "lrcrit/io.hpp"
#include "lrcrit/lrk.hpp"
#include "lrcrit/oracle.hpp"
#include "lrcrit/protocol.hpp"
#include "lrcrit/response.hpp"
#include "lrcrit/scaling.hpp"
#include "lrcrit/spectral.hpp"
#include "lrcrit/tfim.hpp"
#include "lrcrit/version.hpp"

namespace lrcrit {

// One struct drives all four commands; validate() rejects anything a
// downstream module would refuse, naming the offending config key.
struct run_config {
    std::string model = "tfim";  // tfim | lrk | longitudinal | long_range
    double J = 1.0;
    double g = 1.0;
    double h = 0.0;  // static longitudinal field (dense models)
    double mu = 2.0;
    double alpha = 2.5;
    double beta = 1.5;
    double r = 2.0;  // zz-coupling decay exponent (long_range)
    std::vector<int> sizes;
    std::string observable = "mx";  // mx | mzz | nf

    quench_protocol protocol{quench_kind::sudden, 0.01, 0.0};
    double temperature = 0.0;

    double tau = 500.0;
    int n_samples = 1000;

    spectral_options spectral{};
    double noise_floor = 0.05;
    bool refine_peaks = true;

    std::filesystem::path out_dir = "out";
    bool with_oracle = false;
    bool seedless = false;

    bool is_dense() const { return model == "longitudinal" || model == "long_range"; }

    std::vector<int> effective_sizes() const {
        if (!sizes.empty()) return sizes;
        if (is_dense()) return {6, 8, 10, 12};
        return {8, 12, 16, 20, 28, 40};
    }

    tfim_params tfim_for(int N) const { return tfim_params{J, g, N, 1.0}; }
    lrk_params lrk_for(int N) const { return lrk_params{J, mu, alpha, beta, N}; }

    void validate() const {
        if (model != "tfim" && model != "lrk" && model != "longitudinal" &&
            model != "long_range")
            throw invalid_params("model.kind must be one of tfim, lrk, longitudinal, long_range");
        if (!std::isfinite(J) || J == 0.0) throw invalid_params("model.J must be nonzero");
        if (model != "long_range" && J <= 0.0)
            throw invalid_params("model.J must be > 0 for " + model);
        if (!std::isfinite(h)) throw invalid_params("model.h must be finite");

        const bool obs_ok = (model == "tfim" && (observable == "mx" || observable == "mzz")) ||
                            (model == "lrk" && observable == "nf") ||
                            (is_dense() && observable == "mx");
        if (!obs_ok)
            throw invalid_params("model.observable: " + observable + " is not defined for " +
                                 model);

        protocol.validate();
        if (protocol.kind == quench_kind::cosine && !(model == "tfim" && observable == "mx"))
            throw invalid_params(
                "protocol.kind: the cosine drive is defined for the tfim mx response only");

        if (!(temperature >= 0.0) || !std::isfinite(temperature))
            throw invalid_params("protocol.temperature must be >= 0");
        if (temperature > 0.0 && !(model == "tfim" && observable == "mx"))
            throw invalid_params(
                "protocol.temperature: thermal weights are defined for the tfim mx response "
                "only");

        if (!(tau > 0.0) || !std::isfinite(tau))
            throw invalid_params("sampling.tau must be > 0");
        if (n_samples < 64) throw invalid_params("sampling.n_samples must be at least 64");

        if (!(noise_floor >= 0.0 && noise_floor < 1.0))
            throw invalid_params("spectral.noise_floor must be in [0, 1)");

        const auto ns = effective_sizes();
        for (std::size_t i = 1; i < ns.size(); ++i)
            if (ns[i] <= ns[i - 1])
                throw invalid_params("model.sizes must be strictly increasing");
        for (int N : ns) {
            if (model == "tfim")
                tfim_for(N).validate();
            else if (model == "lrk")
                lrk_for(N).validate();
            else
                detail::check_ed_size(N);
        }

        if (with_oracle && is_dense())
            throw invalid_params(
                "output.with_oracle is available for the tfim and lrk models only");
        if (out_dir.empty()) throw invalid_params("output.dir must not be empty");
    }
};

namespace detail {

// Bounded pool over [0, count); bodies must touch disjoint slots only.
template <typename Body>
inline void for_each_index(std::size_t count, Body&& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(count, hw ? hw : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

inline time_series respond_one(const run_config& cfg, int N) {
    const auto times = time_grid(cfg.tau, cfg.n_samples);
    const double amp = cfg.protocol.amplitude;
    time_series s;
    if (cfg.model == "tfim") {
        const auto p = cfg.tfim_for(N);
        if (cfg.observable == "mzz") {
            s = mzz_response_sudden(p, amp, times);
        } else if (cfg.protocol.kind == quench_kind::cosine) {
            s = mx_response_cosine(p, amp, cfg.protocol.drive_frequency, times);
        } else if (cfg.temperature > 0.0) {
            s = mx_response_thermal(p, amp, cfg.temperature, times);
        } else {
            const thermal_weights w(static_cast<std::size_t>(p.N / 2), -1.0);
            s = mx_response_sudden(p, amp, w, times);
        }
    } else if (cfg.model == "lrk") {
        s = nf_response_sudden(cfg.lrk_for(N), amp, times);
    } else if (cfg.model == "longitudinal") {
        const auto before = build_longitudinal(N, cfg.g, cfg.h, cfg.J);
        const auto after = build_longitudinal(N, cfg.g, cfg.h + amp, cfg.J);
        const auto gs = ground_state(diagonalize(before));
        s = evolve_and_measure(diagonalize(after), N, gs.psi, times);
        s.metadata["model"] = "longitudinal";
        s.metadata["g"] = fmt_full(cfg.g);
        s.metadata["h0"] = fmt_full(cfg.h);
        s.metadata["dh"] = fmt_full(amp);
        if (gs.degenerate) s.metadata["ground_degenerate"] = "true";
    } else {
        const auto before = build_long_range(N, cfg.g, cfg.r, cfg.J);
        const auto after = build_long_range(N, cfg.g + amp, cfg.r, cfg.J);
        const auto gs = ground_state(diagonalize(before));
        s = evolve_and_measure(diagonalize(after), N, gs.psi, times);
        s.metadata["model"] = "long_range";
        s.metadata["g0"] = fmt_full(cfg.g);
        s.metadata["dg"] = fmt_full(amp);
        s.metadata["r"] = fmt_full(cfg.r);
        if (gs.degenerate) s.metadata["ground_degenerate"] = "true";
    }
    s.metadata["N"] = std::to_string(N);
    s.metadata["J"] = fmt_full(cfg.J);
    s.metadata["tau"] = fmt_full(cfg.tau);
    return s;
}

inline time_series oracle_one(const run_config& cfg, int N) {
    const auto times = time_grid(cfg.tau, cfg.n_samples);
    if (cfg.model == "tfim") {
        if (cfg.observable == "mzz") return oracle_mzz_tfim(cfg.tfim_for(N), cfg.protocol, times);
        return oracle_mx_tfim(cfg.tfim_for(N), cfg.protocol, cfg.temperature, times);
    }
    if (cfg.model == "lrk") return oracle_nf_lrk(cfg.lrk_for(N), cfg.protocol, times);
    throw invalid_params("output.with_oracle is available for the tfim and lrk models only");
}

struct size_result {
    int N = 0;
    time_series series;
    std::vector<double> oracle;  // empty unless requested
    spectrum spec;
    std::optional<peak_estimate> peak;
};

struct stage_seconds {
    double respond = 0.0;
    double spectrum = 0.0;
    double scaling = 0.0;
};

struct pipeline_result {
    std::vector<size_result> per_size;
    std::optional<scaling_fit> fit;  // absent when fewer than 3 peaks survive
    stage_seconds seconds;
};

inline std::vector<scaling_point> points_from(const std::vector<size_result>& rows) {
    std::vector<scaling_point> pts;
    for (const auto& row : rows)
        if (row.peak)
            pts.push_back({static_cast<double>(row.N), row.peak->omega_m, row.peak->sigma});
    return pts;
}

inline pipeline_result run_pipeline(const run_config& cfg) {
    cfg.validate();
    const auto sizes = cfg.effective_sizes();
    pipeline_result res;
    res.per_size.resize(sizes.size());

    const auto t0 = std::chrono::steady_clock::now();
    detail::for_each_index(sizes.size(), [&](std::size_t i) {
        res.per_size[i].N = sizes[i];
        res.per_size[i].series = respond_one(cfg, sizes[i]);
        if (cfg.with_oracle) res.per_size[i].oracle = oracle_one(cfg, sizes[i]).values;
    });
    const auto t1 = std::chrono::steady_clock::now();

    for (auto& row : res.per_size) {
        row.spec = compute_spectrum(row.series, cfg.spectral);
        try {
            row.peak = lowest_peak(row.spec, cfg.noise_floor, cfg.refine_peaks);
        } catch (const no_peak_error&) {
            row.peak.reset();
        }
    }
    const auto t2 = std::chrono::steady_clock::now();

    const auto pts = points_from(res.per_size);
    if (pts.size() >= 3) res.fit = fit_exponent(pts);
    const auto t3 = std::chrono::steady_clock::now();

    const auto sec = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
    res.seconds = {sec(t0, t1), sec(t1, t2), sec(t2, t3)};
    return res;
}

inline nlohmann::json config_json(const run_config& cfg) {
    nlohmann::json model{{"kind", cfg.model}, {"J", cfg.J}, {"sizes", cfg.effective_sizes()},
                         {"observable", cfg.observable}};
    if (cfg.model == "tfim") model["g"] = cfg.g;
    if (cfg.model == "lrk") {
        model["mu"] = cfg.mu;
        model["alpha"] = cfg.alpha;
        model["beta"] = cfg.beta;
    }
    if (cfg.model == "longitudinal") {
        model["g"] = cfg.g;
        model["h"] = cfg.h;
    }
    if (cfg.model == "long_range") {
        model["g"] = cfg.g;
        model["r"] = cfg.r;
    }
    nlohmann::json protocol{
        {"kind", cfg.protocol.kind == quench_kind::cosine ? "cosine" : "sudden"},
        {"amplitude", cfg.protocol.amplitude},
        {"temperature", cfg.temperature}};
    if (cfg.protocol.kind == quench_kind::cosine)
        protocol["drive_frequency"] = cfg.protocol.drive_frequency;
    nlohmann::json spectral{{"window", cfg.spectral.window == window_kind::hann ? "hann" : "none"},
                            {"mean_subtract", cfg.spectral.mean_subtract},
                            {"zero_pad", cfg.spectral.zero_pad},
                            {"noise_floor", cfg.noise_floor},
                            {"refine", cfg.refine_peaks}};
    return nlohmann::json{{"model", std::move(model)},
                          {"protocol", std::move(protocol)},
                          {"sampling", {{"tau", cfg.tau}, {"n_samples", cfg.n_samples}}},
                          {"spectral", std::move(spectral)},
                          {"output",
                           {{"dir", cfg.out_dir.string()},
                            {"with_oracle", cfg.with_oracle},
                            {"seedless", cfg.seedless}}}};
}

// Stage timings are wall-clock and so vary run to run; every other byte of
// the artifact set is a pure function of config and version.
inline void write_manifest(const run_config& cfg, const std::string& command,
                           const stage_seconds& sec,
                           const std::vector<std::filesystem::path>& files) {
    nlohmann::json j;
    j["version"] = version;
    j["command"] = command;
    j["config"] = config_json(cfg);
    j["rng"] = "none";
    j["stage_seconds"] = {{"respond", sec.respond}, {"spectrum", sec.spectrum},
                          {"scaling", sec.scaling}};
    auto inventory = nlohmann::json::array();
    for (const auto& f : files)
        inventory.push_back({{"path", f.string()}, {"sha256", sha256_file(cfg.out_dir / f)}});
    j["files"] = std::move(inventory);
    std::ofstream out(cfg.out_dir / "manifest.json");
    if (!out) throw numeric_error("cannot open manifest.json for writing");
    out << j.dump(2) << "\n";
}

inline std::filesystem::path series_name(int N) {
    return "series_N" + std::to_string(N) + ".csv";
}
inline std::filesystem::path spectrum_name(int N) {
    return "spectrum_N" + std::to_string(N) + ".csv";
}

inline void cmd_respond(const run_config& cfg) {
    cfg.validate();
    const auto sizes = cfg.effective_sizes();
    std::vector<time_series> series(sizes.size());
    std::vector<std::vector<double>> oracles(sizes.size());
    const auto t0 = std::chrono::steady_clock::now();
    detail::for_each_index(sizes.size(), [&](std::size_t i) {
        series[i] = respond_one(cfg, sizes[i]);
        if (cfg.with_oracle) oracles[i] = oracle_one(cfg, sizes[i]).values;
    });
    const auto t1 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        files.push_back(series_name(sizes[i]));
        write_series_csv(cfg.out_dir / files.back(), series[i], oracles[i]);
    }
    stage_seconds sec;
    sec.respond = std::chrono::duration<double>(t1 - t0).count();
    write_manifest(cfg, "respond", sec, files);
}

// Series files are processed in ascending N regardless of argument order.
inline void cmd_spectrum(const run_config& cfg, std::vector<std::filesystem::path> inputs) {
    cfg.validate();
    if (inputs.empty() && std::filesystem::is_directory(cfg.out_dir))
        for (const auto& entry : std::filesystem::directory_iterator(cfg.out_dir)) {
            const auto name = entry.path().filename().string();
            if (name.rfind("series_N", 0) == 0 && entry.path().extension() == ".csv")
                inputs.push_back(entry.path());
        }
    if (inputs.empty()) throw invalid_params("spectrum: no series files given or found");

    struct loaded {
        int N;
        time_series s;
    };
    std::vector<loaded> rows;
    for (const auto& path : inputs) {
        auto s = read_series_csv(path);
        int N = 0;
        if (const auto it = s.metadata.find("N"); it != s.metadata.end())
            N = std::stoi(it->second);
        else
            throw invalid_params("series file " + path.string() + " lacks an N metadata line");
        rows.push_back({N, std::move(s)});
    }
    std::sort(rows.begin(), rows.end(), [](const loaded& a, const loaded& b) { return a.N < b.N; });

    const auto t1 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::filesystem::path> files;
    std::vector<peak_row> peaks;
    double tau = cfg.tau;
    for (auto& row : rows) {
        const auto spec = compute_spectrum(row.s, cfg.spectral);
        tau = 2.0 * pi / spec.bin_width;
        peak_row pr{row.N, std::nullopt};
        try {
            pr.peak = lowest_peak(spec, cfg.noise_floor, cfg.refine_peaks);
        } catch (const no_peak_error&) {
        }
        peaks.push_back(pr);
        auto meta = row.s.metadata;
        meta["window"] = cfg.spectral.window == window_kind::hann ? "hann" : "none";
        files.push_back(spectrum_name(row.N));
        write_spectrum_csv(cfg.out_dir / files.back(), spec, meta);
    }
    files.push_back("peaks.json");
    write_peaks_json(cfg.out_dir / "peaks.json", peaks, tau);
    const auto t2 = std::chrono::steady_clock::now();
    stage_seconds sec;
    sec.spectrum = std::chrono::duration<double>(t2 - t1).count();
    write_manifest(cfg, "spectrum", sec, files);
}

inline void cmd_scaling(const run_config& cfg, std::filesystem::path peaks_file) {
    cfg.validate();
    if (peaks_file.empty()) peaks_file = cfg.out_dir / "peaks.json";
    const auto [rows, tau] = read_peaks_json(peaks_file);
    std::vector<scaling_point> pts;
    for (const auto& row : rows)
        if (row.peak)
            pts.push_back({static_cast<double>(row.N), row.peak->omega_m, row.peak->sigma});
    std::sort(pts.begin(), pts.end(),
              [](const scaling_point& a, const scaling_point& b) { return a.N < b.N; });
    const auto t2 = std::chrono::steady_clock::now();
    const auto fit = fit_exponent(pts);
    const auto t3 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);
    write_scaling_json(cfg.out_dir / "scaling.json", fit);
    write_scaling_points_csv(cfg.out_dir / "scaling_points.csv", fit);
    stage_seconds sec;
    sec.scaling = std::chrono::duration<double>(t3 - t2).count();
    write_manifest(cfg, "scaling", sec, {"scaling.json", "scaling_points.csv"});
}

inline pipeline_result cmd_pipeline(const run_config& cfg) {
    auto res = run_pipeline(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::filesystem::path> files;
    std::vector<peak_row> peaks;
    for (const auto& row : res.per_size) {
        files.push_back(series_name(row.N));
        write_series_csv(cfg.out_dir / files.back(), row.series, row.oracle);
        auto meta = row.series.metadata;
        meta["window"] = cfg.spectral.window == window_kind::hann ? "hann" : "none";
        files.push_back(spectrum_name(row.N));
        write_spectrum_csv(cfg.out_dir / files.back(), row.spec, meta);
        peaks.push_back({row.N, row.peak});
    }
    files.push_back("peaks.json");
    write_peaks_json(cfg.out_dir / "peaks.json", peaks, cfg.tau);
    if (res.fit) {
        write_scaling_json(cfg.out_dir / "scaling.json", *res.fit);
        write_scaling_points_csv(cfg.out_dir / "scaling_points.csv", *res.fit);
        files.push_back("scaling.json");
        files.push_back("scaling_points.csv");
    }
    write_manifest(cfg, "pipeline", res.seconds, files);
    if (!res.fit)
        throw numeric_error("scaling: fewer than 3 peaks found, no exponent fit possible");
    return res;
}

}
