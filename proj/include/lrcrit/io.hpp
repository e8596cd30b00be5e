#pragma once

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lrcrit/errors.hpp"
#include "lrcrit/protocol.hpp"
#include "lrcrit/scaling.hpp"
#include "lrcrit/spectral.hpp"

namespace lrcrit {

// %.17g keeps doubles round-trip exact, so reruns are byte-comparable
inline std::string fmt_full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// The optional third column carries the exact-dynamics overlay.
inline void write_series_csv(const std::filesystem::path& path, const time_series& s,
                             const std::vector<double>& oracle = {}) {
    if (!oracle.empty() && oracle.size() != s.times.size())
        throw grid_mismatch_error("oracle column length must match the series");
    std::ofstream out(path);
    if (!out) throw numeric_error("cannot open " + path.string() + " for writing");
    for (const auto& [key, value] : s.metadata) out << "# " << key << " = " << value << "\n";
    out << (oracle.empty() ? "t,value\n" : "t,value,oracle\n");
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out << fmt_full(s.times[i]) << "," << fmt_full(s.values[i]);
        if (!oracle.empty()) out << "," << fmt_full(oracle[i]);
        out << "\n";
    }
}

inline void write_spectrum_csv(const std::filesystem::path& path, const spectrum& s,
                               const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path);
    if (!out) throw numeric_error("cannot open " + path.string() + " for writing");
    for (const auto& [key, value] : metadata) out << "# " << key << " = " << value << "\n";
    out << "omega,magnitude\n";
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        out << fmt_full(s.omega[i]) << "," << fmt_full(s.magnitude[i]) << "\n";
}

// Reads the two-column CSV written above; '#' lines become metadata.
inline time_series read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw invalid_params("cannot open series file " + path.string());
    time_series s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = line.substr(1, eq - 1);
            auto value = line.substr(eq + 1);
            const auto trim = [](std::string& t) {
                const auto a = t.find_first_not_of(" \t");
                const auto b = t.find_last_not_of(" \t\r");
                t = a == std::string::npos ? std::string{} : t.substr(a, b - a + 1);
            };
            trim(key);
            trim(value);
            s.metadata[key] = value;
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column names
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw invalid_params("malformed row in " + path.string() + ": " + line);
        try {
            s.times.push_back(std::stod(line.substr(0, comma)));
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw invalid_params("malformed row in " + path.string() + ": " + line);
        }
    }
    if (s.times.empty()) throw invalid_params("no samples in " + path.string());
    return s;
}

struct peak_row {
    int N = 0;
    std::optional<peak_estimate> peak;
};

inline void write_peaks_json(const std::filesystem::path& path, const std::vector<peak_row>& rows,
                             double tau) {
    nlohmann::json j;
    j["tau"] = tau;
    auto arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json e;
        e["N"] = row.N;
        e["found"] = row.peak.has_value();
        if (row.peak) {
            e["omega_m"] = row.peak->omega_m;
            e["amplitude"] = row.peak->amplitude;
            e["bin"] = row.peak->bin;
            e["sigma"] = row.peak->sigma;
            e["refined"] = row.peak->refined;
        }
        arr.push_back(std::move(e));
    }
    j["peaks"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw numeric_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

inline std::pair<std::vector<peak_row>, double> read_peaks_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw invalid_params("cannot open peak summary " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_params("malformed peak summary " + path.string() + ": " + e.what());
    }
    std::vector<peak_row> rows;
    double tau = 0.0;
    try {
        tau = j.at("tau").get<double>();
        for (const auto& e : j.at("peaks")) {
            peak_row row;
            row.N = e.at("N").get<int>();
            if (e.at("found").get<bool>()) {
                peak_estimate p;
                p.omega_m = e.at("omega_m").get<double>();
                p.amplitude = e.at("amplitude").get<double>();
                p.bin = e.at("bin").get<std::size_t>();
                p.sigma = e.at("sigma").get<double>();
                p.refined = e.at("refined").get<bool>();
                row.peak = p;
            }
            rows.push_back(row);
        }
    } catch (const nlohmann::json::exception& e) {
        throw invalid_params("malformed peak summary " + path.string() + ": " + e.what());
    }
    return {rows, tau};
}

inline void write_scaling_json(const std::filesystem::path& path, const scaling_fit& fit) {
    nlohmann::json j;
    j["z"] = fit.z;
    j["z_err"] = fit.z_err;
    j["prefactor"] = fit.prefactor;
    j["residual_rms"] = fit.residual_rms;
    auto arr = nlohmann::json::array();
    for (const auto& p : fit.points)
        arr.push_back({{"N", p.N}, {"gap", p.gap}, {"sigma", p.sigma}});
    j["points"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw numeric_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

// plot-ready columns: the fit is a straight line in (log N, log gap)
inline void write_scaling_points_csv(const std::filesystem::path& path, const scaling_fit& fit) {
    std::ofstream out(path);
    if (!out) throw numeric_error("cannot open " + path.string() + " for writing");
    out << "N,gap,sigma,log_N,log_gap\n";
    for (const auto& p : fit.points)
        out << p.N << "," << fmt_full(p.gap) << "," << fmt_full(p.sigma) << ","
            << fmt_full(std::log(static_cast<double>(p.N))) << "," << fmt_full(std::log(p.gap))
            << "\n";
}

inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw numeric_error("cannot hash " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof b, "%02x", digest[i]);
        hex << b;
    }
    return hex.str();
}

}
