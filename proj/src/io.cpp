#include "abwave/io.hpp"

#include "abwave/config.hpp"
#include "abwave/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace abwave {

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("io: cannot open " + path + " for writing");
    out << text;
    if (!out) throw ConfigError("io: write failed for " + path);
}

json meta_json(const RunMetadata& m) {
    json j;
    j["config_hash"] = m.config_hash;
    j["steps"] = m.steps;
    j["final_time"] = m.final_time;
    j["stability_ratio"] = m.stability_ratio;
    j["crossed_fraction"] = m.crossed_fraction;
    j["final_norm"] = m.final_norm;
    j["norm_history"] = m.norm_history;
    j["warnings"] = m.warnings;
    return j;
}

} // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17] = {};
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[v & 0xf];
        v >>= 4;
    }
    return std::string(buf, 16);
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw NumericalError("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string config_hash(const ScenarioConfig& config) {
    return hex64(fnv1a64(config_to_json(config).dump()));
}

void write_profile_csv(const std::string& path, const Profile& profile) {
    std::ostringstream out;
    out << "y,intensity\n";
    for (std::size_t i = 0; i < profile.x.size(); ++i)
        out << format_double(profile.x[i]) << ',' << format_double(profile.intensity[i]) << '\n';
    write_text(path, out.str());
}

void write_fringe_json(const std::string& path, const FringeReport& report) {
    json j;
    j["fringe_spacing"] = report.fringe_spacing;
    j["spacing_uncertainty"] = report.spacing_uncertainty;
    j["central_max_position"] = report.central_max_position;
    j["visibility"] = report.visibility;
    j["maxima_positions"] = report.maxima_positions;
    if (report.shift_vs_reference) j["shift_vs_reference"] = *report.shift_vs_reference;
    write_text(path, j.dump(2) + "\n");
}

void write_run_report(const std::string& path, const ScenarioConfig& config,
                      const SimulationResult& result) {
    json j;
    j["config"] = config_to_json(config);
    j["metadata"] = meta_json(result.metadata);
    j["snapshot_count"] = result.snapshots.size();
    write_text(path, j.dump(2) + "\n");
}

void write_snapshot_csv(const std::string& path, const GridSpec& grid, const Snapshot& snap) {
    std::ostringstream out;
    out << "# time=" << format_double(snap.time) << " nx=" << grid.nx << " ny=" << grid.ny
        << '\n';
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i) out << ',';
            out << format_double(snap.density[grid.idx(i, j)]);
        }
        out << '\n';
    }
    write_text(path, out.str());
}

void write_audit_json(const std::string& path, const ScenarioConfig& config,
                      const AuditReport& report) {
    json j;
    j["config"] = config_to_json(config);
    j["steps"] = report.steps;
    j["failed"] = report.failed;
    if (report.failed) j["failure"] = report.failure;
    json branches = json::array();
    for (const auto& b : report.branches) {
        json bj;
        bj["gauge"] = b.gauge_name;
        bj["snapshot_max_dev"] = b.snapshot_max_dev;
        bj["profile_max_dev"] = b.profile_max_dev;
        bj["profile_rms_dev"] = b.profile_rms_dev;
        bj["wavevector"] = {b.wavevector.t, b.wavevector.x, b.wavevector.y, b.wavevector.z};
        bj["wavevector_frozen_ref"] = {b.wavevector_frozen_ref.t, b.wavevector_frozen_ref.x,
                                       b.wavevector_frozen_ref.y, b.wavevector_frozen_ref.z};
        bj["loop_phase"] = b.loop_phase;
        branches.push_back(bj);
    }
    j["branches"] = branches;
    write_text(path, j.dump(2) + "\n");
}

void write_sweep_csv(const std::string& path, const EffectReport& report) {
    std::ostringstream out;
    out << "a,fullwave_spacing,fullwave_shift,fixedgauge_wavelength,fixedgauge_spacing,"
           "eikonal_shift,botharm_profile_dev,botharm_spacing\n";
    for (const auto& r : report.rows)
        out << format_double(r.a) << ',' << format_double(r.fullwave_spacing) << ','
            << format_double(r.fullwave_shift) << ',' << format_double(r.fixedgauge_wavelength)
            << ',' << format_double(r.fixedgauge_spacing) << ',' << format_double(r.eikonal_shift)
            << ',' << format_double(r.botharm_profile_dev) << ','
            << format_double(r.botharm_spacing) << '\n';
    write_text(path, out.str());
}

void write_error_json(const std::string& path, int exit_code, const std::string& kind,
                      const std::string& message) {
    json j;
    j["exit_code"] = exit_code;
    j["kind"] = kind;
    j["message"] = message;
    write_text(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& path, const std::vector<std::string>& files) {
    json entries = json::array();
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw ConfigError("io: cannot open " + f + " for checksum");
        std::ostringstream buf;
        buf << in.rdbuf();
        json e;
        e["file"] = std::filesystem::path(f).filename().string();
        e["fnv1a64"] = hex64(fnv1a64(buf.str()));
        e["bytes"] = buf.str().size();
        entries.push_back(e);
    }
    json j;
    j["files"] = entries;
    write_text(path, j.dump(2) + "\n");
}

} // namespace abwave
