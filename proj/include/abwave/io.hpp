#pragma once

#include "abwave/scenario.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace abwave {

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Shortest round-trip decimal form of a double (std::to_chars), so
/// output files are byte-identical across runs and thread counts.
std::string format_double(double v);

void write_profile_csv(const std::string& path, const Profile& profile);
void write_fringe_json(const std::string& path, const FringeReport& report);
void write_run_report(const std::string& path, const ScenarioConfig& config,
                      const SimulationResult& result);
void write_snapshot_csv(const std::string& path, const GridSpec& grid, const Snapshot& snap);
void write_audit_json(const std::string& path, const ScenarioConfig& config,
                      const AuditReport& report);
void write_sweep_csv(const std::string& path, const EffectReport& report);
void write_error_json(const std::string& path, int exit_code, const std::string& kind,
                      const std::string& message);

/// manifest.json: every listed file with its FNV-1a checksum.
void write_manifest(const std::string& path, const std::vector<std::string>& files);

} // namespace abwave
