#pragma once

#include "abwave/scenario.hpp"

#include <json.hpp>
#include <string>

namespace abwave {

/// Parse a scenario config from JSON (unknown keys rejected, kind is
/// one of free | double_slit | ab_solenoid | toroidal_channel).
/// Throws ConfigError with the offending key on bad input.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Canonical JSON form, also the input of config_hash.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

} // namespace abwave
