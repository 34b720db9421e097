#pragma once

#include <forksim/scenario/script.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>

namespace forksim::scenario {

nlohmann::ordered_json to_json(const ScenarioScript& s);

/// Parses and validates. Errors name the JSON path.
ScenarioScript from_json(const nlohmann::json& j);

/// Canonical text form: four-space indent, trailing newline.
std::string dump(const ScenarioScript& s);

ScenarioScript parse(const std::string& text);
ScenarioScript load_file(const std::filesystem::path& path);

/// SHA-256 of dump(s), hex.
std::string script_sha256(const ScenarioScript& s);

} // namespace forksim::scenario
