#pragma once

#include <filesystem>
#include <string>

#include "manoma/channel.hpp"

namespace manoma {

// Scenario files are JSON. Angles in radians, distances in meters, complex
// numbers as [re, im] pairs. Both physical and virtual angles are stored so a
// perturbed scenario replays exactly.
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const std::filesystem::path& path, const Scenario& sc);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace manoma
