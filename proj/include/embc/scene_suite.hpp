#pragma once

#include "embc/environment.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace embc {

inline constexpr std::uint64_t kDefaultMasterSeed = 20250611;
inline constexpr int kDefaultSuiteSize = 100;

// Scene i uses object i mod 11, task i mod 3, table i mod 5 and background
// i mod 4, so every combination in the suite is distinct and every list entry
// is covered. The order is then shuffled and per-scene seeds derived from the
// master seed.
std::vector<SceneSpec> generate_scene_suite(std::uint64_t master_seed = kDefaultMasterSeed,
                                            int count = kDefaultSuiteSize);

nlohmann::json scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const nlohmann::json& j);

nlohmann::json suite_to_json(const std::vector<SceneSpec>& scenes, std::uint64_t master_seed);
std::vector<SceneSpec> suite_from_json(const nlohmann::json& j);

std::vector<SceneSpec> load_scene_suite(const std::filesystem::path& path);
void save_scene_suite(const std::filesystem::path& path, const std::vector<SceneSpec>& scenes,
                      std::uint64_t master_seed);

} // namespace embc
