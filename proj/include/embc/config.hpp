#pragma once

#include "embc/channel_budget.hpp"
#include "embc/environment.hpp"
#include "embc/policy.hpp"
#include "embc/scene_suite.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace embc {

// Mirrors docs/config.schema.json.
struct RunConfig {
    std::optional<std::filesystem::path> scene_suite; // resolved against the config's directory
    std::optional<int> scene_count;                   // keep only the first N scenes
    std::uint64_t master_seed = kDefaultMasterSeed;
    std::vector<BppBudget> budgets;                   // from "budgets" or "scenarios"
    std::vector<std::string> codecs;
    std::vector<PolicyProfile> profiles;
    std::filesystem::path output_dir = "out";
    int parallelism = 1;
    bool record_steps = true;
    bool record_quality = true;
    bool dual_view = false;
};

// Throws ErrorKind::schema on structural violations and ErrorKind::lookup on
// unknown codec, profile or scenario names.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json profile_to_json(const PolicyProfile& p);
PolicyProfile profile_from_json(const nlohmann::json& j);

std::vector<SceneSpec> resolve_scenes(const RunConfig& config);

} // namespace embc
