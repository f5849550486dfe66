#pragma once

#include "embc/loop_runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace embc {

nlohmann::json step_to_json(const StepRecord& step);
StepRecord step_from_json(const nlohmann::json& j);

nlohmann::json episode_to_json(const EpisodeRecord& episode);
EpisodeRecord episode_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const BenchmarkResult& result);
BenchmarkResult result_from_json(const nlohmann::json& j);

// cell key, SR, mean step, mean achieved bpp and outcome counts.
std::string summary_csv(const BenchmarkResult& result);

void write_results(const std::filesystem::path& dir, const BenchmarkResult& result);
BenchmarkResult read_results_json(const std::filesystem::path& path);

// Fixed-notation formatting shared by every CSV writer.
std::string format_number(double v, int precision = 6);

} // namespace embc
