#pragma once

#include <CLI11.hpp>

#include <functional>
#include <string>

namespace embc::cli {

// Each subcommand registers its options and returns the action to run after
// parsing succeeds.
using Action = std::function<int()>;

Action add_budget(CLI::App& app);
Action add_transcode(CLI::App& app);
Action add_render(CLI::App& app);
Action add_run(CLI::App& app);
Action add_sweep(CLI::App& app);
Action add_analyze(CLI::App& app);
Action add_scenes(CLI::App& app);

std::string version_string();

} // namespace embc::cli
