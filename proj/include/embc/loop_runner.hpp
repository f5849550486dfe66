#pragma once

#include "embc/analysis.hpp"
#include "embc/channel_budget.hpp"
#include "embc/codec.hpp"
#include "embc/environment.hpp"
#include "embc/policy.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace embc {

enum class Outcome { success, step_cap_exhausted, infeasible, error };
std::string_view to_string(Outcome outcome);
Outcome parse_outcome(std::string_view name);

struct StepRecord {
    int step_index = 0;
    CodecParams chosen;
    double achieved_bpp = 0.0;
    std::size_t payload_bytes = 0;
    Perception perception;
    Phase phase = Phase::approach; // controller phase after acting
    Action action;
    Vec3 object_position;
    Vec3 gripper;
    bool input_is_decoded = true;
    // Quality of the decoded frame against the rendered reference.
    std::optional<double> psnr; // empty when the frames are identical
    double ssim = 1.0;
    FeatureVector features;     // of the decoded frame
    std::optional<double> first_person_bpp;
};

struct EpisodeRecord {
    SceneSpec scene;
    BppBudget budget;
    std::string codec;
    std::string profile;
    Outcome outcome = Outcome::step_cap_exhausted;
    int steps_used = 0;
    std::string error_message;
    double min_achievable_bpp = 0.0; // set for infeasible episodes

    // Per-episode means over recorded steps.
    int frames_transcoded = 0;
    double mean_achieved_bpp = 0.0;
    double max_achieved_bpp = 0.0;
    double mean_confidence = 0.0;
    double mean_blob_area = 0.0;
    std::optional<double> mean_psnr; // over steps with finite PSNR
    double mean_ssim = 0.0;
    FeatureVector mean_features;

    std::vector<StepRecord> steps; // empty unless traces are recorded
};

struct EpisodeOptions {
    bool record_steps = true;
    bool record_quality = true;
    bool dual_view = false; // experimental: also transcode the first-person view, halving each view's budget
    std::optional<PolicyProfile> profile_override;
    // Replaces the controller entirely (tests).
    std::function<Action(const Perception&, const Proprioception&, int step)> policy_override;
    // Mutates the decoded frame before the policy sees it (fault injection).
    std::function<void(int step, RasterImage& frame)> perturb;
};

EpisodeRecord run_episode(const SceneSpec& scene, BppBudget budget, std::string_view codec,
                          const PolicyProfile& profile, const EpisodeOptions& options = {});

struct CellKey {
    std::string codec;
    double budget_bpp = 0.0;
    std::string profile;

    friend bool operator==(const CellKey&, const CellKey&) = default;
    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct Cell {
    CellKey key;
    std::vector<EpisodeRecord> episodes; // in scene-suite order
};

struct BenchmarkResult {
    std::vector<Cell> cells; // sorted by key

    const Cell& cell(const CellKey& key) const; // lookup error when absent
    const Cell* find(const CellKey& key) const;
};

struct BenchmarkPlan {
    std::vector<SceneSpec> scenes;
    std::vector<BppBudget> budgets;
    std::vector<std::string> codecs;
    std::vector<PolicyProfile> profiles;
    int parallelism = 1;
    EpisodeOptions options;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

BenchmarkResult run_benchmark(const BenchmarkPlan& plan);

// successes / (successes + step-cap failures); infeasible and errored
// episodes are reported separately.
double success_rate(const Cell& cell);
// Failures count as the step cap.
double mean_step(const Cell& cell);
double mean_achieved_bpp(const Cell& cell);
int count_outcome(const Cell& cell, Outcome outcome);

} // namespace embc
