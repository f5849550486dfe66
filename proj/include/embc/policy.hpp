#pragma once

#include "embc/environment.hpp"
#include "embc/image.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace embc {

struct PolicyProfile {
    std::string name;
    double color_tolerance = 0.0; // Euclidean RGB distance to the target's nominal colour
    int min_blob_px = 1;
    double gain = 0.5;            // proportional step gain
    double memory_decay = 0.0;    // trust in the last confident estimate, per missed frame
    double misstep_bias = 0.0;    // drift magnitude (m/step) once the estimate is lost

    void validate() const;
    friend bool operator==(const PolicyProfile&, const PolicyProfile&) = default;
};

// accurate, popular, fast, in that order. Frozen in calibration.hpp.
const std::array<PolicyProfile, 3>& default_profiles();
const PolicyProfile& profile_by_name(std::string_view name);

struct Perception {
    bool detected = false;
    double centroid_u = 0.0; // pixels, third-person image
    double centroid_v = 0.0;
    int blob_area_px = 0;
    double confidence = 0.0;

    friend bool operator==(const Perception&, const Perception&) = default;
};

Perception perceive(const RasterImage& image, const ObjectSpec& target, const PolicyProfile& profile);

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

// Inverse of the third-person projection for an object resting on the table.
PlanarPoint back_project(double u, double v, const ObjectSpec& target);

enum class Phase { approach, align, engage, lift_or_push, done };
std::string_view to_string(Phase phase);

// Allowed transitions: approach -> align -> engage -> lift_or_push -> done,
// plus the retry edges align -> approach and lift_or_push -> approach.
bool phase_transition_allowed(Phase from, Phase to);

struct ControllerState {
    Phase phase = Phase::approach;
    std::optional<PlanarPoint> last_estimate;
    int failure_streak = 0;
    Vec3 last_confident_delta;

    friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

// What the robot knows about itself without looking.
struct Proprioception {
    Vec3 gripper;
    bool gripper_open = true;
    bool grasped = false;
};

Proprioception proprioception(const WorldState& state);

std::pair<Action, ControllerState> act(const Perception& perception, const ControllerState& state, Task task,
                                       const PolicyProfile& profile, const ObjectSpec& target,
                                       const Proprioception& body);

// Unit direction of the drift applied when the target is lost.
inline constexpr Vec3 kDriftDirection{0.70710678118654752, 0.70710678118654752, 0.0};

} // namespace embc
