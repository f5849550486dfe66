#include "embc/policy.hpp"

#include "embc/calibration.hpp"
#include "embc/error.hpp"

#include <algorithm>
#include <cmath>

namespace embc {

namespace cal = calibration;

void PolicyProfile::validate() const {
    if (!(color_tolerance > 0.0))
        fail(ErrorKind::parameter, "profile '" + name + "': color_tolerance must be positive");
    if (min_blob_px < 1)
        fail(ErrorKind::parameter, "profile '" + name + "': min_blob_px must be at least 1");
    if (!(memory_decay >= 0.0 && memory_decay <= 1.0))
        fail(ErrorKind::parameter, "profile '" + name + "': memory_decay must lie in [0, 1]");
    if (!(gain > 0.0) || !(misstep_bias >= 0.0))
        fail(ErrorKind::parameter, "profile '" + name + "': gain must be positive and misstep_bias nonnegative");
}

namespace {
PolicyProfile from_constants(const cal::ProfileConstants& c) {
    return {std::string(c.name), c.color_tolerance, c.min_blob_px, c.gain, c.memory_decay, c.misstep_bias};
}
} // namespace

const std::array<PolicyProfile, 3>& default_profiles() {
    static const std::array<PolicyProfile, 3> profiles = {from_constants(cal::kAccurate),
                                                          from_constants(cal::kPopular), from_constants(cal::kFast)};
    return profiles;
}

const PolicyProfile& profile_by_name(std::string_view name) {
    for (const auto& p : default_profiles())
        if (p.name == name)
            return p;
    fail(ErrorKind::lookup, "unknown policy profile '" + std::string(name) + "'");
}

Perception perceive(const RasterImage& image, const ObjectSpec& target, const PolicyProfile& profile) {
    const double tol2 = profile.color_tolerance * profile.color_tolerance;
    const int r = target.color_rgb[0], g = target.color_rgb[1], b = target.color_rgb[2];
    long long count = 0;
    double su = 0.0, sv = 0.0;
    for (int v = 0; v < image.height(); ++v)
        for (int u = 0; u < image.width(); ++u) {
            const auto* p = image.pixel(u, v);
            const int dr = p[0] - r, dg = p[1] - g, db = p[2] - b;
            if (dr * dr + dg * dg + db * db <= tol2) {
                ++count;
                su += u;
                sv += v;
            }
        }

    Perception out;
    out.blob_area_px = static_cast<int>(count);
    out.detected = count >= profile.min_blob_px;
    if (count > 0) {
        out.centroid_u = su / count + 0.5;
        out.centroid_v = sv / count + 0.5;
    }
    out.confidence = std::clamp(count / expected_silhouette_area(target.id), 0.0, 1.0);
    return out;
}

PlanarPoint back_project(double u, double v, const ObjectSpec& target) {
    const Camera cam = third_person_camera();
    const double mid_height = target.shape == Shape::sphere ? target.half_extent_m : target.height_m / 2.0;
    return {cam.center_x + (u - cam.width / 2.0) / cam.pixels_per_meter,
            cam.center_y + (cam.height / 2.0 - v) / cam.pixels_per_meter - cam.oblique * mid_height};
}

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::approach: return "approach";
    case Phase::align: return "align";
    case Phase::engage: return "engage";
    case Phase::lift_or_push: return "lift_or_push";
    case Phase::done: return "done";
    }
    return "?";
}

bool phase_transition_allowed(Phase from, Phase to) {
    if (from == to)
        return true;
    switch (from) {
    case Phase::approach: return to == Phase::align;
    case Phase::align: return to == Phase::engage || to == Phase::approach;
    case Phase::engage: return to == Phase::lift_or_push;
    case Phase::lift_or_push: return to == Phase::done || to == Phase::approach;
    case Phase::done: return false;
    }
    return false;
}

Proprioception proprioception(const WorldState& state) {
    return {state.gripper, state.gripper_open, state.grasped};
}

namespace {

// Proportional step toward target, scaled (not per-axis clipped) so the
// direction survives the per-step limit.
Vec3 steer(const Vec3& from, const Vec3& to, double gain, double max_z_speed = kMaxStepDelta) {
    Vec3 d{gain * (to.x - from.x), gain * (to.y - from.y), gain * (to.z - from.z)};
    double m = std::max({std::fabs(d.x), std::fabs(d.y), std::fabs(d.z) * kMaxStepDelta / max_z_speed});
    if (m > kMaxStepDelta) {
        const double k = kMaxStepDelta / m;
        d = {d.x * k, d.y * k, d.z * k};
    }
    return d;
}

double lateral_error(const Vec3& g, const Vec3& t) { return std::hypot(t.x - g.x, t.y - g.y); }

struct Plan {
    Vec3 delta;
    GripperCommand gripper = GripperCommand::hold;
    Phase next;
};

double grasp_height(const ObjectSpec& o) {
    return std::min(o.shape == Shape::sphere ? o.half_extent_m : 0.5 * o.height_m, 0.04);
}

// Phase logic given an object estimate. `confident` gates phase advances.
Plan plan(Phase phase, const PlanarPoint& e, bool confident, Task task, const PolicyProfile& profile,
          const ObjectSpec& obj, const Proprioception& body) {
    const Vec3& g = body.gripper;
    const double travel_z = std::max(g.z, obj.height_m + cal::kClearance);

    Vec3 spot{e.x, e.y, 0.0};
    double work_z = grasp_height(obj);
    if (task == Task::push) {
        spot.x -= obj.footprint_radius() + kFingerRadius + cal::kPushStandoff;
        work_z = cal::kPushHeight;
    } else if (task == Task::press) {
        work_z = std::max(0.0, obj.height_m - 0.01);
    }
    const GripperCommand travel_grip = task == Task::pick ? GripperCommand::hold : GripperCommand::close;

    switch (phase) {
    case Phase::approach: {
        const Vec3 target{spot.x, spot.y, travel_z};
        const bool ready = confident && lateral_error(g, target) < cal::kAlignTolerance;
        return {steer(g, target, profile.gain), travel_grip, ready ? Phase::align : Phase::approach};
    }
    case Phase::align: {
        const Vec3 target{spot.x, spot.y, work_z};
        const double lat = lateral_error(g, target);
        if (confident && lat > cal::kReapproachError)
            return {steer(g, {spot.x, spot.y, travel_z}, profile.gain), travel_grip, Phase::approach};
        // Hold height until centred, then descend at the careful speed.
        Vec3 t = target;
        if (lat > cal::kAlignTolerance)
            t.z = g.z;
        const bool ready = confident && lat < cal::kAlignTolerance && std::fabs(g.z - work_z) < cal::kHeightTolerance;
        Phase next = Phase::align;
        if (ready && task != Task::press)
            next = Phase::engage;
        return {steer(g, t, profile.gain, cal::kDescentSpeed), travel_grip, next};
    }
    case Phase::engage:
        return {{}, GripperCommand::close, Phase::lift_or_push};
    case Phase::lift_or_push:
        if (task == Task::pick) {
            if (!body.grasped)
                return {{0.0, 0.0, kMaxStepDelta}, GripperCommand::open, Phase::approach};
            return {{0.0, 0.0, kMaxStepDelta}, GripperCommand::hold, Phase::lift_or_push};
        } else {
            const Vec3 target{e.x + cal::kPushOvershoot, e.y, work_z};
            Vec3 d = steer(g, target, profile.gain);
            d.x = kMaxStepDelta;
            return {d, GripperCommand::close, Phase::lift_or_push};
        }
    case Phase::done:
        return {{}, GripperCommand::hold, Phase::done};
    }
    return {{}, GripperCommand::hold, phase};
}

} // namespace

std::pair<Action, ControllerState> act(const Perception& perception, const ControllerState& state, Task task,
                                       const PolicyProfile& profile, const ObjectSpec& target,
                                       const Proprioception& body) {
    ControllerState next = state;
    if (state.phase == Phase::done)
        return {Action{}, next};

    // Lifting a held object needs no vision.
    if (state.phase == Phase::engage || (state.phase == Phase::lift_or_push && task == Task::pick)) {
        const PlanarPoint e = state.last_estimate.value_or(PlanarPoint{body.gripper.x, body.gripper.y});
        const Plan p = plan(state.phase, e, true, task, profile, target, body);
        next.phase = p.next;
        return {Action{p.delta, p.gripper}, next};
    }

    if (perception.detected) {
        const PlanarPoint e = back_project(perception.centroid_u, perception.centroid_v, target);
        const Plan p = plan(state.phase, e, true, task, profile, target, body);
        next.last_estimate = e;
        next.failure_streak = 0;
        next.last_confident_delta = p.delta;
        next.phase = p.next;
        return {Action{p.delta, p.gripper}, next};
    }

    next.failure_streak = state.failure_streak + 1;
    const Vec3 drift{kDriftDirection.x * profile.misstep_bias, kDriftDirection.y * profile.misstep_bias, 0.0};
    if (!state.last_estimate)
        return {Action{drift, GripperCommand::hold}, next};

    const double w = std::pow(profile.memory_decay, next.failure_streak);
    const Plan p = plan(state.phase, *state.last_estimate, false, task, profile, target, body);
    const Vec3 d{w * p.delta.x + (1.0 - w) * drift.x, w * p.delta.y + (1.0 - w) * drift.y,
                 w * p.delta.z + (1.0 - w) * drift.z};
    return {Action{d, p.gripper}, next};
}

} // namespace embc
