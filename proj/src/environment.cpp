#include "embc/environment.hpp"

#include "embc/error.hpp"
#include "embc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace embc {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::array<E, N>& all, const char* what) {
    for (E e : all)
        if (to_string(e) == name)
            return e;
    fail(ErrorKind::spec, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

} // namespace

std::string_view to_string(ObjectId id) {
    switch (id) {
    case ObjectId::bottle: return "Bottle";
    case ObjectId::can: return "Can";
    case ObjectId::cube: return "Cube";
    case ObjectId::bread: return "Bread";
    case ObjectId::capsule: return "Capsule";
    case ObjectId::cereal: return "Cereal";
    case ObjectId::lemon: return "Lemon";
    case ObjectId::milk: return "Milk";
    case ObjectId::hammer: return "Hammer";
    case ObjectId::nut_round: return "Nut-round";
    case ObjectId::nut_square: return "Nut-square";
    }
    return "?";
}

std::string_view to_string(TableId id) {
    switch (id) {
    case TableId::black: return "Black";
    case TableId::ceramic: return "Ceramic";
    case TableId::cherry: return "Cherry";
    case TableId::wood_dark: return "Wood-dark";
    case TableId::wood_light: return "Wood-light";
    }
    return "?";
}

std::string_view to_string(BackgroundId id) {
    switch (id) {
    case BackgroundId::daily: return "Daily";
    case BackgroundId::dark: return "Dark";
    case BackgroundId::light: return "Light";
    case BackgroundId::wall: return "Wall";
    }
    return "?";
}

std::string_view to_string(Task task) {
    switch (task) {
    case Task::pick: return "pick";
    case Task::push: return "push";
    case Task::press: return "press";
    }
    return "?";
}

std::string_view to_string(Shape shape) {
    switch (shape) {
    case Shape::box: return "box";
    case Shape::cylinder: return "cylinder";
    case Shape::sphere: return "sphere";
    case Shape::capsule: return "capsule";
    case Shape::annulus: return "annulus";
    }
    return "?";
}

std::string_view to_string(View view) {
    return view == View::third_person ? "third_person" : "first_person";
}

std::string_view to_string(GripperCommand c) {
    switch (c) {
    case GripperCommand::open: return "open";
    case GripperCommand::close: return "close";
    case GripperCommand::hold: return "hold";
    }
    return "?";
}

ObjectId parse_object(std::string_view name) { return parse_enum(name, kAllObjects, "object"); }
TableId parse_table(std::string_view name) { return parse_enum(name, kAllTables, "table"); }
BackgroundId parse_background(std::string_view name) { return parse_enum(name, kAllBackgrounds, "background"); }
Task parse_task(std::string_view name) { return parse_enum(name, kAllTasks, "task"); }
View parse_view(std::string_view name) {
    return parse_enum(name, std::array{View::third_person, View::first_person}, "view");
}
GripperCommand parse_gripper_command(std::string_view name) {
    return parse_enum(name, std::array{GripperCommand::open, GripperCommand::close, GripperCommand::hold},
                      "gripper command");
}

const std::array<ObjectSpec, 11>& object_catalog() {
    using enum Shape;
    static const std::array<ObjectSpec, 11> catalog = {{
        {ObjectId::bottle, cylinder, 0.035, 0.035, 0.18, {20, 180, 50}, 0.015, 0.5, MassClass::light},
        {ObjectId::can, cylinder, 0.03, 0.03, 0.12, {220, 20, 40}, 0.015, 0.3, MassClass::light},
        {ObjectId::cube, box, 0.025, 0.025, 0.05, {230, 30, 30}, 0.015, 0.0, MassClass::light},
        {ObjectId::bread, box, 0.03, 0.035, 0.05, {210, 120, 20}, 0.015, 0.0, MassClass::light},
        {ObjectId::capsule, capsule, 0.012, 0.022, 0.024, {200, 40, 200}, 0.008, 0.0, MassClass::light},
        {ObjectId::cereal, box, 0.03, 0.05, 0.16, {30, 70, 220}, 0.012, 0.8, MassClass::light},
        {ObjectId::lemon, sphere, 0.03, 0.03, 0.06, {245, 225, 20}, 0.01, 0.0, MassClass::light},
        {ObjectId::milk, box, 0.035, 0.035, 0.19, {90, 200, 235}, 0.012, 0.75, MassClass::light},
        {ObjectId::hammer, capsule, 0.02, 0.10, 0.03, {255, 140, 0}, 0.012, 0.0, MassClass::heavy},
        {ObjectId::nut_round, annulus, 0.035, 0.035, 0.015, {40, 200, 200}, 0.01, 0.0, MassClass::light},
        {ObjectId::nut_square, box, 0.035, 0.035, 0.015, {150, 60, 170}, 0.01, 0.0, MassClass::light},
    }};
    return catalog;
}

const ObjectSpec& object_spec(ObjectId id) { return object_catalog()[static_cast<std::size_t>(id)]; }

WorldState init_scene(const SceneSpec& spec) {
    const auto oi = static_cast<std::size_t>(spec.object);
    if (oi >= kAllObjects.size() || static_cast<std::size_t>(spec.table) >= kAllTables.size() ||
        static_cast<std::size_t>(spec.background) >= kAllBackgrounds.size() ||
        static_cast<std::size_t>(spec.task) >= kAllTasks.size())
        fail(ErrorKind::spec, "scene spec references an unknown catalog entry");

    Rng rng(spec.seed);
    WorldState s;
    s.scene = spec;
    s.object_pose.position = {rng.uniform(-kPlacementHalfRange, kPlacementHalfRange),
                              rng.uniform(-kPlacementHalfRange, kPlacementHalfRange), kTableHeight};
    s.object_pose.yaw = rng.uniform(-std::numbers::pi / 6.0, std::numbers::pi / 6.0);
    s.initial_object_position = s.object_pose.position;
    s.gripper = kGripperHome;
    return s;
}

ObjectGeometry current_geometry(const WorldState& state) {
    const auto& spec = object_spec(state.scene.object);
    if (!state.toppled)
        return {spec.shape, spec.half_extent_m, spec.half_length_m, spec.height_m, state.object_pose.yaw};
    // Lying on its side along the yaw recorded when it tipped.
    return {Shape::box, spec.half_extent_m, spec.height_m / 2.0, 2.0 * spec.half_extent_m, state.object_pose.yaw};
}

namespace {

double clamp_delta(double d) {
    if (!std::isfinite(d))
        return 0.0;
    return std::clamp(d, -kMaxStepDelta, kMaxStepDelta);
}

double horizontal_distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

} // namespace

WorldState apply_action(const WorldState& state, const Action& action) {
    if (state.step_index >= kStepCap)
        fail(ErrorKind::protocol, "cannot act on a terminal state (step cap reached)");

    WorldState s = state;
    const auto& spec = object_spec(s.scene.object);
    Vec3 d{clamp_delta(action.delta.x), clamp_delta(action.delta.y), clamp_delta(action.delta.z)};

    const Vec3 prev = s.gripper;
    auto& obj = s.object_pose.position;
    s.contact = false;

    if (s.grasped) {
        // The held object may not be driven through the table.
        d.z = std::max(d.z, kTableHeight - obj.z);
        d.z = std::max(d.z, kTableHeight - prev.z);
        d.z = std::min(d.z, kGripperCeiling - prev.z);
        s.gripper = {prev.x + d.x, prev.y + d.y, prev.z + d.z};
        obj = {obj.x + d.x, obj.y + d.y, obj.z + d.z};
    } else {
        s.gripper = {prev.x + d.x, prev.y + d.y, std::clamp(prev.z + d.z, kTableHeight, kGripperCeiling)};
        auto& g = s.gripper;
        const ObjectGeometry geo = current_geometry(s);
        const double reach = std::max(geo.half_extent_m, geo.half_length_m) + kFingerRadius;
        const double top = obj.z + geo.height_m;
        const double dxy = horizontal_distance(g, obj);
        const bool straddle = s.gripper_open && !s.toppled && dxy <= spec.grasp_width_m;

        if (g.z < top && dxy < reach && !straddle) {
            s.contact = true;
            if (prev.z >= top) {
                // Landing on the upper face.
                g.z = top;
            } else {
                double nx, ny;
                if (dxy > 1e-12) {
                    nx = (obj.x - g.x) / dxy;
                    ny = (obj.y - g.y) / dxy;
                } else {
                    const double m = std::hypot(d.x, d.y);
                    nx = m > 1e-12 ? d.x / m : 1.0;
                    ny = m > 1e-12 ? d.y / m : 0.0;
                }
                obj.x = g.x + nx * reach;
                obj.y = g.y + ny * reach;
                const double contact_height = g.z - obj.z;
                if (!s.toppled && spec.topple_propensity > 0.0 &&
                    contact_height > (1.0 - spec.topple_propensity) * spec.height_m) {
                    s.toppled = true;
                    s.object_pose.yaw = std::atan2(ny, nx);
                }
            }
        }
    }

    switch (action.gripper) {
    case GripperCommand::open:
        if (s.grasped) {
            s.grasped = false;
            obj.z = kTableHeight;
        }
        s.gripper_open = true;
        break;
    case GripperCommand::close:
        if (s.gripper_open) {
            s.gripper_open = false;
            const double dxy = horizontal_distance(s.gripper, obj);
            const double window = spec.mass_class == MassClass::heavy ? spec.grasp_width_m / 2.0 : spec.grasp_width_m;
            if (!s.toppled && dxy <= window && s.gripper.z >= obj.z && s.gripper.z <= obj.z + spec.height_m)
                s.grasped = true;
        }
        break;
    case GripperCommand::hold:
        break;
    }

    s.contact_seen = s.contact_seen || s.contact;
    ++s.step_index;
    return s;
}

bool check_success(const WorldState& state, Task task) {
    // Inclusive thresholds; the slack absorbs accumulated rounding only.
    constexpr double kSlack = 1e-9;
    const auto& p = state.object_pose.position;
    const auto& p0 = state.initial_object_position;
    switch (task) {
    case Task::pick: return p.z - p0.z >= kSuccessDisplacement - kSlack;
    case Task::push: return std::hypot(p.x - p0.x, p.y - p0.y) >= kSuccessDisplacement - kSlack;
    case Task::press: return state.contact_seen;
    }
    return false;
}

} // namespace embc
