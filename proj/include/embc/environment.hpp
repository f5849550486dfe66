#pragma once

#include "embc/image.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace embc {

enum class Shape { box, cylinder, sphere, capsule, annulus };
enum class MassClass { light, heavy };

enum class ObjectId { bottle, can, cube, bread, capsule, cereal, lemon, milk, hammer, nut_round, nut_square };
enum class TableId { black, ceramic, cherry, wood_dark, wood_light };
enum class BackgroundId { daily, dark, light, wall };
enum class Task { pick, push, press };
enum class View { third_person, first_person };

inline constexpr std::array kAllObjects = {ObjectId::bottle, ObjectId::can,     ObjectId::cube,
                                           ObjectId::bread,  ObjectId::capsule, ObjectId::cereal,
                                           ObjectId::lemon,  ObjectId::milk,    ObjectId::hammer,
                                           ObjectId::nut_round, ObjectId::nut_square};
inline constexpr std::array kAllTables = {TableId::black, TableId::ceramic, TableId::cherry, TableId::wood_dark,
                                          TableId::wood_light};
inline constexpr std::array kAllBackgrounds = {BackgroundId::daily, BackgroundId::dark, BackgroundId::light,
                                               BackgroundId::wall};
inline constexpr std::array kAllTasks = {Task::pick, Task::push, Task::press};

std::string_view to_string(ObjectId id);
std::string_view to_string(TableId id);
std::string_view to_string(BackgroundId id);
std::string_view to_string(Task task);
std::string_view to_string(Shape shape);
std::string_view to_string(View view);

// Parsers throw ErrorKind::spec on unknown names.
ObjectId parse_object(std::string_view name);
TableId parse_table(std::string_view name);
BackgroundId parse_background(std::string_view name);
Task parse_task(std::string_view name);
View parse_view(std::string_view name);

struct ObjectSpec {
    ObjectId id;
    Shape shape;
    double half_extent_m;  // footprint radius / half-width
    double half_length_m;  // footprint half-length along the object's yaw axis
    double height_m;
    Rgb color_rgb;
    double grasp_width_m;  // max lateral gripper offset that still closes on the object
    double topple_propensity; // 0 never tips; tips when pushed above (1 - p) * height
    MassClass mass_class;

    double footprint_radius() const noexcept {
        return half_length_m > half_extent_m ? half_length_m : half_extent_m;
    }
};

const std::array<ObjectSpec, 11>& object_catalog();
const ObjectSpec& object_spec(ObjectId id);

struct SceneSpec {
    ObjectId object = ObjectId::cube;
    TableId table = TableId::wood_light;
    BackgroundId background = BackgroundId::light;
    Task task = Task::pick;
    std::uint64_t seed = 0;

    friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct ObjectPose {
    Vec3 position; // base of the object; z == 0 rests on the table
    double yaw = 0.0;

    friend bool operator==(const ObjectPose&, const ObjectPose&) = default;
};

// World frame: table centre at the origin, table surface at z = 0, +x away
// from the robot base.
inline constexpr double kTableHeight = 0.0;
inline constexpr double kTableHalfSize = 0.30;
inline constexpr double kPlacementHalfRange = 0.2;
inline constexpr double kMaxStepDelta = 0.02;
inline constexpr int kStepCap = 250;
inline constexpr double kSuccessDisplacement = 0.07;
inline constexpr double kFingerRadius = 0.01;
inline constexpr double kGripperCeiling = 1.0;
inline constexpr Vec3 kGripperHome{-0.30, 0.0, 0.55};

struct WorldState {
    SceneSpec scene;
    ObjectPose object_pose;
    Vec3 initial_object_position;
    Vec3 gripper;
    bool gripper_open = true;
    bool grasped = false;
    bool contact = false;      // contact during the last step
    bool contact_seen = false; // latched
    bool toppled = false;
    int step_index = 0;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

enum class GripperCommand { open, close, hold };

struct Action {
    Vec3 delta;
    GripperCommand gripper = GripperCommand::hold;

    friend bool operator==(const Action&, const Action&) = default;
};

std::string_view to_string(GripperCommand c);
GripperCommand parse_gripper_command(std::string_view name);

WorldState init_scene(const SceneSpec& spec);
WorldState apply_action(const WorldState& state, const Action& action);
bool check_success(const WorldState& state, Task task);

// Silhouette geometry after any toppling.
struct ObjectGeometry {
    Shape shape;
    double half_extent_m;
    double half_length_m;
    double height_m;
    double yaw;
};
ObjectGeometry current_geometry(const WorldState& state);

// Oblique orthographic camera: u = 128 + s (x - cx), v = 128 - s (y + k z - cy).
struct Camera {
    double center_x = 0.0;
    double center_y = 0.0;
    double pixels_per_meter = 360.0;
    double oblique = 0.5;
    int width = 256;
    int height = 256;

    double u(const Vec3& p) const { return width / 2.0 + pixels_per_meter * (p.x - center_x); }
    double v(const Vec3& p) const {
        return height / 2.0 - pixels_per_meter * (p.y + oblique * p.z - center_y);
    }
};

Camera third_person_camera();
Camera first_person_camera(const Vec3& gripper);

// Caches the static table/background layer of a scene's third-person view.
class Renderer {
public:
    explicit Renderer(const SceneSpec& scene);
    RasterImage render(const WorldState& state, View view) const;

private:
    SceneSpec scene_;
    RasterImage third_person_static_;
};

RasterImage render(const WorldState& state, View view);

// Pixel count of the object's silhouette in the third-person view at rest.
double expected_silhouette_area(ObjectId id);

Rgb table_color_at(TableId table, double x, double y);
Rgb background_color_at(BackgroundId background, double x, double y);

} // namespace embc
