#include "embc/scene_suite.hpp"

#include "embc/error.hpp"
#include "embc/rng.hpp"

#include <fstream>
#include <numeric>

namespace embc {

using nlohmann::json;

std::vector<SceneSpec> generate_scene_suite(std::uint64_t master_seed, int count) {
    if (count < 1)
        fail(ErrorKind::parameter, "scene suite needs at least one scene");
    std::vector<SceneSpec> scenes;
    scenes.reserve(count);
    for (int i = 0; i < count; ++i) {
        SceneSpec s;
        s.object = kAllObjects[i % kAllObjects.size()];
        s.task = kAllTasks[i % kAllTasks.size()];
        s.table = kAllTables[i % kAllTables.size()];
        s.background = kAllBackgrounds[i % kAllBackgrounds.size()];
        scenes.push_back(s);
    }
    // Fisher-Yates with the portable generator.
    Rng rng(master_seed);
    for (std::size_t i = scenes.size(); i > 1; --i)
        std::swap(scenes[i - 1], scenes[rng.below(i)]);
    for (int i = 0; i < count; ++i)
        scenes[i].seed = splitmix64(master_seed ^ (0x5CE7Eull + static_cast<std::uint64_t>(i)));
    return scenes;
}

json scene_to_json(const SceneSpec& s) {
    return json{{"object", to_string(s.object)},
                {"table", to_string(s.table)},
                {"background", to_string(s.background)},
                {"task", to_string(s.task)},
                {"seed", s.seed}};
}

SceneSpec scene_from_json(const json& j) {
    if (!j.is_object())
        fail(ErrorKind::schema, "scene must be a JSON object");
    for (const char* key : {"object", "table", "background", "task"})
        if (!j.contains(key) || !j[key].is_string())
            fail(ErrorKind::schema, std::string("scene field '") + key + "' must be a string");
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        fail(ErrorKind::schema, "scene field 'seed' must be a nonnegative integer");
    SceneSpec s;
    s.object = parse_object(j["object"].get<std::string>());
    s.table = parse_table(j["table"].get<std::string>());
    s.background = parse_background(j["background"].get<std::string>());
    s.task = parse_task(j["task"].get<std::string>());
    s.seed = j["seed"].get<std::uint64_t>();
    return s;
}

json suite_to_json(const std::vector<SceneSpec>& scenes, std::uint64_t master_seed) {
    json list = json::array();
    for (const auto& s : scenes)
        list.push_back(scene_to_json(s));
    return json{{"format", "embc-scene-suite"}, {"version", 1}, {"master_seed", master_seed}, {"scenes", list}};
}

std::vector<SceneSpec> suite_from_json(const json& j) {
    const json* list = &j;
    if (j.is_object()) {
        if (!j.contains("scenes"))
            fail(ErrorKind::schema, "scene suite document lacks 'scenes'");
        list = &j["scenes"];
    }
    if (!list->is_array() || list->empty())
        fail(ErrorKind::schema, "scene suite must be a non-empty array");
    std::vector<SceneSpec> scenes;
    for (const auto& s : *list)
        scenes.push_back(scene_from_json(s));
    return scenes;
}

std::vector<SceneSpec> load_scene_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::io, "cannot open scene suite " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail(ErrorKind::schema, "scene suite " + path.string() + ": " + e.what());
    }
    return suite_from_json(j);
}

void save_scene_suite(const std::filesystem::path& path, const std::vector<SceneSpec>& scenes,
                      std::uint64_t master_seed) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::io, "cannot write " + path.string());
    out << suite_to_json(scenes, master_seed).dump(2) << '\n';
}

} // namespace embc
