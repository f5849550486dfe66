#include "embc/config.hpp"

#include "embc/codec.hpp"
#include "embc/error.hpp"
#include "embc/scene_suite.hpp"

#include <fstream>
#include <set>

namespace embc {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& msg) { fail(ErrorKind::schema, "config: " + msg); }

const json& require(const json& j, const char* key) {
    if (!j.contains(key))
        schema(std::string("missing required field '") + key + "'");
    return j[key];
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        schema(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

} // namespace

json profile_to_json(const PolicyProfile& p) {
    return json{{"name", p.name},
                {"color_tolerance", p.color_tolerance},
                {"min_blob_px", p.min_blob_px},
                {"gain", p.gain},
                {"memory_decay", p.memory_decay},
                {"misstep_bias", p.misstep_bias}};
}

PolicyProfile profile_from_json(const json& j) {
    if (j.is_string())
        return profile_by_name(j.get<std::string>());
    if (!j.is_object())
        schema("profile entries must be names or objects");
    static const std::set<std::string> keys = {"name", "color_tolerance", "min_blob_px", "gain", "memory_decay",
                                               "misstep_bias"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k))
            schema("unknown profile field '" + k + "'");
    if (!require(j, "name").is_string() || j["name"].get<std::string>().empty())
        schema("profile 'name' must be a non-empty string");
    if (!require(j, "min_blob_px").is_number_integer())
        schema("profile 'min_blob_px' must be an integer");
    PolicyProfile p;
    p.name = j["name"].get<std::string>();
    p.color_tolerance = number_field(j, "color_tolerance");
    p.min_blob_px = j["min_blob_px"].get<int>();
    p.gain = number_field(j, "gain");
    p.memory_decay = number_field(j, "memory_decay");
    p.misstep_bias = number_field(j, "misstep_bias");
    try {
        p.validate();
    } catch (const Error& e) {
        schema(e.what());
    }
    return p;
}

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object())
        schema("top level must be an object");
    static const std::set<std::string> keys = {"scene_suite", "scene_count",   "master_seed", "budgets",
                                               "scenarios",   "codecs",        "profiles",    "output_dir",
                                               "parallelism", "record_steps",  "record_quality", "dual_view"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k))
            schema("unknown field '" + k + "'");

    RunConfig c;
    if (j.contains("scene_suite")) {
        if (!j["scene_suite"].is_string())
            schema("'scene_suite' must be a path string");
        std::filesystem::path p = j["scene_suite"].get<std::string>();
        c.scene_suite = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (j.contains("scene_count")) {
        if (!j["scene_count"].is_number_integer() || j["scene_count"].get<long long>() < 1)
            schema("'scene_count' must be a positive integer");
        c.scene_count = j["scene_count"].get<int>();
    }
    if (j.contains("master_seed")) {
        if (!j["master_seed"].is_number_unsigned())
            schema("'master_seed' must be a nonnegative integer");
        c.master_seed = j["master_seed"].get<std::uint64_t>();
    }

    if (j.contains("budgets") && j.contains("scenarios"))
        schema("give either 'budgets' or 'scenarios', not both");
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        if (!b.is_array() || b.empty())
            schema("'budgets' must be a non-empty array");
        for (const auto& v : b) {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                schema("budgets must be positive numbers");
            c.budgets.push_back({v.get<double>()});
        }
    } else if (j.contains("scenarios")) {
        const auto& s = j["scenarios"];
        if (!s.is_array() || s.empty())
            schema("'scenarios' must be a non-empty array");
        for (const auto& v : s) {
            if (!v.is_string())
                schema("scenario entries must be names");
            c.budgets.push_back(bpp_budget(scenario_preset(v.get<std::string>())));
        }
    } else {
        c.budgets = benchmark_bpp_grid();
    }

    const auto& codecs = require(j, "codecs");
    if (!codecs.is_array() || codecs.empty())
        schema("'codecs' must be a non-empty array");
    for (const auto& v : codecs) {
        if (!v.is_string())
            schema("codec entries must be ids");
        const std::string id = v.get<std::string>();
        codec_by_id(id);
        c.codecs.push_back(id);
    }

    const auto& profiles = require(j, "profiles");
    if (!profiles.is_array() || profiles.empty())
        schema("'profiles' must be a non-empty array");
    for (const auto& v : profiles)
        c.profiles.push_back(profile_from_json(v));

    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            schema("'output_dir' must be a path string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("parallelism")) {
        if (!j["parallelism"].is_number_integer() || j["parallelism"].get<long long>() < 1 ||
            j["parallelism"].get<long long>() > 256)
            schema("'parallelism' must be an integer in [1, 256]");
        c.parallelism = j["parallelism"].get<int>();
    }
    for (auto [key, dst] : {std::pair{"record_steps", &c.record_steps}, std::pair{"record_quality", &c.record_quality},
                            std::pair{"dual_view", &c.dual_view}}) {
        if (!j.contains(key))
            continue;
        if (!j[key].is_boolean())
            schema(std::string("'") + key + "' must be a boolean");
        *dst = j[key].get<bool>();
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::io, "cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        schema(path.string() + ": " + e.what());
    }
    return parse_run_config(j, path.parent_path());
}

std::vector<SceneSpec> resolve_scenes(const RunConfig& c) {
    auto scenes = c.scene_suite ? load_scene_suite(*c.scene_suite) : generate_scene_suite(c.master_seed);
    if (c.scene_count && static_cast<std::size_t>(*c.scene_count) < scenes.size())
        scenes.resize(*c.scene_count);
    return scenes;
}

} // namespace embc
