#pragma once

#include "embc/environment.hpp"
#include "embc/image.hpp"
#include "embc/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>

namespace fixture {

inline std::filesystem::path data_dir() { return EMBC_TEST_DATA_DIR; }
inline std::filesystem::path repo_dir() { return EMBC_SOURCE_DIR; }

inline nlohmann::json load_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

inline nlohmann::json goldens() { return load_json(data_dir() / "goldens.json"); }

// A rendered observation with a random scene and gripper pose; every fifth
// seed uses the first-person view.
inline embc::RasterImage seeded_frame(std::uint64_t seed) {
    embc::Rng rng(seed);
    embc::SceneSpec s{embc::kAllObjects[rng.below(embc::kAllObjects.size())],
                      embc::kAllTables[rng.below(embc::kAllTables.size())],
                      embc::kAllBackgrounds[rng.below(embc::kAllBackgrounds.size())], embc::Task::pick, rng.next()};
    embc::WorldState st = embc::init_scene(s);
    st.gripper = {rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25), rng.uniform(0.05, 0.5)};
    return embc::render(st, seed % 5 == 4 ? embc::View::first_person : embc::View::third_person);
}

inline embc::RasterImage noise_image(std::uint64_t seed, int w = 64, int h = 64) {
    embc::Rng rng(seed);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
    for (auto& p : px)
        p = static_cast<std::uint8_t>(rng.below(256));
    return embc::RasterImage(w, h, std::move(px));
}

inline embc::SceneSpec frozen_image_scene() {
    return {embc::ObjectId::cube, embc::TableId::ceramic, embc::BackgroundId::wall, embc::Task::pick, 42};
}

inline std::string fnv1a(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Shift the frame left by 40 px: the object appears displaced for one step.
inline void shift_frame(embc::RasterImage& f) {
    embc::RasterImage out = f;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x) {
            const int sx = std::min(f.width() - 1, x + 40);
            out.set(x, y, f.get(sx, y));
        }
    f = out;
}

} // namespace fixture
