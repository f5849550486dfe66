// Records oracle-derived goldens into tests/data. Run once, review, commit.

#include "budget_oracle.hpp"
#include "image_oracle.hpp"
#include "transcode_oracle.hpp"

#include "../support/fixtures.hpp"

#include "embc/channel_budget.hpp"
#include "embc/codec.hpp"
#include "embc/loop_runner.hpp"
#include "embc/policy.hpp"
#include "embc/scene_suite.hpp"

#include <iostream>

using nlohmann::json;

using fixture::fnv1a;
using fixture::shift_frame;

int main() {
    json g;

    // Budgets, long-double oracle.
    json budget;
    for (const auto& s : embc::scenarios())
        budget[s.name] = static_cast<double>(
            oracle::budget_bpp(s.model.bandwidth_hz, s.model.agent_count, s.model.snr_db));
    budget["snr25_agents10"] = static_cast<double>(oracle::budget_bpp(180000, 10, 25));
    budget["snr15_agents50"] = static_cast<double>(oracle::budget_bpp(180000, 50, 15));
    g["budget_bpp"] = budget;

    // Frozen codec test image and its q=95 round trip.
    const embc::RasterImage img = embc::render(embc::init_scene(fixture::frozen_image_scene()),
                                               embc::View::third_person);
    embc::write_ppm(img, fixture::data_dir() / "frozen_test_image.ppm");
    const auto bs = embc::encode(img, 95, 1);
    const auto bytes = bs.serialize();
    const auto decoded = embc::decode(bs);
    g["codec"] = {{"image", "frozen_test_image.ppm"},
                  {"q95_psnr_db", oracle::direct_psnr(img, decoded)},
                  {"q95_container_bytes", bytes.size()},
                  {"q95_container_fnv1a64", fnv1a(bytes)},
                  {"q95_decoded_fnv1a64", fnv1a(decoded.bytes())}};

    // 20 exhaustive-sweep cases.
    json cases = json::array();
    const double grid[] = {0.015, 0.03, 0.06, 0.1};
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t seed = 1000 + 37 * i;
        const double b = grid[i % 4];
        const auto c = oracle::exhaustive_transcode(fixture::seeded_frame(seed), b);
        cases.push_back({{"frame_seed", seed},
                         {"budget_bpp", b},
                         {"divisor", c ? c->divisor : 0},
                         {"quality", c ? c->quality : 0},
                         {"container_bytes", c ? c->bytes : 0}});
    }
    g["transcode_cases"] = cases;

    // Projected centre of the Cube at rest (oblique camera, mid-height).
    {
        const embc::SceneSpec s{embc::ObjectId::cube, embc::TableId::wood_light, embc::BackgroundId::light,
                                embc::Task::pick, 7};
        const auto st = embc::init_scene(s);
        const auto& p = st.object_pose.position;
        const double u = 128 + 360 * p.x;
        const double v = 128 - 360 * (p.y + 0.5 * (p.z + 0.025));
        g["perception"] = {{"scene", embc::scene_to_json(s)}, {"projected_u", u}, {"projected_v", v}};
    }

    // Regression episodes.
    const auto suite = embc::generate_scene_suite();
    const auto& accurate = embc::profile_by_name("accurate");
    embc::EpisodeOptions quiet;
    quiet.record_steps = false;
    quiet.record_quality = false;

    json reg;
    for (std::size_t i = 0; i < suite.size(); ++i)
        if (suite[i].task == embc::Task::pick) {
            const auto e = embc::run_episode(suite[i], {0.1}, "identity", accurate, quiet);
            reg["identity_pick"] = {{"scene", embc::scene_to_json(suite[i])},
                                    {"outcome", embc::to_string(e.outcome)},
                                    {"steps_used", e.steps_used}};
            break;
        }

    // Negative feedback: one shifted frame, recovered at the cost of steps.
    for (std::size_t i = 0; i < suite.size() && !reg.contains("recovers_from_single_corrupt_frame"); ++i) {
        const auto base = embc::run_episode(suite[i], {0.1}, "identity", accurate, quiet);
        if (base.outcome != embc::Outcome::success)
            continue;
        for (int k : {5, 10, 20}) {
            embc::EpisodeOptions o = quiet;
            o.perturb = [k](int step, embc::RasterImage& f) {
                if (step == k)
                    shift_frame(f);
            };
            const auto hit = embc::run_episode(suite[i], {0.1}, "identity", accurate, o);
            if (hit.outcome == embc::Outcome::success && hit.steps_used > base.steps_used) {
                reg["recovers_from_single_corrupt_frame"] = {{"scene", embc::scene_to_json(suite[i])},
                                                             {"corrupt_step", k},
                                                             {"shift_px", 40},
                                                             {"baseline_steps", base.steps_used},
                                                             {"perturbed_steps", hit.steps_used}};
                break;
            }
        }
    }

    // Positive feedback: succeeds at 0.1 bpp, drifts to the cap at 0.015 bpp.
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto lo = embc::run_episode(suite[i], {0.015}, "dct", accurate, quiet);
        if (lo.outcome != embc::Outcome::step_cap_exhausted)
            continue;
        const auto hi = embc::run_episode(suite[i], {0.1}, "dct", accurate, quiet);
        if (hi.outcome != embc::Outcome::success)
            continue;
        reg["drifts_under_sustained_corruption"] = {{"scene", embc::scene_to_json(suite[i])},
                                                    {"steps_at_0_1", hi.steps_used},
                                                    {"outcome_at_0_015", embc::to_string(lo.outcome)}};
        break;
    }
    g["regression"] = reg;

    std::ofstream out(fixture::data_dir() / "goldens.json");
    out << g.dump(2) << '\n';
    std::cout << g.dump(2) << '\n';
}
