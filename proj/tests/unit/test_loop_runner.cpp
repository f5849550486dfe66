#include <doctest.h>

#include "support/fixtures.hpp"

#include "embc/codec.hpp"
#include "embc/error.hpp"
#include "embc/loop_runner.hpp"
#include "embc/records_json.hpp"
#include "embc/scene_suite.hpp"

using namespace embc;

namespace {

const PolicyProfile& accurate() { return profile_by_name("accurate"); }

EpisodeOptions lean() {
    EpisodeOptions o;
    o.record_steps = false;
    o.record_quality = false;
    return o;
}

EpisodeRecord fake(Outcome o, int steps) {
    EpisodeRecord e;
    e.outcome = o;
    e.steps_used = steps;
    return e;
}

SceneSpec regression_scene(const char* name) { return scene_from_json(fixture::goldens()["regression"][name]["scene"]); }

const SceneSpec kCube{ObjectId::cube, TableId::wood_light, BackgroundId::light, Task::pick, 3};

} // namespace

TEST_SUITE("loop_runner") {

TEST_CASE("outcome names round-trip") {
    for (Outcome o : {Outcome::success, Outcome::step_cap_exhausted, Outcome::infeasible, Outcome::error})
        CHECK(parse_outcome(to_string(o)) == o);
    CHECK_THROWS_AS(parse_outcome("timeout"), Error);
}

TEST_CASE("a null-action policy exhausts the cap") {
    EpisodeOptions o;
    o.record_quality = false;
    o.policy_override = [](const Perception&, const Proprioception&, int) { return Action{}; };
    const auto e = run_episode(kCube, {0.1}, "identity", accurate(), o);
    CHECK(e.outcome == Outcome::step_cap_exhausted);
    CHECK(e.steps_used == kStepCap);
    REQUIRE(e.steps.size() == kStepCap);
    CHECK(e.frames_transcoded == kStepCap);
    for (int i = 0; i < kStepCap; ++i)
        CHECK(e.steps[i].step_index == i);
    CHECK(e.steps.back().object_position == init_scene(kCube).object_pose.position);
}

TEST_CASE("identity pick regression succeeds in at least 40 steps") {
    const auto g = fixture::goldens()["regression"]["identity_pick"];
    const auto e = run_episode(scene_from_json(g["scene"]), {0.1}, "identity", accurate(), lean());
    CHECK(to_string(e.outcome) == g["outcome"].get<std::string>());
    CHECK(e.outcome == Outcome::success);
    CHECK(e.steps_used == g["steps_used"].get<int>());
    CHECK(e.steps_used >= 40);
}

TEST_CASE("a single corrupted frame is recovered at the cost of steps") {
    const auto g = fixture::goldens()["regression"]["recovers_from_single_corrupt_frame"];
    const SceneSpec sc = scene_from_json(g["scene"]);
    const int k = g["corrupt_step"].get<int>();
    const auto base = run_episode(sc, {0.1}, "identity", accurate(), lean());
    EpisodeOptions o;
    o.record_quality = false;
    o.perturb = [k](int step, RasterImage& f) {
        if (step == k)
            fixture::shift_frame(f);
    };
    const auto hit = run_episode(sc, {0.1}, "identity", accurate(), o);
    CHECK(base.steps_used == g["baseline_steps"].get<int>());
    CHECK(hit.outcome == Outcome::success);
    CHECK(hit.steps_used == g["perturbed_steps"].get<int>());
    CHECK(hit.steps_used > base.steps_used);
    // the instrumentation flags exactly the tampered step
    for (const auto& s : hit.steps)
        CHECK(s.input_is_decoded == (s.step_index != k));
}

TEST_CASE("sustained corruption at 0.015 bpp drifts past recovery") {
    const auto g = fixture::goldens()["regression"]["drifts_under_sustained_corruption"];
    const SceneSpec sc = scene_from_json(g["scene"]);
    const auto hi = run_episode(sc, {0.1}, "dct", accurate(), lean());
    const auto lo = run_episode(sc, {0.015}, "dct", accurate(), lean());
    CHECK(hi.outcome == Outcome::success);
    CHECK(hi.steps_used == g["steps_at_0_1"].get<int>());
    CHECK(lo.outcome == Outcome::step_cap_exhausted);
    CHECK(lo.steps_used == kStepCap);
    CHECK(lo.mean_confidence < hi.mean_confidence);
}

TEST_CASE("episodes are deterministic, leak-free and within budget") {
    const SceneSpec sc = regression_scene("drifts_under_sustained_corruption");
    const auto a = run_episode(sc, {0.03}, "dct", accurate());
    const auto b = run_episode(sc, {0.03}, "dct", accurate());
    CHECK(episode_to_json(a).dump() == episode_to_json(b).dump());
    REQUIRE(!a.steps.empty());
    for (const auto& s : a.steps) {
        CHECK(s.input_is_decoded);
        CHECK(s.achieved_bpp <= 0.03);
        CHECK(s.achieved_bpp == doctest::Approx(s.payload_bytes * 8.0 / (256 * 256)));
    }
    CHECK(a.max_achieved_bpp <= 0.03);
    CHECK(a.steps_used >= 1);
    CHECK(a.steps_used <= kStepCap);
}

TEST_CASE("success means the final state passes the task check") {
    const auto g = fixture::goldens()["regression"]["identity_pick"];
    const SceneSpec sc = scene_from_json(g["scene"]);
    const auto e = run_episode(sc, {0.1}, "identity", accurate());
    REQUIRE(e.outcome == Outcome::success);
    REQUIRE(static_cast<int>(e.steps.size()) == e.steps_used);
    const Vec3 p0 = init_scene(sc).object_pose.position;
    CHECK(e.steps.back().object_position.z - p0.z >= kSuccessDisplacement - 1e-9);
    for (std::size_t i = 0; i + 1 < e.steps.size(); ++i)
        CHECK(e.steps[i].object_position.z - p0.z < kSuccessDisplacement - 1e-9);
    // identity frames are bit-exact
    CHECK(!e.steps.front().psnr.has_value());
    CHECK(e.steps.front().ssim == doctest::Approx(1.0));
    CHECK(!e.mean_psnr.has_value());
}

TEST_CASE("phases recorded along an episode follow the graph") {
    const auto e = run_episode(regression_scene("identity_pick"), {0.1}, "identity", accurate());
    Phase prev = Phase::approach;
    for (const auto& s : e.steps) {
        CHECK(phase_transition_allowed(prev, s.phase));
        prev = s.phase;
    }
}

TEST_CASE("an unreachable budget is reported as infeasible") {
    const auto e = run_episode(kCube, {0.0005}, "dct", accurate(), lean());
    CHECK(e.outcome == Outcome::infeasible);
    CHECK(e.steps_used == 0);
    CHECK(e.min_achievable_bpp > 0.0005);
    CHECK(!e.error_message.empty());
}

TEST_CASE("success rate and mean step arithmetic") {
    Cell c;
    c.episodes = {fake(Outcome::success, 50), fake(Outcome::success, 70), fake(Outcome::step_cap_exhausted, 250),
                  fake(Outcome::infeasible, 0), fake(Outcome::error, 0)};
    CHECK(success_rate(c) == doctest::Approx(2.0 / 3.0));
    CHECK(mean_step(c) == doctest::Approx((50 + 70 + 250) / 3.0));
    CHECK(count_outcome(c, Outcome::infeasible) == 1);
    CHECK(count_outcome(c, Outcome::error) == 1);

    // a failure counts as exactly the cap, however it is recorded
    Cell f;
    f.episodes = {fake(Outcome::step_cap_exhausted, 250), fake(Outcome::success, 100)};
    CHECK(mean_step(f) == doctest::Approx(175.0));

    Cell empty;
    empty.episodes = {fake(Outcome::infeasible, 0)};
    CHECK_THROWS_AS(success_rate(empty), Error);
    CHECK_THROWS_AS(mean_step(empty), Error);
    CHECK_THROWS_AS(mean_achieved_bpp(empty), Error);
}

TEST_CASE("mean achieved bpp weights by frames") {
    Cell c;
    auto a = fake(Outcome::success, 10);
    a.frames_transcoded = 10;
    a.mean_achieved_bpp = 0.05;
    auto b = fake(Outcome::success, 30);
    b.frames_transcoded = 30;
    b.mean_achieved_bpp = 0.09;
    c.episodes = {a, b};
    CHECK(mean_achieved_bpp(c) == doctest::Approx((0.5 + 2.7) / 40));
}

TEST_CASE("benchmark cardinality, ordering and lookup") {
    BenchmarkPlan plan;
    plan.scenes = generate_scene_suite(kDefaultMasterSeed, 3);
    plan.budgets = {{0.1}, {0.06}};
    plan.codecs = {"identity", "dct"};
    plan.profiles = {profile_by_name("fast")};
    plan.options = lean();
    std::size_t last = 0;
    plan.progress = [&](std::size_t done, std::size_t total) {
        CHECK(total == 12);
        last = done;
    };
    const auto r = run_benchmark(plan);
    CHECK(last == 12);
    REQUIRE(r.cells.size() == 4);
    for (std::size_t i = 1; i < r.cells.size(); ++i)
        CHECK(r.cells[i - 1].key < r.cells[i].key);
    for (const auto& c : r.cells) {
        REQUIRE(c.episodes.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(c.episodes[i].scene == plan.scenes[i]);
            CHECK(c.episodes[i].codec == c.key.codec);
            CHECK(c.episodes[i].profile == "fast");
        }
    }
    CHECK(r.cell({"dct", 0.06, "fast"}).key.budget_bpp == 0.06);
    CHECK(r.find({"dct", 0.015, "fast"}) == nullptr);
    CHECK_THROWS_AS(r.cell({"dct", 0.015, "fast"}), Error);
}

TEST_CASE("parallel runs equal serial runs") {
    BenchmarkPlan plan;
    plan.scenes = generate_scene_suite(kDefaultMasterSeed, 4);
    plan.budgets = {{0.03}};
    plan.codecs = {"dct"};
    plan.profiles = {profile_by_name("fast"), profile_by_name("popular")};
    plan.options = lean();
    plan.parallelism = 1;
    const auto serial = result_to_json(run_benchmark(plan)).dump();
    plan.parallelism = 3;
    CHECK(result_to_json(run_benchmark(plan)).dump() == serial);
}

TEST_CASE("benchmark input validation") {
    BenchmarkPlan plan;
    plan.scenes = {kCube};
    plan.budgets = {{0.1}};
    plan.codecs = {"nope"};
    plan.profiles = {accurate()};
    try {
        run_benchmark(plan);
        FAIL("expected lookup error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::lookup);
    }
    plan.codecs = {"identity"};
    plan.scenes.clear();
    CHECK_THROWS_AS(run_benchmark(plan), Error);
    plan.scenes = {kCube};
    plan.budgets = {{0.1}, {0.1}};
    CHECK_THROWS_AS(run_benchmark(plan), Error);
    CHECK_THROWS_AS(run_episode(kCube, {0.1}, "nope", accurate()), Error);
}

TEST_CASE("a failing codec becomes an error episode without stopping the sweep") {
    if (!codec_registered("test-broken"))
        register_codec(
            "test-broken", [](const RasterImage&, int) -> std::vector<std::uint8_t> { return {1, 2, 3}; },
            [](std::span<const std::uint8_t>, int, int, int) -> RasterImage {
                fail(ErrorKind::decode, "broken on purpose");
            });
    BenchmarkPlan plan;
    plan.scenes = {kCube};
    plan.budgets = {{0.1}};
    plan.codecs = {"identity", "test-broken"};
    plan.profiles = {accurate()};
    plan.options = lean();
    const auto r = run_benchmark(plan);
    const auto& bad = r.cell({"test-broken", 0.1, "accurate"});
    CHECK(bad.episodes[0].outcome == Outcome::error);
    CHECK(bad.episodes[0].error_message.find("broken on purpose") != std::string::npos);
    CHECK(bad.episodes[0].scene == kCube);
    CHECK_THROWS_AS(success_rate(bad), Error);
    CHECK(r.cell({"identity", 0.1, "accurate"}).episodes[0].outcome == Outcome::success);
}

TEST_CASE("dual view splits the budget between views") {
    EpisodeOptions o;
    o.record_quality = false;
    o.dual_view = true;
    o.policy_override = [](const Perception&, const Proprioception&, int) { return Action{{0.01, 0, -0.01}}; };
    const auto e = run_episode(kCube, {0.06}, "dct", accurate(), o);
    REQUIRE(!e.steps.empty());
    for (std::size_t i = 0; i < 20; ++i) {
        const auto& s = e.steps[i];
        REQUIRE(s.first_person_bpp.has_value());
        CHECK(*s.first_person_bpp <= 0.03);
        CHECK(s.achieved_bpp <= 0.03);
    }
}

TEST_CASE("profile override replaces the profile") {
    PolicyProfile p = profile_by_name("fast");
    p.name = "custom";
    EpisodeOptions o = lean();
    o.profile_override = p;
    o.policy_override = [](const Perception&, const Proprioception&, int) { return Action{}; };
    const auto e = run_episode(kCube, {0.1}, "identity", accurate(), o);
    CHECK(e.profile == "custom");
}

}
