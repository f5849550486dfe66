#include "embc/loop_runner.hpp"

#include "embc/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace embc {

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::step_cap_exhausted: return "step_cap_exhausted";
    case Outcome::infeasible: return "infeasible";
    case Outcome::error: return "error";
    }
    return "?";
}

Outcome parse_outcome(std::string_view name) {
    for (Outcome o : {Outcome::success, Outcome::step_cap_exhausted, Outcome::infeasible, Outcome::error})
        if (to_string(o) == name)
            return o;
    fail(ErrorKind::schema, "unknown outcome '" + std::string(name) + "'");
}

namespace {

struct Accumulator {
    int n = 0;
    int psnr_n = 0;
    double bpp = 0.0, max_bpp = 0.0, conf = 0.0, area = 0.0, psnr = 0.0, ssim = 0.0;
    FeatureVector f;

    void add(const StepRecord& s) {
        ++n;
        bpp += s.achieved_bpp;
        max_bpp = std::max(max_bpp, s.achieved_bpp);
        conf += s.perception.confidence;
        area += s.perception.blob_area_px;
        if (s.psnr) {
            ++psnr_n;
            psnr += *s.psnr;
        }
        ssim += s.ssim;
        f.luminance += s.features.luminance;
        f.contrast += s.features.contrast;
        f.chrominance += s.features.chrominance;
        f.blur += s.features.blur;
        f.spatial_information += s.features.spatial_information;
    }

    void finish(EpisodeRecord& e) const {
        e.frames_transcoded = n;
        e.max_achieved_bpp = max_bpp;
        if (n == 0)
            return;
        const double k = 1.0 / n;
        e.mean_achieved_bpp = bpp * k;
        e.mean_confidence = conf * k;
        e.mean_blob_area = area * k;
        if (psnr_n > 0)
            e.mean_psnr = psnr / psnr_n;
        e.mean_ssim = ssim * k;
        e.mean_features = {f.luminance * k, f.contrast * k, f.chrominance * k, f.blur * k,
                           f.spatial_information * k};
    }
};

} // namespace

EpisodeRecord run_episode(const SceneSpec& scene, BppBudget budget, std::string_view codec,
                          const PolicyProfile& profile_in, const EpisodeOptions& options) {
    const PolicyProfile& profile = options.profile_override ? *options.profile_override : profile_in;
    profile.validate();
    codec_by_id(codec); // lookup error before any work

    EpisodeRecord rec;
    rec.scene = scene;
    rec.budget = budget;
    rec.codec = std::string(codec);
    rec.profile = profile.name;

    const ObjectSpec& target = object_spec(scene.object);
    const Renderer renderer(scene);
    WorldState state = init_scene(scene);
    ControllerState ctl;
    Accumulator acc;
    const BppBudget view_budget{options.dual_view ? budget.target_bpp / 2.0 : budget.target_bpp};

    while (state.step_index < kStepCap) {
        StepRecord step;
        step.step_index = state.step_index;

        const RasterImage reference = renderer.render(state, View::third_person);
        TranscodeResult tr;
        try {
            tr = transcode_under_budget(reference, view_budget, codec);
            if (options.dual_view) {
                const RasterImage fp = renderer.render(state, View::first_person);
                step.first_person_bpp = transcode_under_budget(fp, view_budget, codec).achieved_bpp;
            }
        } catch (const InfeasibleBudget& e) {
            rec.outcome = Outcome::infeasible;
            rec.min_achievable_bpp = e.min_achievable_bpp();
            rec.steps_used = state.step_index;
            rec.error_message = e.what();
            acc.finish(rec);
            return rec;
        }
        step.chosen = tr.chosen;
        step.achieved_bpp = tr.achieved_bpp;
        step.payload_bytes = tr.payload_bytes;

        RasterImage frame = tr.decoded;
        if (options.perturb)
            options.perturb(state.step_index, frame);
        step.input_is_decoded = frame == tr.decoded;

        step.perception = perceive(frame, target, profile);
        if (options.record_quality) {
            const double p = psnr(reference, tr.decoded);
            if (std::isfinite(p))
                step.psnr = p;
            step.ssim = ssim(reference, tr.decoded);
            step.features = low_level_features(tr.decoded);
        }

        Action action;
        if (options.policy_override) {
            action = options.policy_override(step.perception, proprioception(state), state.step_index);
        } else {
            auto [a, next] = act(step.perception, ctl, scene.task, profile, target, proprioception(state));
            action = a;
            ctl = next;
        }
        step.phase = ctl.phase;
        step.action = action;

        state = apply_action(state, action);
        step.object_position = state.object_pose.position;
        step.gripper = state.gripper;
        acc.add(step);
        if (options.record_steps)
            rec.steps.push_back(std::move(step));

        if (check_success(state, scene.task)) {
            rec.outcome = Outcome::success;
            rec.steps_used = state.step_index;
            acc.finish(rec);
            return rec;
        }
    }
    rec.outcome = Outcome::step_cap_exhausted;
    rec.steps_used = kStepCap;
    acc.finish(rec);
    return rec;
}

const Cell* BenchmarkResult::find(const CellKey& key) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), key,
                               [](const Cell& c, const CellKey& k) { return c.key < k; });
    if (it == cells.end() || !(it->key == key))
        return nullptr;
    return &*it;
}

const Cell& BenchmarkResult::cell(const CellKey& key) const {
    if (const Cell* c = find(key))
        return *c;
    fail(ErrorKind::lookup, "no cell for codec '" + key.codec + "', profile '" + key.profile + "'");
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan) {
    if (plan.scenes.empty())
        fail(ErrorKind::parameter, "benchmark needs a non-empty scene set");
    if (plan.budgets.empty() || plan.codecs.empty() || plan.profiles.empty())
        fail(ErrorKind::parameter, "benchmark needs at least one budget, codec and profile");
    for (const auto& c : plan.codecs)
        codec_by_id(c);
    for (const auto& p : plan.profiles)
        p.validate();

    BenchmarkResult result;
    for (const auto& c : plan.codecs)
        for (const auto& b : plan.budgets)
            for (const auto& p : plan.profiles) {
                Cell cell;
                cell.key = {c, b.target_bpp, p.name};
                cell.episodes.resize(plan.scenes.size());
                result.cells.push_back(std::move(cell));
            }
    std::sort(result.cells.begin(), result.cells.end(), [](const Cell& a, const Cell& b) { return a.key < b.key; });
    for (std::size_t i = 1; i < result.cells.size(); ++i)
        if (result.cells[i].key == result.cells[i - 1].key)
            fail(ErrorKind::parameter, "duplicate benchmark cell for codec '" + result.cells[i].key.codec + "'");

    auto profile_of = [&](const std::string& name) -> const PolicyProfile& {
        for (const auto& p : plan.profiles)
            if (p.name == name)
                return p;
        fail(ErrorKind::lookup, "unknown profile " + name);
    };

    const std::size_t per_cell = plan.scenes.size();
    const std::size_t total = result.cells.size() * per_cell;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total)
                return;
            Cell& cell = result.cells[job / per_cell];
            const SceneSpec& scene = plan.scenes[job % per_cell];
            EpisodeRecord& slot = cell.episodes[job % per_cell];
            try {
                slot = run_episode(scene, BppBudget{cell.key.budget_bpp}, cell.key.codec,
                                   profile_of(cell.key.profile), plan.options);
            } catch (const std::exception& e) {
                slot = EpisodeRecord{};
                slot.scene = scene;
                slot.budget = BppBudget{cell.key.budget_bpp};
                slot.codec = cell.key.codec;
                slot.profile = cell.key.profile;
                slot.outcome = Outcome::error;
                slot.error_message = e.what();
            }
            const std::size_t d = ++done;
            if (plan.progress) {
                std::lock_guard lock(progress_mutex);
                plan.progress(d, total);
            }
        }
    };

    const int threads = std::max(1, plan.parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
    }
    return result;
}

int count_outcome(const Cell& cell, Outcome outcome) {
    return static_cast<int>(std::count_if(cell.episodes.begin(), cell.episodes.end(),
                                          [&](const EpisodeRecord& e) { return e.outcome == outcome; }));
}

namespace {
bool valid(const EpisodeRecord& e) {
    return e.outcome == Outcome::success || e.outcome == Outcome::step_cap_exhausted;
}
} // namespace

double success_rate(const Cell& cell) {
    int n = 0, ok = 0;
    for (const auto& e : cell.episodes)
        if (valid(e)) {
            ++n;
            ok += e.outcome == Outcome::success;
        }
    if (n == 0)
        fail(ErrorKind::undefined_statistic, "success rate of a cell with no valid episodes");
    return static_cast<double>(ok) / n;
}

double mean_step(const Cell& cell) {
    int n = 0;
    double total = 0.0;
    for (const auto& e : cell.episodes)
        if (valid(e)) {
            ++n;
            total += e.outcome == Outcome::success ? e.steps_used : kStepCap;
        }
    if (n == 0)
        fail(ErrorKind::undefined_statistic, "mean step of a cell with no valid episodes");
    return total / n;
}

double mean_achieved_bpp(const Cell& cell) {
    double total = 0.0;
    long frames = 0;
    for (const auto& e : cell.episodes) {
        total += e.mean_achieved_bpp * e.frames_transcoded;
        frames += e.frames_transcoded;
    }
    if (frames == 0)
        fail(ErrorKind::undefined_statistic, "no transcoded frames in cell");
    return total / static_cast<double>(frames);
}

} // namespace embc
