#include "commands.hpp"

#include "embc/calibration.hpp"
#include "embc/channel_budget.hpp"
#include "embc/codec.hpp"
#include "embc/config.hpp"
#include "embc/environment.hpp"
#include "embc/error.hpp"
#include "embc/loop_runner.hpp"
#include "embc/records_json.hpp"
#include "embc/report.hpp"
#include "embc/scene_suite.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <unistd.h>

namespace embc::cli {

using nlohmann::json;

std::string version_string() {
    return "embc 1.0.0 (calibration " + std::string(calibration::kCalibrationVersion) + ")";
}

namespace {

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string host_name() {
    char buf[256] = {};
    if (gethostname(buf, sizeof buf - 1) != 0)
        return "unknown";
    return buf;
}

std::string budget_row(const std::string& name, const ChannelModel& m) {
    return name + ',' + std::to_string(m.agent_count) + ',' + format_number(m.snr_db, 2) + ',' +
           format_number(channel_bps(m), 1) + ',' + format_number(bpp_budget(m).target_bpp, 3) + ',' +
           format_number(bpp_budget(m).target_bpp, 6);
}

} // namespace

Action add_budget(CLI::App& app) {
    struct Opts {
        std::string scenario;
        std::optional<double> snr_db, bandwidth_hz, latency_ms;
        std::optional<int> agents;
    };
    auto o = std::make_shared<Opts>();
    app.add_option("--scenario", o->scenario, "Preset name; omit to list every preset");
    app.add_option("--snr-db", o->snr_db, "Override the SNR in dB");
    app.add_option("--agents", o->agents, "Override the number of agents sharing the channel");
    app.add_option("--bandwidth-hz", o->bandwidth_hz, "Override the channel bandwidth");
    app.add_option("--latency-ms", o->latency_ms, "Override the per-image transmission time in ms");
    return [o] {
        const bool overrides = o->snr_db || o->agents || o->bandwidth_hz || o->latency_ms;
        if (o->scenario.empty() && !overrides) {
            std::cout << "scenario,agents,snr_db,bps,bpp,bpp_exact\n";
            for (const auto& s : scenarios())
                std::cout << budget_row(s.name, s.model) << '\n';
            return 0;
        }
        ChannelModel m = scenario_preset(o->scenario.empty() ? "ideal" : o->scenario);
        if (o->snr_db)
            m.snr_db = *o->snr_db;
        if (o->agents)
            m.agent_count = *o->agents;
        if (o->bandwidth_hz)
            m.bandwidth_hz = *o->bandwidth_hz;
        if (o->latency_ms)
            m.transmission_time_s = *o->latency_ms / 1000.0;
        const std::string name = o->scenario.empty() ? "custom" : overrides ? o->scenario + "*" : o->scenario;
        const std::string row = budget_row(name, m);
        std::cout << "scenario,agents,snr_db,bps,bpp,bpp_exact\n" << row << '\n';
        return 0;
    };
}

Action add_transcode(CLI::App& app) {
    struct Opts {
        std::string in, out, codec = std::string(kNativeCodecId), report, bitstream;
        double bpp = 0.0;
    };
    auto o = std::make_shared<Opts>();
    app.add_option("--in", o->in, "Input PPM (P6)")->required();
    app.add_option("--bpp", o->bpp, "Budget in bits per pixel")->required();
    app.add_option("--out", o->out, "Decoded PPM output")->required();
    app.add_option("--codec", o->codec, "Codec id");
    app.add_option("--report", o->report, "Sidecar JSON report (default: <out>.json)");
    app.add_option("--bitstream", o->bitstream, "Also write the EMBC container here");
    return [o] {
        const RasterImage img = read_ppm(o->in);
        const TranscodeResult r = transcode_under_budget(img, BppBudget{o->bpp}, o->codec);
        write_ppm(r.decoded, o->out);
        if (!o->bitstream.empty()) {
            const auto out =
                encode(img, r.chosen.quality, r.chosen.resolution_divisor, o->codec).serialize();
            std::ofstream f(o->bitstream, std::ios::binary);
            if (!f)
                fail(ErrorKind::io, "cannot write " + o->bitstream);
            f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
        }
        const json report{{"codec", o->codec},
                          {"budget_bpp", o->bpp},
                          {"quality", r.chosen.quality},
                          {"resolution_divisor", r.chosen.resolution_divisor},
                          {"bytes", r.payload_bytes},
                          {"achieved_bpp", r.achieved_bpp}};
        write_json(o->report.empty() ? o->out + ".json" : o->report, report);
        std::cout << report.dump() << '\n';
        return 0;
    };
}

Action add_render(CLI::App& app) {
    struct Opts {
        std::string scene_file, suite, out, view = "third_person";
        std::optional<int> index;
        std::string object = "Cube", table = "Wood-light", background = "Light", task = "pick";
        std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    app.add_option("--scene", o->scene_file, "Scene JSON document");
    app.add_option("--suite", o->suite, "Scene suite JSON (with --index)");
    app.add_option("--index", o->index, "Scene index within --suite");
    app.add_option("--object", o->object, "Object name");
    app.add_option("--table", o->table, "Table name");
    app.add_option("--background", o->background, "Background name");
    app.add_option("--task", o->task, "pick, push or press");
    app.add_option("--seed", o->seed, "Scene seed");
    app.add_option("--view", o->view, "third_person or first_person");
    app.add_option("--out", o->out, "Output PPM")->required();
    return [o] {
        SceneSpec scene;
        if (!o->scene_file.empty()) {
            std::ifstream in(o->scene_file);
            if (!in)
                fail(ErrorKind::io, "cannot open " + o->scene_file);
            json j;
            try {
                in >> j;
            } catch (const json::parse_error& e) {
                fail(ErrorKind::schema, e.what());
            }
            scene = scene_from_json(j);
        } else if (!o->suite.empty()) {
            const auto scenes = load_scene_suite(o->suite);
            const int i = o->index.value_or(0);
            if (i < 0 || static_cast<std::size_t>(i) >= scenes.size())
                fail(ErrorKind::parameter, "--index out of range");
            scene = scenes[i];
        } else {
            scene = {parse_object(o->object), parse_table(o->table), parse_background(o->background),
                     parse_task(o->task), o->seed};
        }
        write_ppm(render(init_scene(scene), parse_view(o->view)), o->out);
        return 0;
    };
}

namespace {

struct RunOpts {
    std::string config, out, codec, profile;
    std::optional<double> bpp;
    std::optional<int> parallelism, scenes;
    bool quiet = false;
};

void add_run_options(CLI::App& app, RunOpts& o) {
    app.add_option("--config", o.config, "Run configuration JSON")->required();
    app.add_option("--out", o.out, "Output directory (overrides output_dir)");
    app.add_option("--parallelism", o.parallelism, "Worker threads (overrides parallelism)");
    app.add_option("--scenes", o.scenes, "Use only the first N scenes");
    app.add_flag("--quiet", o.quiet, "No progress on stderr");
}

int execute(const RunOpts& o, RunConfig cfg, const std::string& command) {
    if (o.out.size())
        cfg.output_dir = o.out;
    if (o.parallelism) {
        if (*o.parallelism < 1)
            fail(ErrorKind::parameter, "--parallelism must be at least 1");
        cfg.parallelism = *o.parallelism;
    }
    if (o.scenes) {
        if (*o.scenes < 1)
            fail(ErrorKind::parameter, "--scenes must be at least 1");
        cfg.scene_count = *o.scenes;
    }

    BenchmarkPlan plan;
    plan.scenes = resolve_scenes(cfg);
    plan.budgets = cfg.budgets;
    plan.codecs = cfg.codecs;
    plan.profiles = cfg.profiles;
    plan.parallelism = cfg.parallelism;
    plan.options.record_steps = cfg.record_steps;
    plan.options.record_quality = cfg.record_quality;
    plan.options.dual_view = cfg.dual_view;
    if (!o.quiet)
        plan.progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 25 == 0)
                std::cerr << "\r" << done << "/" << total << " episodes" << (done == total ? "\n" : "") << std::flush;
        };

    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const BenchmarkResult result = run_benchmark(plan);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_results(cfg.output_dir, result);
    write_json(cfg.output_dir / "run_meta.json", json{{"command", command},
                                                      {"version", version_string()},
                                                      {"config", o.config},
                                                      {"started_utc", started},
                                                      {"elapsed_s", elapsed},
                                                      {"host", host_name()},
                                                      {"parallelism", cfg.parallelism}});
    std::cout << summary_csv(result);
    return 0;
}

} // namespace

Action add_run(CLI::App& app) {
    auto o = std::make_shared<RunOpts>();
    add_run_options(app, *o);
    app.add_option("--codec", o->codec, "Codec id (default: first in config)");
    app.add_option("--bpp", o->bpp, "Budget (default: first in config)");
    app.add_option("--profile", o->profile, "accurate, popular or fast (default: first in config)");
    return [o] {
        RunConfig cfg = load_run_config(o->config);
        if (!o->codec.empty()) {
            codec_by_id(o->codec);
            cfg.codecs = {o->codec};
        }
        if (o->bpp) {
            if (!(*o->bpp > 0.0))
                fail(ErrorKind::parameter, "--bpp must be positive");
            cfg.budgets = {BppBudget{*o->bpp}};
        }
        if (!o->profile.empty())
            cfg.profiles = {profile_by_name(o->profile)};
        cfg.codecs.resize(1);
        cfg.budgets.resize(1);
        cfg.profiles.resize(1);
        return execute(*o, cfg, "run");
    };
}

Action add_sweep(CLI::App& app) {
    auto o = std::make_shared<RunOpts>();
    add_run_options(app, *o);
    return [o] { return execute(*o, load_run_config(o->config), "sweep"); };
}

Action add_analyze(CLI::App& app) {
    struct Opts {
        std::string results, out = "report";
    };
    auto o = std::make_shared<Opts>();
    app.add_option("--results", o->results, "results.json from run or sweep")->required();
    app.add_option("--out", o->out, "Report directory");
    return [o] {
        const auto files = write_report(read_results_json(o->results), o->out);
        for (const auto& f : files)
            std::cout << (std::filesystem::path(o->out) / f).string() << '\n';
        return 0;
    };
}

Action add_scenes(CLI::App& app) {
    app.require_subcommand(1);
    CLI::App* gen = app.add_subcommand("generate", "Generate a scene suite from a master seed");
    struct Opts {
        std::uint64_t seed = kDefaultMasterSeed;
        int count = kDefaultSuiteSize;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    gen->add_option("--seed", o->seed, "Master seed");
    gen->add_option("--count", o->count, "Number of scenes");
    gen->add_option("--out", o->out, "Output JSON (default: stdout)");
    return [o] {
        const auto scenes = generate_scene_suite(o->seed, o->count);
        if (o->out.empty())
            std::cout << suite_to_json(scenes, o->seed).dump(2) << '\n';
        else
            save_scene_suite(o->out, scenes, o->seed);
        return 0;
    };
}

} // namespace embc::cli
