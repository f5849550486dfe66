// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "oracles/image_oracle.hpp"
#include "oracles/stats_oracle.hpp"
#include "oracles/transcode_oracle.hpp"
#include "support/fixtures.hpp"

#include "embc/analysis.hpp"
#include "embc/channel_budget.hpp"
#include "embc/codec.hpp"
#include "embc/error.hpp"
#include "embc/loop_runner.hpp"
#include "embc/policy.hpp"
#include "embc/scene_suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

using namespace embc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << detail << std::endl;
    failures += !pass;
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void criterion1() {
    bool ok = true;
    std::ostringstream d;
    for (const auto& s : scenarios()) {
        const double b = bpp_budget(s.model).target_bpp;
        ok = ok && std::fabs(b - s.published_bpp) <= 0.001;
        d << s.name << '=' << fmt(b) << ' ';
    }
    ChannelModel m;
    m.snr_db = 25;
    m.agent_count = 10;
    const double b25 = bpp_budget(m).target_bpp;
    m.snr_db = 15;
    m.agent_count = 50;
    const double b15 = bpp_budget(m).target_bpp;
    ok = ok && std::fabs(b25 - 0.114) <= 0.001 && b15 >= 0.013 - 0.001 && b15 <= 0.014 + 0.001;
    d << "25dB/10=" << fmt(b25) << " 15dB/50=" << fmt(b15);
    report(1, "budget fidelity", ok, d.str());
}

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = benchmark_bpp_grid();
    int violations = 0, infeasible = 0, checked = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const RasterImage img = fixture::seeded_frame(seed);
        for (const auto& b : grid) {
            try {
                const auto r = transcode_under_budget(img, b);
                ++checked;
                violations += r.achieved_bpp > b.target_bpp;
                violations += measured_bpp(r.payload_bytes, img.height(), img.width()) != r.achieved_bpp;
            } catch (const InfeasibleBudget& e) {
                ++infeasible;
                violations += e.min_achievable_bpp() <= b.target_bpp;
            }
        }
    }
    int agree = 0;
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t seed = 1000 + 37 * i;
        const auto b = grid[i % 4];
        const RasterImage img = fixture::seeded_frame(seed);
        const auto want = oracle::exhaustive_transcode(img, b.target_bpp);
        try {
            const auto got = transcode_under_budget(img, b);
            agree += want && want->divisor == got.chosen.resolution_divisor && want->quality == got.chosen.quality;
        } catch (const InfeasibleBudget&) {
            agree += !want;
        }
    }
    report(2, "transcoder compliance", violations == 0 && agree == 20,
           std::to_string(checked) + " transcodes, " + std::to_string(infeasible) + " infeasible, " +
               std::to_string(violations) + " violations; oracle agreement " + std::to_string(agree) + "/20; " +
               fmt(seconds_since(t0), 1) + " s");
}

void criterion3() {
    const auto g = fixture::goldens()["codec"];
    const RasterImage img = read_ppm(fixture::data_dir() / g["image"].get<std::string>());
    const auto bs = encode(img, 95, 1);
    const auto dec = decode(bs);
    const double p = oracle::direct_psnr(img, dec);
    bool frozen = fixture::fnv1a(bs.serialize()) == g["q95_container_fnv1a64"].get<std::string>() &&
                  fixture::fnv1a(dec.bytes()) == g["q95_decoded_fnv1a64"].get<std::string>() &&
                  std::fabs(p - g["q95_psnr_db"].get<double>()) < 1e-9;
    // the frozen image itself still renders from its scene
    frozen = frozen && img == render(init_scene(fixture::frozen_image_scene()), View::third_person);

    int exact = 0, total = 0;
    for (Rgb c : {Rgb{0, 0, 0}, Rgb{255, 255, 255}, Rgb{128, 128, 128}, Rgb{200, 30, 90}, Rgb{7, 250, 60}})
        for (auto [w, h] : {std::pair{256, 256}, std::pair{37, 19}, std::pair{8, 8}})
            for (int q : {1, 50, 100}) {
                const RasterImage flat(w, h, c);
                ++total;
                exact += decode(encode(flat, q, 1)) == flat;
            }
    report(3, "codec sanity", p >= 35.0 && exact == total && frozen,
           "q95 PSNR " + fmt(p, 2) + " dB; constant round trips " + std::to_string(exact) + "/" +
               std::to_string(total) + "; goldens " + (frozen ? "match" : "differ"));
}

struct Sweep {
    BenchmarkResult gt;  // identity, three profiles
    BenchmarkResult dct; // dct grid, accurate
};

Sweep closed_loop() {
    const auto scenes = load_scene_suite(fixture::repo_dir() / "data" / "scene_suite_default.json");
    const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    Sweep s;
    BenchmarkPlan plan;
    plan.scenes = scenes;
    plan.parallelism = threads;
    plan.options.record_steps = false;
    plan.options.record_quality = false;

    auto t0 = std::chrono::steady_clock::now();
    plan.budgets = {{0.1}};
    plan.codecs = {"identity"};
    plan.profiles = {default_profiles().begin(), default_profiles().end()};
    s.gt = run_benchmark(plan);
    std::cout << "  identity sweep: " << fmt(seconds_since(t0), 1) << " s" << std::endl;

    t0 = std::chrono::steady_clock::now();
    plan.budgets = benchmark_bpp_grid();
    plan.codecs = {"dct"};
    plan.profiles = {profile_by_name("accurate")};
    s.dct = run_benchmark(plan);
    std::cout << "  dct sweep: " << fmt(seconds_since(t0), 1) << " s" << std::endl;
    return s;
}

void criterion4(const Sweep& s) {
    const double a = success_rate(s.gt.cell({"identity", 0.1, "accurate"}));
    const double p = success_rate(s.gt.cell({"identity", 0.1, "popular"}));
    const double f = success_rate(s.gt.cell({"identity", 0.1, "fast"}));
    report(4, "closed-loop competence", a >= 0.9 && a >= p && p >= f,
           "GT SR accurate " + fmt(a, 2) + ", popular " + fmt(p, 2) + ", fast " + fmt(f, 2));
}

void criterion5(const Sweep& s) {
    std::ostringstream d;
    std::vector<double> sr;
    long frames = 0;
    int infeasible = 0;
    for (const auto& b : benchmark_bpp_grid()) {
        const auto& c = s.dct.cell({"dct", b.target_bpp, "accurate"});
        sr.push_back(success_rate(c));
        infeasible += count_outcome(c, Outcome::infeasible);
        for (const auto& e : c.episodes)
            frames += e.frames_transcoded;
        d << "SR@" << b.target_bpp << '=' << fmt(sr.back(), 2) << ' ';
    }
    // grid ascends: 0.015, 0.03, 0.06, 0.1
    const double drop = sr[3] > 0 ? (sr[3] - sr[2]) / sr[3] : 1.0;
    const bool ok = drop <= 0.15 && sr[0] <= 0.5 * sr[3];
    d << "; drop 0.10->0.06 " << fmt(100 * drop, 1) << "%, SR(0.015)/SR(0.10) " << fmt(sr[0] / sr[3], 3) << "; "
      << frames << " frames, " << infeasible << " infeasible";
    report(5, "robust-then-cliff", ok, d.str());
}

void criterion6(const Sweep& s) {
    bool ok = true;
    int successes = 0, shortest = kStepCap + 1, over_cap = 0, short_success = 0;
    for (const auto* r : {&s.gt, &s.dct})
        for (const auto& c : r->cells) {
            double total = 0;
            int n = 0;
            for (const auto& e : c.episodes) {
                over_cap += e.steps_used > kStepCap;
                if (e.outcome == Outcome::success) {
                    ++successes;
                    shortest = std::min(shortest, e.steps_used);
                    short_success += e.steps_used < 40;
                    total += e.steps_used;
                    ++n;
                } else if (e.outcome == Outcome::step_cap_exhausted) {
                    ok = ok && e.steps_used == kStepCap;
                    total += kStepCap;
                    ++n;
                }
            }
            if (n > 0)
                ok = ok && std::fabs(mean_step(c) - total / n) < 1e-12;
        }
    ok = ok && over_cap == 0 && short_success == 0;
    report(6, "step semantics", ok,
           std::to_string(successes) + " successes, shortest " + std::to_string(shortest) + " steps, " +
               std::to_string(short_success) + " under 40; failures counted at " + std::to_string(kStepCap) +
               "; " + std::to_string(over_cap) + " over cap");
}

void criterion7() {
    Rng rng(7007);
    int oracle_bad = 0, identity_bad = 0;
    auto draw = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v)
            x = rng.below(4) == 0 ? static_cast<double>(rng.below(5)) : rng.uniform(-10, 10);
        return v;
    };
    for (int t = 0; t < 300; ++t) {
        auto x = draw(3 + rng.below(50));
        auto y = draw(x.size());
        x[0] = -30;
        x[1] = 30;
        y[0] = 30;
        y[1] = -30;
        oracle_bad += std::fabs(plcc(x, y) - oracle::two_pass_pearson(x, y)) > 1e-12;
        oracle_bad += std::fabs(srcc(x, y) - oracle::rank_then_pearson(x, y)) > 1e-9;
        const auto b = draw(1 + rng.below(50));
        oracle_bad += std::fabs(wasserstein_1d(x, b) - oracle::cdf_wasserstein(x, b)) > 1e-9;
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ref = fixture::seeded_frame(seed);
        const auto dec = transcode_under_budget(ref, {seed % 2 ? 0.03 : 0.1}).decoded;
        oracle_bad += std::fabs(psnr(ref, dec) - oracle::direct_psnr(ref, dec)) > 1e-9;
        oracle_bad += std::fabs(ssim(ref, dec) - oracle::naive_ssim(ref, dec)) > 1e-9;
    }

    auto map = [](const std::vector<double>& v, auto f) {
        std::vector<double> o(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            o[i] = f(v[i]);
        return o;
    };
    for (int t = 0; t < 1000; ++t) {
        auto x = draw(3 + rng.below(40));
        auto y = draw(x.size());
        x[0] = -30;
        x[1] = 30;
        y[0] = 30;
        y[1] = -30;
        const double c = rng.uniform(-50, 50);
        const double a = rng.uniform(0.1, 20);
        // symmetry
        identity_bad += std::fabs(srcc(x, y) - srcc(y, x)) > 1e-12;
        identity_bad += std::fabs(plcc(x, y) - plcc(y, x)) > 1e-12;
        identity_bad += std::fabs(wasserstein_1d(x, y) - wasserstein_1d(y, x)) > 1e-9;
        // translation
        const auto xs = map(x, [c](double v) { return v + c; });
        identity_bad += std::fabs(plcc(xs, y) - plcc(x, y)) > 1e-9;
        identity_bad += std::fabs(wasserstein_1d(x, xs) - std::fabs(c)) > 1e-9;
        // monotone invariance
        identity_bad += std::fabs(srcc(map(x, [](double v) { return std::exp(v / 8); }), y) - srcc(x, y)) > 1e-12;
        // affine invariance
        identity_bad += std::fabs(plcc(map(x, [&](double v) { return a * v + c; }), y) - plcc(x, y)) > 1e-9;
    }
    report(7, "statistics oracles", oracle_bad == 0 && identity_bad == 0,
           std::to_string(oracle_bad) + " oracle mismatches over 940 checks; " + std::to_string(identity_bad) +
               " identity failures over 7000 checks");
}

void criterion8() {
    const double gt = 0.90;
    const double normal = gt * (1 - 0.614);
    const double ultra = normal * (1 - 0.196);
    const auto r = degradation_ratio({gt, normal, ultra, Orientation::higher_better});
    report(8, "degradation-ratio arithmetic",
           std::fabs(r.d1_pct - 61.4) < 1e-9 && std::fabs(r.d2_pct - 19.6) < 1e-9 && fmt(r.ratio, 2) == "3.13",
           "d1 " + fmt(r.d1_pct, 1) + "%, d2 " + fmt(r.d2_pct, 1) + "%, ratio " + fmt(r.ratio, 3));
}

void criterion9() {
    const fs::path dir = fs::temp_directory_path() / "embc_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"codecs": ["identity", "dct"], "profiles": ["accurate", "fast"],
                              "budgets": [0.1, 0.015], "scene_count": 4, "parallelism": 2})";
    auto sweep = [&](const char* name) {
        const std::string cmd = std::string("\"") + EMBC_BINARY + "\" sweep --quiet --config \"" + cfg.string() +
                                "\" --out \"" + (dir / name).string() + "\" > /dev/null";
        return std::system(cmd.c_str());
    };
    const int a = sweep("a");
    const int b = sweep("b");
    const std::string sa = slurp(dir / "a" / "summary.csv"), sb = slurp(dir / "b" / "summary.csv");
    const std::string ra = slurp(dir / "a" / "results.json"), rb = slurp(dir / "b" / "results.json");
    const bool ok = a == 0 && b == 0 && !sa.empty() && !ra.empty() && sa == sb && ra == rb;
    report(9, "end-to-end determinism", ok,
           "summary.csv " + std::string(sa == sb ? "identical" : "differs") + " (" + std::to_string(sa.size()) +
               " B), results.json " + (ra == rb ? "identical" : "differs") + " (" + std::to_string(ra.size()) +
               " B)");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        criterion1();
        criterion2();
        criterion3();
        const Sweep s = closed_loop();
        criterion4(s);
        criterion5(s);
        criterion6(s);
        criterion7();
        criterion8();
        criterion9();
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << "total " << fmt(seconds_since(t0), 1) << " s, " << failures << " failing" << std::endl;
    return failures == 0 ? 0 : 1;
}
