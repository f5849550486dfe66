#include <doctest.h>

#include "support/fixtures.hpp"

#include "embc/codec.hpp"
#include "embc/image.hpp"
#include "embc/records_json.hpp"
#include "embc/scene_suite.hpp"

#include <cstdio>
#include <sstream>
#include <sys/wait.h>

using namespace embc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path p = [] {
        const fs::path d = fs::temp_directory_path() / "embc_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run embc_cli(const std::string& args) {
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string("\"") + EMBC_BINARY + "\" " + args + " 2>\"" + err.string() + "\"";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p))
        r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

nlohmann::json error_of(const Run& r) { return nlohmann::json::parse(r.err); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help") {
    const auto v = embc_cli("--version");
    CHECK(v.code == 0);
    CHECK(v.out == "embc 1.0.0 (calibration embc-calib-1)\n");
    const auto h = embc_cli("--help");
    CHECK(h.code == 0);
    CHECK(h.out.find("sweep") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with a json error line") {
    for (const char* args : {"", "frobnicate", "budget --agents", "transcode --bpp 0.1", "budget --snr-db abc"}) {
        CAPTURE(args);
        const auto r = embc_cli(args);
        CHECK(r.code == 2);
        CHECK(error_of(r)["error"]["kind"] == "usage");
    }
}

TEST_CASE("budget lists the presets") {
    const auto r = embc_cli("budget");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("scenario,agents,snr_db,bps,bpp,bpp_exact\n", 0) == 0);
    CHECK(r.out.find("ideal,") != std::string::npos);
    const auto one = embc_cli("budget --scenario ideal");
    REQUIRE(one.code == 0);
    CHECK(one.out.find(",0.137,0.136") != std::string::npos);
    const auto custom = embc_cli("budget --scenario ideal --snr-db 25 --agents 10");
    CHECK(custom.out.find(",0.114,0.114") != std::string::npos);
}

TEST_CASE("lookup and parameter errors map to exit codes") {
    const auto unknown = embc_cli("budget --scenario moon");
    CHECK(unknown.code == 3);
    CHECK(error_of(unknown)["error"]["kind"] == "lookup");
    const auto bad = embc_cli("budget --scenario ideal --agents 0");
    CHECK(bad.code == 1);
    CHECK(error_of(bad)["error"]["kind"] == "parameter");
    const auto missing = embc_cli("sweep --config " + q(workdir() / "none.json"));
    CHECK(missing.code == 1);
    CHECK(error_of(missing)["error"]["kind"] == "io");
    const fs::path cfg = workdir() / "lookup.json";
    std::ofstream(cfg) << R"({"codecs": ["dct"], "profiles": ["fast"], "scene_count": 1})";
    const auto codec = embc_cli("run --config " + q(cfg) + " --codec nope --out " + q(workdir() / "lookup"));
    CHECK(codec.code == 3);
    CHECK(error_of(codec)["error"]["kind"] == "lookup");
}

TEST_CASE("render then transcode") {
    const fs::path frame = workdir() / "frame.ppm";
    const auto r = embc_cli("render --object Milk --table Cherry --background Dark --task push --seed 3 --out " +
                            q(frame));
    REQUIRE(r.code == 0);
    const RasterImage img = read_ppm(frame);
    CHECK(img == render(init_scene({ObjectId::milk, TableId::cherry, BackgroundId::dark, Task::push, 3}),
                        View::third_person));

    const fs::path dec = workdir() / "dec.ppm";
    const fs::path bits = workdir() / "frame.embc";
    const auto t = embc_cli("transcode --in " + q(frame) + " --bpp 0.03 --out " + q(dec) + " --bitstream " + q(bits));
    REQUIRE(t.code == 0);
    const auto rep = nlohmann::json::parse(t.out);
    const auto direct = transcode_under_budget(img, {0.03});
    CHECK(rep["quality"] == direct.chosen.quality);
    CHECK(rep["resolution_divisor"] == direct.chosen.resolution_divisor);
    CHECK(rep["achieved_bpp"].get<double>() <= 0.03);
    CHECK(read_ppm(dec) == direct.decoded);
    CHECK(fs::exists(dec.string() + ".json"));
    const std::string raw = slurp(bits);
    const auto bs = Bitstream::parse(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
    CHECK(decode(bs) == direct.decoded);

    const auto inf = embc_cli("transcode --in " + q(frame) + " --bpp 0.0001 --out " + q(dec));
    CHECK(inf.code == 1);
    CHECK(error_of(inf)["error"]["kind"] == "infeasible_budget");

    const auto badname = embc_cli("render --object Banana --out " + q(frame));
    CHECK(badname.code == 3);
}

TEST_CASE("scenes generate matches the library") {
    const fs::path out = workdir() / "suite.json";
    const auto r = embc_cli("scenes generate --seed 9 --count 12 --out " + q(out));
    REQUIRE(r.code == 0);
    CHECK(load_scene_suite(out) == generate_scene_suite(9, 12));
    const auto idx = embc_cli("render --suite " + q(out) + " --index 4 --view first_person --out " +
                              q(workdir() / "fp.ppm"));
    CHECK(idx.code == 0);
    CHECK(read_ppm(workdir() / "fp.ppm") == render(init_scene(generate_scene_suite(9, 12)[4]), View::first_person));
}

TEST_CASE("sweep, run and analyze") {
    const fs::path cfg = workdir() / "cfg.json";
    std::ofstream(cfg) << R"({"codecs": ["identity", "dct"], "profiles": ["fast"], "budgets": [0.1, 0.03],
                              "scene_count": 2, "record_steps": false})";
    const fs::path out = workdir() / "sweep";
    const auto s = embc_cli("sweep --quiet --config " + q(cfg) + " --out " + q(out));
    REQUIRE(s.code == 0);
    CHECK(s.out == slurp(out / "summary.csv"));
    const auto result = read_results_json(out / "results.json");
    CHECK(result.cells.size() == 4);
    CHECK(fs::exists(out / "run_meta.json"));

    const fs::path one = workdir() / "run";
    const auto r = embc_cli("run --quiet --config " + q(cfg) + " --codec dct --bpp 0.06 --scenes 1 --out " + q(one));
    REQUIRE(r.code == 0);
    const auto single = read_results_json(one / "results.json");
    REQUIRE(single.cells.size() == 1);
    CHECK(single.cells[0].key.codec == "dct");
    CHECK(single.cells[0].key.budget_bpp == 0.06);
    CHECK(single.cells[0].episodes.size() == 1);

    const fs::path rep = workdir() / "report";
    const auto a = embc_cli("analyze --results " + q(out / "results.json") + " --out " + q(rep));
    REQUIRE(a.code == 0);
    CHECK(fs::exists(rep / "degradation.csv"));
    CHECK(fs::exists(rep / "step_wasserstein.csv"));

    std::ofstream(workdir() / "bad.json") << R"({"codecs": ["dct"], "profiles": ["fast"], "colour": 1})";
    const auto bad = embc_cli("sweep --config " + q(workdir() / "bad.json"));
    CHECK(bad.code == 3);
    CHECK(error_of(bad)["error"]["kind"] == "schema");
}

}
