#include "embc/records_json.hpp"

#include "embc/error.hpp"
#include "embc/scene_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace embc {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        fail(ErrorKind::schema, "vector must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json features_to_json(const FeatureVector& f) {
    return json{{"luminance", f.luminance},
                {"contrast", f.contrast},
                {"chrominance", f.chrominance},
                {"blur", f.blur},
                {"spatial_information", f.spatial_information}};
}

FeatureVector features_from_json(const json& j) {
    return {j.at("luminance").get<double>(), j.at("contrast").get<double>(), j.at("chrominance").get<double>(),
            j.at("blur").get<double>(), j.at("spatial_information").get<double>()};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

template <class F>
auto schema_guard(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(ErrorKind::schema, std::string(what) + ": " + e.what());
    }
}

} // namespace

json step_to_json(const StepRecord& s) {
    json j{{"step", s.step_index},
           {"quality", s.chosen.quality},
           {"divisor", s.chosen.resolution_divisor},
           {"achieved_bpp", s.achieved_bpp},
           {"bytes", s.payload_bytes},
           {"detected", s.perception.detected},
           {"centroid", json::array({s.perception.centroid_u, s.perception.centroid_v})},
           {"blob_area_px", s.perception.blob_area_px},
           {"confidence", s.perception.confidence},
           {"phase", to_string(s.phase)},
           {"delta", vec_to_json(s.action.delta)},
           {"gripper_command", to_string(s.action.gripper)},
           {"object", vec_to_json(s.object_position)},
           {"gripper", vec_to_json(s.gripper)},
           {"input_is_decoded", s.input_is_decoded},
           {"psnr", optional_number(s.psnr)},
           {"ssim", s.ssim},
           {"features", features_to_json(s.features)}};
    if (s.first_person_bpp)
        j["first_person_bpp"] = *s.first_person_bpp;
    return j;
}

namespace {
Phase parse_phase(const std::string& name) {
    for (Phase p : {Phase::approach, Phase::align, Phase::engage, Phase::lift_or_push, Phase::done})
        if (to_string(p) == name)
            return p;
    fail(ErrorKind::schema, "unknown phase '" + name + "'");
}
} // namespace

StepRecord step_from_json(const json& j) {
    return schema_guard("step record", [&] {
        StepRecord s;
        s.step_index = j.at("step").get<int>();
        s.chosen = {j.at("quality").get<int>(), j.at("divisor").get<int>()};
        s.achieved_bpp = j.at("achieved_bpp").get<double>();
        s.payload_bytes = j.at("bytes").get<std::size_t>();
        s.perception.detected = j.at("detected").get<bool>();
        s.perception.centroid_u = j.at("centroid").at(0).get<double>();
        s.perception.centroid_v = j.at("centroid").at(1).get<double>();
        s.perception.blob_area_px = j.at("blob_area_px").get<int>();
        s.perception.confidence = j.at("confidence").get<double>();
        s.phase = parse_phase(j.at("phase").get<std::string>());
        s.action.delta = vec_from_json(j.at("delta"));
        s.action.gripper = parse_gripper_command(j.at("gripper_command").get<std::string>());
        s.object_position = vec_from_json(j.at("object"));
        s.gripper = vec_from_json(j.at("gripper"));
        s.input_is_decoded = j.at("input_is_decoded").get<bool>();
        s.psnr = optional_from(j.at("psnr"));
        s.ssim = j.at("ssim").get<double>();
        s.features = features_from_json(j.at("features"));
        if (j.contains("first_person_bpp"))
            s.first_person_bpp = j["first_person_bpp"].get<double>();
        return s;
    });
}

json episode_to_json(const EpisodeRecord& e) {
    json steps = json::array();
    for (const auto& s : e.steps)
        steps.push_back(step_to_json(s));
    json j{{"scene", scene_to_json(e.scene)},
           {"budget_bpp", e.budget.target_bpp},
           {"codec", e.codec},
           {"profile", e.profile},
           {"outcome", to_string(e.outcome)},
           {"steps_used", e.steps_used},
           {"frames_transcoded", e.frames_transcoded},
           {"mean_achieved_bpp", e.mean_achieved_bpp},
           {"max_achieved_bpp", e.max_achieved_bpp},
           {"mean_confidence", e.mean_confidence},
           {"mean_blob_area", e.mean_blob_area},
           {"mean_psnr", optional_number(e.mean_psnr)},
           {"mean_ssim", e.mean_ssim},
           {"mean_features", features_to_json(e.mean_features)},
           {"steps", steps}};
    if (e.outcome == Outcome::infeasible)
        j["min_achievable_bpp"] = e.min_achievable_bpp;
    if (!e.error_message.empty())
        j["error"] = e.error_message;
    return j;
}

EpisodeRecord episode_from_json(const json& j) {
    return schema_guard("episode record", [&] {
        EpisodeRecord e;
        e.scene = scene_from_json(j.at("scene"));
        e.budget = {j.at("budget_bpp").get<double>()};
        e.codec = j.at("codec").get<std::string>();
        e.profile = j.at("profile").get<std::string>();
        e.outcome = parse_outcome(j.at("outcome").get<std::string>());
        e.steps_used = j.at("steps_used").get<int>();
        e.frames_transcoded = j.at("frames_transcoded").get<int>();
        e.mean_achieved_bpp = j.at("mean_achieved_bpp").get<double>();
        e.max_achieved_bpp = j.at("max_achieved_bpp").get<double>();
        e.mean_confidence = j.at("mean_confidence").get<double>();
        e.mean_blob_area = j.at("mean_blob_area").get<double>();
        e.mean_psnr = optional_from(j.at("mean_psnr"));
        e.mean_ssim = j.at("mean_ssim").get<double>();
        e.mean_features = features_from_json(j.at("mean_features"));
        if (j.contains("min_achievable_bpp"))
            e.min_achievable_bpp = j["min_achievable_bpp"].get<double>();
        if (j.contains("error"))
            e.error_message = j["error"].get<std::string>();
        for (const auto& s : j.at("steps"))
            e.steps.push_back(step_from_json(s));
        return e;
    });
}

json result_to_json(const BenchmarkResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json eps = json::array();
        for (const auto& e : c.episodes)
            eps.push_back(episode_to_json(e));
        cells.push_back(json{{"codec", c.key.codec},
                             {"budget_bpp", c.key.budget_bpp},
                             {"profile", c.key.profile},
                             {"episodes", eps}});
    }
    return json{{"format", "embc-results"}, {"version", 1}, {"cells", cells}};
}

BenchmarkResult result_from_json(const json& j) {
    return schema_guard("results document", [&] {
        if (j.value("format", "") != "embc-results")
            fail(ErrorKind::schema, "not an embc results document");
        BenchmarkResult r;
        for (const auto& c : j.at("cells")) {
            Cell cell;
            cell.key = {c.at("codec").get<std::string>(), c.at("budget_bpp").get<double>(),
                        c.at("profile").get<std::string>()};
            for (const auto& e : c.at("episodes"))
                cell.episodes.push_back(episode_from_json(e));
            r.cells.push_back(std::move(cell));
        }
        std::sort(r.cells.begin(), r.cells.end(), [](const Cell& a, const Cell& b) { return a.key < b.key; });
        return r;
    });
}

std::string format_number(double v, int precision) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    std::string s(buf);
    if (s == "-0." + std::string(precision, '0'))
        s.erase(0, 1);
    return s;
}

std::string summary_csv(const BenchmarkResult& r) {
    std::ostringstream out;
    out << "codec,budget_bpp,profile,episodes,valid,successes,infeasible,errors,success_rate,mean_step,"
           "mean_achieved_bpp\n";
    for (const auto& c : r.cells) {
        const int succ = count_outcome(c, Outcome::success);
        const int fail_cap = count_outcome(c, Outcome::step_cap_exhausted);
        const int valid = succ + fail_cap;
        out << c.key.codec << ',' << format_number(c.key.budget_bpp) << ',' << c.key.profile << ','
            << c.episodes.size() << ',' << valid << ',' << succ << ',' << count_outcome(c, Outcome::infeasible)
            << ',' << count_outcome(c, Outcome::error) << ',';
        if (valid > 0)
            out << format_number(success_rate(c)) << ',' << format_number(mean_step(c), 3);
        else
            out << ',';
        out << ',';
        bool frames = false;
        for (const auto& e : c.episodes)
            frames = frames || e.frames_transcoded > 0;
        if (frames)
            out << format_number(mean_achieved_bpp(c));
        out << '\n';
    }
    return out.str();
}

void write_results(const std::filesystem::path& dir, const BenchmarkResult& result) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "results.json");
        if (!out)
            fail(ErrorKind::io, "cannot write " + (dir / "results.json").string());
        out << result_to_json(result).dump() << '\n';
    }
    std::ofstream out(dir / "summary.csv");
    if (!out)
        fail(ErrorKind::io, "cannot write " + (dir / "summary.csv").string());
    out << summary_csv(result);
}

BenchmarkResult read_results_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::io, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail(ErrorKind::schema, path.string() + ": " + e.what());
    }
    return result_from_json(j);
}

} // namespace embc
