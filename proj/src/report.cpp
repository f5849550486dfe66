#include "embc/report.hpp"

#include "embc/analysis.hpp"
#include "embc/error.hpp"
#include "embc/records_json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace embc {

std::vector<RatePerformanceCurve> rate_performance_curve(const BenchmarkResult& result, Metric metric) {
    std::set<double> budgets;
    std::set<std::pair<std::string, std::string>> lines;
    for (const auto& c : result.cells) {
        budgets.insert(c.key.budget_bpp);
        lines.insert({c.key.codec, c.key.profile});
    }
    std::vector<RatePerformanceCurve> curves;
    for (const auto& [codec, profile] : lines) {
        RatePerformanceCurve curve{codec, profile, {}};
        for (double b : budgets) {
            CurvePoint p{b, std::nullopt};
            if (const Cell* cell = result.find({codec, b, profile})) {
                try {
                    p.value = metric == Metric::success_rate ? success_rate(*cell) : mean_step(*cell);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::undefined_statistic)
                        throw;
                }
            }
            curve.points.push_back(p);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorKind::io, "cannot write " + path.string());
    out << text;
}

std::string cell_label(const CellKey& k) { return k.codec + "@" + format_number(k.budget_bpp, 3) + "/" + k.profile; }

using Row = std::vector<double>;

struct Indicator {
    std::string name;
    std::function<std::optional<double>(const EpisodeRecord&, const StepRecord*)> get;
};

std::optional<double> value(double v) { return v; }

const std::vector<Indicator>& frame_indicators() {
    static const std::vector<Indicator> v = {
        {"bpp", [](auto&, auto* s) { return value(s->achieved_bpp); }},
        {"psnr", [](auto&, auto* s) { return s->psnr; }},
        {"ssim", [](auto&, auto* s) { return value(s->ssim); }},
        {"confidence", [](auto&, auto* s) { return value(s->perception.confidence); }},
        {"blob_area", [](auto&, auto* s) { return value(s->perception.blob_area_px); }},
        {"luminance", [](auto&, auto* s) { return value(s->features.luminance); }},
        {"contrast", [](auto&, auto* s) { return value(s->features.contrast); }},
        {"chrominance", [](auto&, auto* s) { return value(s->features.chrominance); }},
        {"blur", [](auto&, auto* s) { return value(s->features.blur); }},
        {"spatial_information", [](auto&, auto* s) { return value(s->features.spatial_information); }},
    };
    return v;
}

const std::vector<Indicator>& episode_indicators() {
    static const std::vector<Indicator> v = {
        {"bpp", [](auto& e, auto*) { return value(e.mean_achieved_bpp); }},
        {"psnr", [](auto& e, auto*) { return e.mean_psnr; }},
        {"ssim", [](auto& e, auto*) { return value(e.mean_ssim); }},
        {"confidence", [](auto& e, auto*) { return value(e.mean_confidence); }},
        {"success", [](auto& e, auto*) { return value(e.outcome == Outcome::success ? 1.0 : 0.0); }},
        {"step", [](auto& e, auto*) {
             return value(e.outcome == Outcome::success ? e.steps_used : static_cast<double>(kStepCap));
         }},
    };
    return v;
}

bool valid_episode(const EpisodeRecord& e) {
    return e.outcome == Outcome::success || e.outcome == Outcome::step_cap_exhausted;
}

// Pairwise-complete correlation matrix in long form.
std::string correlation_csv(const std::vector<Indicator>& inds, const std::vector<std::vector<std::optional<double>>>& obs) {
    std::ostringstream out;
    out << "method,indicator_a,indicator_b,n,value\n";
    for (const char* method : {"srcc", "plcc"})
        for (std::size_t a = 0; a < inds.size(); ++a)
            for (std::size_t b = 0; b < inds.size(); ++b) {
                std::vector<double> x, y;
                for (const auto& o : obs)
                    if (o[a] && o[b]) {
                        x.push_back(*o[a]);
                        y.push_back(*o[b]);
                    }
                out << method << ',' << inds[a].name << ',' << inds[b].name << ',' << x.size() << ',';
                try {
                    const double v = std::string(method) == "srcc" ? srcc(x, y) : plcc(x, y);
                    out << format_number(v);
                } catch (const Error&) {
                    // undefined: left empty
                }
                out << '\n';
            }
    return out.str();
}

std::string frame_correlation(const BenchmarkResult& r) {
    const auto& inds = frame_indicators();
    std::vector<std::vector<std::optional<double>>> obs;
    for (const auto& c : r.cells) {
        if (codec_registered(c.key.codec) && codec_by_id(c.key.codec).reference)
            continue;
        for (const auto& e : c.episodes)
            for (const auto& s : e.steps) {
                std::vector<std::optional<double>> row;
                for (const auto& i : inds)
                    row.push_back(i.get(e, &s));
                obs.push_back(std::move(row));
            }
    }
    return correlation_csv(inds, obs);
}

std::string episode_correlation(const BenchmarkResult& r) {
    const auto& inds = episode_indicators();
    std::vector<std::vector<std::optional<double>>> obs;
    for (const auto& c : r.cells)
        for (const auto& e : c.episodes) {
            if (!valid_episode(e))
                continue;
            std::vector<std::optional<double>> row;
            for (const auto& i : inds)
                row.push_back(i.get(e, nullptr));
            obs.push_back(std::move(row));
        }
    return correlation_csv(inds, obs);
}

double cell_mean(const Cell& c, const std::function<std::optional<double>(const EpisodeRecord&)>& f) {
    double total = 0.0;
    int n = 0;
    for (const auto& e : c.episodes) {
        if (!valid_episode(e))
            continue;
        if (auto v = f(e)) {
            total += *v;
            ++n;
        }
    }
    if (n == 0)
        return std::nan("");
    return total / n;
}

std::string degradation_csv(const BenchmarkResult& r) {
    std::set<double> budgets;
    for (const auto& c : r.cells)
        budgets.insert(c.key.budget_bpp);
    std::ostringstream out;
    out << "codec,profile,indicator,orientation,gt,normal,ultralow,d1_pct,d2_pct,ratio,note\n";
    if (budgets.empty())
        return out.str();
    const double normal = *budgets.rbegin();
    const double ultra = *budgets.begin();

    struct Ind {
        const char* name;
        Orientation orientation;
        std::function<double(const Cell&)> get;
    };
    const std::vector<Ind> inds = {
        {"psnr", Orientation::higher_better,
         [](const Cell& c) { return cell_mean(c, [](auto& e) { return e.mean_psnr; }); }},
        {"ssim", Orientation::higher_better,
         [](const Cell& c) { return cell_mean(c, [](auto& e) { return std::optional(e.mean_ssim); }); }},
        {"confidence", Orientation::higher_better,
         [](const Cell& c) { return cell_mean(c, [](auto& e) { return std::optional(e.mean_confidence); }); }},
        {"sr", Orientation::higher_better,
         [](const Cell& c) {
             try {
                 return success_rate(c);
             } catch (const Error&) {
                 return std::nan("");
             }
         }},
        {"step", Orientation::lower_better,
         [](const Cell& c) {
             try {
                 return mean_step(c);
             } catch (const Error&) {
                 return std::nan("");
             }
         }},
    };

    std::set<std::pair<std::string, std::string>> lines;
    std::vector<std::string> refs;
    for (const auto& c : r.cells) {
        const bool ref = codec_registered(c.key.codec) && codec_by_id(c.key.codec).reference;
        if (ref)
            refs.push_back(c.key.codec);
        else
            lines.insert({c.key.codec, c.key.profile});
    }
    for (const auto& [codec, profile] : lines) {
        const Cell* n = r.find({codec, normal, profile});
        const Cell* u = r.find({codec, ultra, profile});
        const Cell* gt = nullptr;
        for (const auto& ref : refs)
            for (double b : budgets)
                if (!gt)
                    gt = r.find({ref, b, profile});
        for (const auto& ind : inds) {
            out << codec << ',' << profile << ',' << ind.name << ','
                << (ind.orientation == Orientation::higher_better ? "higher_better" : "lower_better") << ',';
            // PSNR of the reference against itself is unbounded.
            const double vg = !gt ? std::nan("") : std::string(ind.name) == "psnr" ? std::nan("") : ind.get(*gt);
            const double vn = n ? ind.get(*n) : std::nan("");
            const double vu = u ? ind.get(*u) : std::nan("");
            auto cell = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
            out << cell(vg) << ',' << cell(vn) << ',' << cell(vu) << ',';
            std::string note;
            if (std::isnan(vg) || std::isnan(vn) || std::isnan(vu)) {
                note = !gt ? "no reference codec cell" : "stage value undefined";
                out << ",,,";
            } else {
                try {
                    const auto d = degradation_ratio({vg, vn, vu, ind.orientation});
                    out << format_number(d.d1_pct, 3) << ',' << format_number(d.d2_pct, 3) << ','
                        << format_number(d.ratio, 3) << ',';
                } catch (const Error& e) {
                    out << ",,,";
                    note = e.what();
                }
            }
            out << note << '\n';
        }
    }
    return out.str();
}

std::string curve_csv(const BenchmarkResult& r, Metric m) {
    std::ostringstream out;
    out << "codec,profile,bpp," << (m == Metric::success_rate ? "success_rate" : "mean_step") << ",status\n";
    for (const auto& c : rate_performance_curve(r, m))
        for (const auto& p : c.points)
            out << c.codec << ',' << c.profile << ',' << format_number(p.bpp) << ','
                << (p.value ? format_number(*p.value) : "") << ',' << (p.value ? "ok" : "gap") << '\n';
    return out.str();
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - i;
    return i + 1 < v.size() ? v[i] * (1 - f) + v[i + 1] * f : v[i];
}

std::string features_csv(const BenchmarkResult& r) {
    std::ostringstream out;
    out << "codec,budget_bpp,profile,feature,n,mean,std,p10,p50,p90\n";
    static const std::vector<std::pair<const char*, double FeatureVector::*>> feats = {
        {"luminance", &FeatureVector::luminance},
        {"contrast", &FeatureVector::contrast},
        {"chrominance", &FeatureVector::chrominance},
        {"blur", &FeatureVector::blur},
        {"spatial_information", &FeatureVector::spatial_information}};
    for (const auto& c : r.cells)
        for (const auto& [name, member] : feats) {
            std::vector<double> v;
            for (const auto& e : c.episodes) {
                if (!e.steps.empty()) {
                    for (const auto& s : e.steps)
                        v.push_back(s.features.*member);
                } else if (e.frames_transcoded > 0) {
                    v.push_back(e.mean_features.*member);
                }
            }
            out << c.key.codec << ',' << format_number(c.key.budget_bpp) << ',' << c.key.profile << ',' << name
                << ',' << v.size() << ',';
            if (v.empty()) {
                out << ",,,,\n";
                continue;
            }
            double m = 0.0;
            for (double x : v)
                m += x;
            m /= v.size();
            double s = 0.0;
            for (double x : v)
                s += (x - m) * (x - m);
            s = std::sqrt(s / v.size());
            out << format_number(m, 4) << ',' << format_number(s, 4) << ',' << format_number(quantile(v, 0.1), 4)
                << ',' << format_number(quantile(v, 0.5), 4) << ',' << format_number(quantile(v, 0.9), 4) << '\n';
        }
    return out.str();
}

std::string wasserstein_csv(const BenchmarkResult& r) {
    std::vector<std::pair<std::string, std::vector<double>>> dists;
    for (const auto& c : r.cells) {
        std::vector<double> steps;
        for (const auto& e : c.episodes)
            if (valid_episode(e))
                steps.push_back(e.outcome == Outcome::success ? e.steps_used : kStepCap);
        dists.push_back({cell_label(c.key), steps});
    }
    std::ostringstream out;
    out << "cell";
    for (const auto& d : dists)
        out << ',' << d.first;
    out << '\n';
    for (const auto& a : dists) {
        out << a.first;
        for (const auto& b : dists) {
            out << ',';
            if (!a.second.empty() && !b.second.empty())
                out << format_number(wasserstein_1d(a.second, b.second, true));
        }
        out << '\n';
    }
    return out.str();
}

} // namespace

std::vector<std::string> write_report(const BenchmarkResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> files = {
        {"correlation_frames.csv", frame_correlation(r)},
        {"correlation_episodes.csv", episode_correlation(r)},
        {"degradation.csv", degradation_csv(r)},
        {"rate_performance_sr.csv", curve_csv(r, Metric::success_rate)},
        {"rate_performance_step.csv", curve_csv(r, Metric::step)},
        {"features.csv", features_csv(r)},
        {"step_wasserstein.csv", wasserstein_csv(r)},
    };
    std::vector<std::string> names;
    for (const auto& [name, text] : files) {
        write_file(dir / name, text);
        names.push_back(name);
    }
    return names;
}

} // namespace embc
