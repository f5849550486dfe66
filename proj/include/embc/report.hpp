#pragma once

#include "embc/loop_runner.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace embc {

enum class Metric { success_rate, step };

struct CurvePoint {
    double bpp = 0.0;
    std::optional<double> value; // empty marks a missing cell (a gap, never interpolated)
};

struct RatePerformanceCurve {
    std::string codec;
    std::string profile;
    std::vector<CurvePoint> points; // ascending bpp over every budget in the result
};

std::vector<RatePerformanceCurve> rate_performance_curve(const BenchmarkResult& result, Metric metric);

// Writes correlation, degradation, rate-performance, feature and step
// Wasserstein CSVs into `dir`. Returns the file names written.
std::vector<std::string> write_report(const BenchmarkResult& result, const std::filesystem::path& dir);

} // namespace embc
