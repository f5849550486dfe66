#pragma once

#include "embc/image.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace embc {

// Spearman rank correlation, average ranks for ties.
double srcc(std::span<const double> x, std::span<const double> y);
// Pearson linear correlation (single-pass co-moment accumulation).
double plcc(std::span<const double> x, std::span<const double> y);

// Fractional (average) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

// W1 between empirical distributions. With normalize, samples are divided by
// the 250-step cap first so step distributions compare on [0, 1].
double wasserstein_1d(std::span<const double> a, std::span<const double> b, bool normalize = false);

enum class Orientation { higher_better, lower_better };

struct DegradationTriple {
    double value_gt = 0.0;
    double value_normal = 0.0;
    double value_ultralow = 0.0;
    Orientation orientation = Orientation::higher_better;
};

struct DegradationRatio {
    double d1_pct = 0.0; // GT -> Normal, relative to GT
    double d2_pct = 0.0; // Normal -> Ultra-low, relative to Normal
    double ratio = 0.0;  // d1 / d2
};

DegradationRatio degradation_ratio(const DegradationTriple& triple);

inline constexpr double kIdenticalPsnr = std::numeric_limits<double>::infinity();

double psnr(const RasterImage& a, const RasterImage& b);
// Mean SSIM over non-overlapping 8x8 luma windows.
double ssim(const RasterImage& a, const RasterImage& b);

struct FeatureVector {
    double luminance = 0.0;
    double contrast = 0.0;
    double chrominance = 0.0;
    double blur = 0.0;
    double spatial_information = 0.0;
};

FeatureVector low_level_features(const RasterImage& image);

// Sobel gradient magnitude of the luma plane, replicate borders.
std::vector<double> sobel_magnitude(const RasterImage& image);

} // namespace embc
