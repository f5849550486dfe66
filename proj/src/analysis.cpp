#include "embc/analysis.hpp"

#include "embc/environment.hpp"
#include "embc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace embc {

namespace {

void check_pairs(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        fail(ErrorKind::parameter, "correlation inputs must have equal length");
    if (x.size() < 2)
        fail(ErrorKind::parameter, "correlation needs at least two observations");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            fail(ErrorKind::parameter, "correlation inputs must be finite");
}

} // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double plcc(std::span<const double> x, std::span<const double> y) {
    check_pairs(x, y);
    double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x[i] - mx);
        syy += dy * (y[i] - my);
        sxy += dx * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        fail(ErrorKind::undefined_statistic, "correlation undefined for zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double srcc(std::span<const double> x, std::span<const double> y) {
    check_pairs(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    try {
        return plcc(rx, ry);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::undefined_statistic)
            fail(ErrorKind::undefined_statistic, "rank correlation undefined for zero rank variance");
        throw;
    }
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b, bool normalize) {
    if (a.empty() || b.empty())
        fail(ErrorKind::parameter, "wasserstein_1d needs non-empty samples");
    const double scale = normalize ? 1.0 / kStepCap : 1.0;
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    for (double v : sa)
        if (!std::isfinite(v))
            fail(ErrorKind::parameter, "wasserstein_1d samples must be finite");
    for (double v : sb)
        if (!std::isfinite(v))
            fail(ErrorKind::parameter, "wasserstein_1d samples must be finite");
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    // Integrate |Qa(p) - Qb(p)| over p in [0, 1]; both quantile functions are
    // step functions with breakpoints at i/na and j/nb.
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double p = 0.0, total = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double next_a = (i + 1) / na, next_b = (j + 1) / nb;
        const double next = std::min(next_a, next_b);
        total += (next - p) * std::fabs(sa[i] - sb[j]);
        p = next;
        if (next_a <= next)
            ++i;
        if (next_b <= next)
            ++j;
    }
    return total * scale;
}

DegradationRatio degradation_ratio(const DegradationTriple& t) {
    if (t.value_gt == 0.0)
        fail(ErrorKind::undefined_statistic, "degradation ratio: GT value is zero");
    if (t.value_normal == 0.0)
        fail(ErrorKind::undefined_statistic, "degradation ratio: Normal value is zero");
    DegradationRatio r;
    r.d1_pct = std::fabs(t.value_gt - t.value_normal) / std::fabs(t.value_gt) * 100.0;
    r.d2_pct = std::fabs(t.value_normal - t.value_ultralow) / std::fabs(t.value_normal) * 100.0;
    if (r.d1_pct == 0.0) {
        r.ratio = 0.0;
        return r;
    }
    if (r.d2_pct == 0.0)
        fail(ErrorKind::undefined_statistic, "degradation ratio: Normal to Ultra-low drop is zero");
    r.ratio = r.d1_pct / r.d2_pct;
    return r;
}

namespace {
void check_same_dims(const RasterImage& a, const RasterImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        fail(ErrorKind::parameter, "image dimensions differ");
}
} // namespace

double psnr(const RasterImage& a, const RasterImage& b) {
    check_same_dims(a, b);
    auto pa = a.bytes();
    auto pb = b.bytes();
    std::uint64_t sse = 0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const int d = static_cast<int>(pa[i]) - static_cast<int>(pb[i]);
        sse += static_cast<std::uint64_t>(d * d);
    }
    if (sse == 0)
        return kIdenticalPsnr;
    const double mse = static_cast<double>(sse) / static_cast<double>(pa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const RasterImage& a, const RasterImage& b) {
    check_same_dims(a, b);
    if (a.width() < 8 || a.height() < 8)
        fail(ErrorKind::parameter, "ssim needs images of at least 8x8");
    constexpr double c1 = (0.01 * 255) * (0.01 * 255);
    constexpr double c2 = (0.03 * 255) * (0.03 * 255);
    const auto ya = luma_plane(a);
    const auto yb = luma_plane(b);
    const int w = a.width();
    const int wx = a.width() / 8, wy = a.height() / 8;
    double total = 0.0;
    for (int by = 0; by < wy; ++by)
        for (int bx = 0; bx < wx; ++bx) {
            double ma = 0.0, mb = 0.0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const std::size_t i = static_cast<std::size_t>(by * 8 + y) * w + bx * 8 + x;
                    ma += ya[i];
                    mb += yb[i];
                }
            ma /= 64.0;
            mb /= 64.0;
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const std::size_t i = static_cast<std::size_t>(by * 8 + y) * w + bx * 8 + x;
                    va += (ya[i] - ma) * (ya[i] - ma);
                    vb += (yb[i] - mb) * (yb[i] - mb);
                    cov += (ya[i] - ma) * (yb[i] - mb);
                }
            va /= 64.0;
            vb /= 64.0;
            cov /= 64.0;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    return total / (static_cast<double>(wx) * wy);
}

std::vector<double> sobel_magnitude(const RasterImage& image) {
    const auto y = luma_plane(image);
    const int w = image.width(), h = image.height();
    auto at = [&](int x, int yy) {
        x = std::clamp(x, 0, w - 1);
        yy = std::clamp(yy, 0, h - 1);
        return y[static_cast<std::size_t>(yy) * w + x];
    };
    std::vector<double> mag(y.size());
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const double gx = (at(c + 1, r - 1) + 2 * at(c + 1, r) + at(c + 1, r + 1)) -
                              (at(c - 1, r - 1) + 2 * at(c - 1, r) + at(c - 1, r + 1));
            const double gy = (at(c - 1, r + 1) + 2 * at(c, r + 1) + at(c + 1, r + 1)) -
                              (at(c - 1, r - 1) + 2 * at(c, r - 1) + at(c + 1, r - 1));
            mag[static_cast<std::size_t>(r) * w + c] = std::hypot(gx, gy);
        }
    return mag;
}

namespace {
std::pair<double, double> mean_std(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return {m, std::sqrt(s / static_cast<double>(v.size()))};
}
} // namespace

FeatureVector low_level_features(const RasterImage& image) {
    FeatureVector f;
    if (image.empty())
        return f;
    const auto luma = luma_plane(image);
    std::tie(f.luminance, f.contrast) = mean_std(luma);
    auto px = image.bytes();
    double chroma = 0.0;
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        const double r = px[3 * i], g = px[3 * i + 1], b = px[3 * i + 2];
        chroma += std::hypot(cb601(r, g, b) - 128.0, cr601(r, g, b) - 128.0);
    }
    f.chrominance = chroma / static_cast<double>(image.pixel_count());
    std::tie(f.blur, f.spatial_information) = mean_std(sobel_magnitude(image));
    // Clamp away -0 and sub-ulp noise on flat inputs.
    f.luminance = std::clamp(f.luminance, 0.0, 255.0);
    return f;
}

} // namespace embc
