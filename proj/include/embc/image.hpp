#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace embc {

using Rgb = std::array<std::uint8_t, 3>;

// Row-major interleaved 8-bit RGB frame.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, Rgb fill = {0, 0, 0});
    RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return width_ == 0 || height_ == 0; }

    std::uint8_t* pixel(int x, int y) noexcept {
        return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }
    const std::uint8_t* pixel(int x, int y) const noexcept {
        return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }
    void set(int x, int y, Rgb c) noexcept {
        auto* p = pixel(x, y);
        p[0] = c[0];
        p[1] = c[1];
        p[2] = c[2];
    }
    Rgb get(int x, int y) const noexcept {
        const auto* p = pixel(x, y);
        return {p[0], p[1], p[2]};
    }

    std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }
    std::span<std::uint8_t> bytes() noexcept { return pixels_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Full-range BT.601 (JFIF) conversions on real-valued samples.
inline double luma601(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }
inline double cb601(double r, double g, double b) { return 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b; }
inline double cr601(double r, double g, double b) { return 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b; }

// Saturating round-half-up.
inline std::uint8_t clamp_to_byte(double v) noexcept {
    if (!(v > 0.0))
        return 0;
    if (v >= 255.0)
        return 255;
    return static_cast<std::uint8_t>(v + 0.5);
}

std::vector<double> luma_plane(const RasterImage& image);

// Binary PPM (P6, maxval 255).
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RasterImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_ppm(const RasterImage& image);
RasterImage decode_ppm(std::span<const std::uint8_t> data);

} // namespace embc
