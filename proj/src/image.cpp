#include "embc/image.hpp"

#include "embc/error.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace embc {

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 1 || height < 1)
        fail(ErrorKind::parameter, "image dimensions must be positive");
    pixels_.resize(pixel_count() * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
        pixels_[i] = fill[0];
        pixels_[i + 1] = fill[1];
        pixels_[i + 2] = fill[2];
    }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1)
        fail(ErrorKind::parameter, "image dimensions must be positive");
    if (pixels_.size() != pixel_count() * 3)
        fail(ErrorKind::parameter, "pixel buffer length must equal width*height*3");
}

std::vector<double> luma_plane(const RasterImage& image) {
    std::vector<double> y(image.pixel_count());
    auto px = image.bytes();
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = luma601(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
    return y;
}

std::vector<std::uint8_t> encode_ppm(const RasterImage& image) {
    std::string header = "P6\n" + std::to_string(image.width()) + " " +
                         std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.bytes().begin(), image.bytes().end());
    return out;
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::span<const std::uint8_t> data, std::size_t& pos) {
    while (pos < data.size()) {
        if (data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n')
                ++pos;
        } else if (std::isspace(data[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < data.size() && !std::isspace(data[pos]) && data[pos] != '#')
        tok.push_back(static_cast<char>(data[pos++]));
    return tok;
}

int parse_positive(const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used == tok.size() && v > 0)
            return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::decode, std::string("ppm: invalid ") + what);
}

} // namespace

RasterImage decode_ppm(std::span<const std::uint8_t> data) {
    std::size_t pos = 0;
    if (next_token(data, pos) != "P6")
        fail(ErrorKind::decode, "ppm: missing P6 magic");
    int w = parse_positive(next_token(data, pos), "width");
    int h = parse_positive(next_token(data, pos), "height");
    if (parse_positive(next_token(data, pos), "maxval") != 255)
        fail(ErrorKind::decode, "ppm: only maxval 255 is supported");
    ++pos; // single whitespace after maxval
    std::size_t need = static_cast<std::size_t>(w) * h * 3;
    if (pos > data.size() || data.size() - pos < need)
        fail(ErrorKind::decode, "ppm: truncated pixel data");
    std::vector<std::uint8_t> px(data.begin() + static_cast<std::ptrdiff_t>(pos),
                                 data.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return RasterImage(w, h, std::move(px));
}

RasterImage read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::io, "cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_ppm(data);
}

void write_ppm(const RasterImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorKind::io, "cannot write " + path.string());
    auto bytes = encode_ppm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace embc
