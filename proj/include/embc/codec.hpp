#pragma once

#include "embc/channel_budget.hpp"
#include "embc/image.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace embc {

struct CodecParams {
    int quality = 100;           // [1, 100]
    int resolution_divisor = 1;  // one of 1, 2, 4, 8

    friend bool operator==(const CodecParams&, const CodecParams&) = default;
};

inline constexpr int kResolutionLadder[] = {1, 2, 4, 8};
inline constexpr int kMinQuality = 1;
inline constexpr int kMaxQuality = 100;

// Container layout (little-endian):
//   "EMBC" | version u8 | codec u8 | orig_h u16 | orig_w u16 | enc_h u16 | enc_w u16
//   | quality u8 | payload_len u32 | payload
struct BitstreamHeader {
    std::uint8_t codec_wire_id = 0;
    std::uint16_t original_height = 0;
    std::uint16_t original_width = 0;
    std::uint16_t encoded_height = 0;
    std::uint16_t encoded_width = 0;
    std::uint8_t quality = 0;

    friend bool operator==(const BitstreamHeader&, const BitstreamHeader&) = default;
};

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 19;

struct Bitstream {
    BitstreamHeader header;
    std::vector<std::uint8_t> payload;

    std::size_t container_size() const noexcept { return kContainerHeaderBytes + payload.size(); }
    std::vector<std::uint8_t> serialize() const;
    static Bitstream parse(std::span<const std::uint8_t> bytes);

    friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

struct TranscodeResult {
    RasterImage decoded;   // always at the input's dimensions
    double achieved_bpp = 0.0;
    CodecParams chosen;
    std::size_t payload_bytes = 0; // bytes charged against the budget
};

// Codec plug-in surface. `encode` produces a payload for an image already at
// its encoded resolution; `decode` inverts it given the encoded dimensions
// and the quality recorded in the container header.
using EncoderFn = std::function<std::vector<std::uint8_t>(const RasterImage&, int quality)>;
using DecoderFn =
    std::function<RasterImage(std::span<const std::uint8_t>, int width, int height, int quality)>;
// Optional: binds an image once so repeated quality probes can share analysis.
using PreparedEncoderFn = std::function<std::vector<std::uint8_t>(int quality)>;
using PrepareFn = std::function<PreparedEncoderFn(const RasterImage&)>;

struct CodecDescriptor {
    std::string id;
    EncoderFn encode;
    DecoderFn decode;
    PrepareFn prepare;       // may be empty
    bool reference = false;  // lossless baseline: bypasses the budget, charged at 24 bpp
    std::uint8_t wire_id = 0; // assigned at registration
};

inline constexpr std::string_view kNativeCodecId = "dct";
inline constexpr std::string_view kIdentityCodecId = "identity";

// Registry operations are thread-safe. `dct` and `identity` are built in.
void register_codec(std::string id, EncoderFn encoder, DecoderFn decoder);
void register_codec(CodecDescriptor descriptor);
const CodecDescriptor& codec_by_id(std::string_view id);
const CodecDescriptor& codec_by_wire_id(std::uint8_t wire_id);
bool codec_registered(std::string_view id);
std::vector<std::string> registered_codec_ids();

Bitstream encode(const RasterImage& image, int quality, int resolution_divisor = 1,
                 std::string_view codec_id = kNativeCodecId);
RasterImage decode(const Bitstream& bitstream);

RasterImage downsample(const RasterImage& image, int divisor);
RasterImage upsample_bilinear(const RasterImage& image, int width, int height);

double measured_bpp(std::size_t payload_bytes, int height, int width);

TranscodeResult transcode_under_budget(const RasterImage& image, BppBudget budget,
                                       std::string_view codec_id = kNativeCodecId);

namespace dct {

// Quantizer steps in natural (row-major) order.
std::array<std::uint16_t, 64> quant_table(int quality, bool chroma);

std::vector<std::uint8_t> encode_payload(const RasterImage& image, int quality);
RasterImage decode_payload(std::span<const std::uint8_t> payload, int width, int height, int quality);
PreparedEncoderFn prepare(const RasterImage& image);

} // namespace dct

} // namespace embc
