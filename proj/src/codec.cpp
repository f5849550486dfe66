#include "embc/codec.hpp"
#include "embc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <mutex>
#include <limits>
#include <optional>

namespace embc {

// ---------------------------------------------------------------- container

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | b[at + i];
    return v;
}

} // namespace

std::vector<std::uint8_t> Bitstream::serialize() const {
    std::vector<std::uint8_t> out{'E', 'M', 'B', 'C'};
    out.reserve(container_size());
    out.push_back(kContainerVersion);
    out.push_back(header.codec_wire_id);
    put_u16(out, header.original_height);
    put_u16(out, header.original_width);
    put_u16(out, header.encoded_height);
    put_u16(out, header.encoded_width);
    out.push_back(header.quality);
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bitstream Bitstream::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kContainerHeaderBytes)
        fail(ErrorKind::decode, "decode failed at container stage: header truncated");
    if (std::memcmp(bytes.data(), "EMBC", 4) != 0)
        fail(ErrorKind::decode, "decode failed at container stage: bad magic");
    if (bytes[4] != kContainerVersion)
        fail(ErrorKind::decode, "decode failed at container stage: unsupported version");
    Bitstream bs;
    bs.header.codec_wire_id = bytes[5];
    bs.header.original_height = get_u16(bytes, 6);
    bs.header.original_width = get_u16(bytes, 8);
    bs.header.encoded_height = get_u16(bytes, 10);
    bs.header.encoded_width = get_u16(bytes, 12);
    bs.header.quality = bytes[14];
    const std::uint32_t len = get_u32(bytes, 15);
    if (bytes.size() - kContainerHeaderBytes != len)
        fail(ErrorKind::decode, "decode failed at container stage: payload length mismatch");
    bs.payload.assign(bytes.begin() + kContainerHeaderBytes, bytes.end());
    return bs;
}

// ----------------------------------------------------------------- registry

namespace {

std::vector<std::uint8_t> identity_encode(const RasterImage& image, int) {
    return {image.bytes().begin(), image.bytes().end()};
}

RasterImage identity_decode(std::span<const std::uint8_t> payload, int w, int h, int) {
    if (payload.size() != static_cast<std::size_t>(w) * h * 3)
        fail(ErrorKind::decode, "decode failed at payload stage: raw frame size mismatch");
    return RasterImage(w, h, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

class Registry {
public:
    Registry() {
        CodecDescriptor identity{std::string(kIdentityCodecId), identity_encode, identity_decode, {}, true, 0};
        CodecDescriptor native{std::string(kNativeCodecId), dct::encode_payload, dct::decode_payload,
                               dct::prepare, false, 1};
        insert(std::move(identity));
        insert(std::move(native));
    }

    void add(CodecDescriptor d) {
        std::lock_guard lock(mu_);
        if (d.id.empty())
            fail(ErrorKind::registration, "codec id must be non-empty");
        if (by_id_.contains(d.id))
            fail(ErrorKind::registration, "codec '" + d.id + "' is already registered");
        if (!d.encode || !d.decode)
            fail(ErrorKind::registration, "codec '" + d.id + "' needs both an encoder and a decoder");
        if (next_wire_id_ == 0)
            fail(ErrorKind::registration, "codec wire id space exhausted");
        d.wire_id = next_wire_id_++;
        insert(std::move(d));
    }

    const CodecDescriptor& find(std::string_view id) const {
        std::lock_guard lock(mu_);
        auto it = by_id_.find(std::string(id));
        if (it == by_id_.end())
            fail(ErrorKind::lookup, "unknown codec '" + std::string(id) + "'");
        return *it->second;
    }

    const CodecDescriptor& find(std::uint8_t wire) const {
        std::lock_guard lock(mu_);
        auto it = by_wire_.find(wire);
        if (it == by_wire_.end())
            fail(ErrorKind::lookup, "unknown codec wire id " + std::to_string(wire));
        return *it->second;
    }

    bool contains(std::string_view id) const {
        std::lock_guard lock(mu_);
        return by_id_.contains(std::string(id));
    }

    std::vector<std::string> ids() const {
        std::lock_guard lock(mu_);
        std::vector<std::string> out;
        for (const auto& [k, v] : by_id_)
            out.push_back(k);
        return out;
    }

private:
    void insert(CodecDescriptor d) {
        storage_.push_back(std::move(d));
        const CodecDescriptor* p = &storage_.back();
        by_id_[p->id] = p;
        by_wire_[p->wire_id] = p;
    }

    mutable std::mutex mu_;
    std::deque<CodecDescriptor> storage_; // stable addresses
    std::map<std::string, const CodecDescriptor*> by_id_;
    std::map<std::uint8_t, const CodecDescriptor*> by_wire_;
    std::uint8_t next_wire_id_ = 16;
};

Registry& registry() {
    static Registry r;
    return r;
}

} // namespace

void register_codec(std::string id, EncoderFn encoder, DecoderFn decoder) {
    register_codec(CodecDescriptor{std::move(id), std::move(encoder), std::move(decoder), {}, false, 0});
}

void register_codec(CodecDescriptor descriptor) { registry().add(std::move(descriptor)); }

const CodecDescriptor& codec_by_id(std::string_view id) { return registry().find(id); }

const CodecDescriptor& codec_by_wire_id(std::uint8_t wire_id) { return registry().find(wire_id); }

bool codec_registered(std::string_view id) { return registry().contains(id); }

std::vector<std::string> registered_codec_ids() { return registry().ids(); }

// ------------------------------------------------------------- resampling

namespace {

void check_divisor(int divisor) {
    if (std::find(std::begin(kResolutionLadder), std::end(kResolutionLadder), divisor) ==
        std::end(kResolutionLadder))
        fail(ErrorKind::parameter, "resolution divisor must be one of 1, 2, 4, 8");
}

void check_container_dims(const RasterImage& image) {
    if (image.empty())
        fail(ErrorKind::parameter, "cannot encode an empty image");
    if (image.width() > 0xFFFF || image.height() > 0xFFFF)
        fail(ErrorKind::parameter, "image dimensions exceed the container's 16-bit fields");
}

} // namespace

RasterImage downsample(const RasterImage& image, int divisor) {
    check_divisor(divisor);
    if (divisor == 1)
        return image;
    const int ow = (image.width() + divisor - 1) / divisor;
    const int oh = (image.height() + divisor - 1) / divisor;
    RasterImage out(ow, oh);
    for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
            const int x1 = std::min(image.width(), (ox + 1) * divisor);
            const int y1 = std::min(image.height(), (oy + 1) * divisor);
            unsigned sum[3] = {0, 0, 0};
            unsigned n = 0;
            for (int y = oy * divisor; y < y1; ++y)
                for (int x = ox * divisor; x < x1; ++x, ++n) {
                    const auto* p = image.pixel(x, y);
                    sum[0] += p[0];
                    sum[1] += p[1];
                    sum[2] += p[2];
                }
            // round half up
            out.set(ox, oy,
                    {static_cast<std::uint8_t>((sum[0] + n / 2) / n), static_cast<std::uint8_t>((sum[1] + n / 2) / n),
                     static_cast<std::uint8_t>((sum[2] + n / 2) / n)});
        }
    return out;
}

RasterImage upsample_bilinear(const RasterImage& image, int width, int height) {
    if (width == image.width() && height == image.height())
        return image;
    struct Tap {
        int i0, i1;
        double w;
    };
    auto taps = [](int out_n, int in_n) {
        std::vector<Tap> t(out_n);
        const double s = static_cast<double>(in_n) / out_n;
        for (int i = 0; i < out_n; ++i) {
            const double f = std::clamp((i + 0.5) * s - 0.5, 0.0, static_cast<double>(in_n - 1));
            const int i0 = static_cast<int>(f);
            t[i] = {i0, std::min(i0 + 1, in_n - 1), f - i0};
        }
        return t;
    };
    const auto tx = taps(width, image.width());
    const auto ty = taps(height, image.height());
    const int row = image.width() * 3;
    std::vector<double> blend(row);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y) {
        const Tap& vy = ty[y];
        const auto* r0 = image.pixel(0, vy.i0);
        const auto* r1 = image.pixel(0, vy.i1);
        for (int i = 0; i < row; ++i)
            blend[i] = r0[i] + (r1[i] - r0[i]) * vy.w;
        std::uint8_t* o = px.data() + static_cast<std::size_t>(y) * width * 3;
        for (int x = 0; x < width; ++x) {
            const Tap& vx = tx[x];
            const double* a = blend.data() + vx.i0 * 3;
            const double* b = blend.data() + vx.i1 * 3;
            for (int k = 0; k < 3; ++k)
                o[3 * x + k] = clamp_to_byte(a[k] + (b[k] - a[k]) * vx.w);
        }
    }
    return RasterImage(width, height, std::move(px));
}

double measured_bpp(std::size_t payload_bytes, int height, int width) {
    if (height < 1 || width < 1)
        fail(ErrorKind::parameter, "dimensions must be positive");
    return static_cast<double>(payload_bytes) * 8.0 / (static_cast<double>(height) * width);
}

// ---------------------------------------------------------- encode / decode

namespace {

Bitstream wrap(const CodecDescriptor& codec, const RasterImage& original, const RasterImage& scaled, int quality,
               std::vector<std::uint8_t> payload) {
    Bitstream bs;
    bs.header.codec_wire_id = codec.wire_id;
    bs.header.original_height = static_cast<std::uint16_t>(original.height());
    bs.header.original_width = static_cast<std::uint16_t>(original.width());
    bs.header.encoded_height = static_cast<std::uint16_t>(scaled.height());
    bs.header.encoded_width = static_cast<std::uint16_t>(scaled.width());
    bs.header.quality = static_cast<std::uint8_t>(quality);
    bs.payload = std::move(payload);
    return bs;
}

void check_quality(int quality) {
    if (quality < kMinQuality || quality > kMaxQuality)
        fail(ErrorKind::parameter, "quality must lie in [1, 100]");
}

} // namespace

Bitstream encode(const RasterImage& image, int quality, int resolution_divisor, std::string_view codec_id) {
    check_quality(quality);
    check_container_dims(image);
    const auto& codec = codec_by_id(codec_id);
    const RasterImage scaled = downsample(image, resolution_divisor);
    return wrap(codec, image, scaled, quality, codec.encode(scaled, quality));
}

RasterImage decode(const Bitstream& bs) {
    const auto& h = bs.header;
    if (h.encoded_width == 0 || h.encoded_height == 0 || h.original_width == 0 || h.original_height == 0)
        fail(ErrorKind::decode, "decode failed at container stage: zero dimension");
    if (h.quality < kMinQuality || h.quality > kMaxQuality)
        fail(ErrorKind::decode, "decode failed at container stage: quality out of range");
    const auto& codec = codec_by_wire_id(h.codec_wire_id);
    RasterImage img = codec.decode(bs.payload, h.encoded_width, h.encoded_height, h.quality);
    if (img.width() != h.encoded_width || img.height() != h.encoded_height)
        fail(ErrorKind::decode, "decode failed at payload stage: decoder returned wrong dimensions");
    return upsample_bilinear(img, h.original_width, h.original_height);
}

// ------------------------------------------------------------- transcoding

TranscodeResult transcode_under_budget(const RasterImage& image, BppBudget budget, std::string_view codec_id) {
    if (!(budget.target_bpp >= 0.0))
        fail(ErrorKind::parameter, "budget must be nonnegative");
    check_container_dims(image);
    const auto& codec = codec_by_id(codec_id);
    const int h = image.height();
    const int w = image.width();

    if (codec.reference) {
        TranscodeResult r;
        r.decoded = decode(wrap(codec, image, image, kMaxQuality, codec.encode(image, kMaxQuality)));
        r.payload_bytes = image.pixel_count() * 3;
        r.achieved_bpp = measured_bpp(r.payload_bytes, h, w);
        r.chosen = {kMaxQuality, 1};
        return r;
    }

    double floor_bpp = std::numeric_limits<double>::infinity();
    for (int divisor : kResolutionLadder) {
        const RasterImage scaled = downsample(image, divisor);
        PreparedEncoderFn enc = codec.prepare ? codec.prepare(scaled)
                                              : PreparedEncoderFn([&codec, &scaled](int q) { return codec.encode(scaled, q); });

        std::map<int, std::vector<std::uint8_t>> probes;
        auto probe = [&](int q) -> const std::vector<std::uint8_t>& {
            auto it = probes.find(q);
            if (it == probes.end())
                it = probes.emplace(q, enc(q)).first;
            return it->second;
        };
        auto feasible = [&](int q) {
            return measured_bpp(kContainerHeaderBytes + probe(q).size(), h, w) <= budget.target_bpp;
        };

        if (!feasible(kMinQuality)) {
            floor_bpp = std::min(floor_bpp, measured_bpp(kContainerHeaderBytes + probe(kMinQuality).size(), h, w));
            continue;
        }
        int lo = kMinQuality, hi = kMaxQuality + 1; // lo feasible, hi not
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (feasible(mid))
                lo = mid;
            else
                hi = mid;
        }
        const int best = lo;

        Bitstream bs = wrap(codec, image, scaled, best, probe(best));
        TranscodeResult r;
        r.payload_bytes = bs.container_size();
        r.achieved_bpp = measured_bpp(r.payload_bytes, h, w);
        if (r.achieved_bpp > budget.target_bpp)
            fail(ErrorKind::protocol, "transcode confirmation encode exceeded the budget");
        r.chosen = {best, divisor};
        r.decoded = decode(bs);
        return r;
    }
    throw InfeasibleBudget(budget.target_bpp, floor_bpp);
}

} // namespace embc
