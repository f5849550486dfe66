#include "embc/codec.hpp"
#include "embc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

// Baseline block-DCT codec: BT.601 YCbCr 4:4:4, 8x8 orthonormal DCT, scaled
// Annex-K quantization tables, zigzag scan, (run, size) prefix codes from the
// fixed Annex-K Huffman tables. Fully-predicted blocks (DC equal to the
// running predictor, no AC energy) are collapsed into Exp-Golomb skip runs.

namespace embc::dct {

namespace {

constexpr int kBlock = 8;
constexpr int kBlockSize = 64;
// The DC term always uses this step: a uniform block then reconstructs to
// within 1/8 of a level per YCbCr channel, which survives the colour
// transform and rounding exactly.
constexpr int kDcStep = 2;

constexpr std::array<std::uint8_t, 64> kZigZag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

constexpr std::array<std::uint8_t, 64> kBaseLuma = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<std::uint8_t, 64> kBaseChroma = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

struct HuffmanSpec {
    std::array<std::uint8_t, 16> counts;
    std::vector<std::uint8_t> symbols;
};

const HuffmanSpec kDcLuma{{0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
                          {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
const HuffmanSpec kDcChroma{{0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
                            {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
const HuffmanSpec kAcLuma{
    {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125},
    {0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61,
     0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52,
     0xD1, 0xF0, 0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25,
     0x26, 0x27, 0x28, 0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45,
     0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64,
     0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x83,
     0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99,
     0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
     0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3,
     0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8,
     0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA}};
const HuffmanSpec kAcChroma{
    {0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119},
    {0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61,
     0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91, 0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33,
     0x52, 0xF0, 0x15, 0x62, 0x72, 0xD1, 0x0A, 0x16, 0x24, 0x34, 0xE1, 0x25, 0xF1, 0x17, 0x18,
     0x19, 0x1A, 0x26, 0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44,
     0x45, 0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63,
     0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A,
     0x82, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97,
     0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4,
     0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA,
     0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7,
     0xE8, 0xE9, 0xEA, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA}};

struct Code {
    std::uint16_t bits = 0;
    std::uint8_t length = 0;
};

// Canonical code assignment plus the decode-side bounds per code length.
struct HuffmanTable {
    std::array<Code, 256> encode{};
    std::array<int, 17> min_code{};
    std::array<int, 17> max_code{};
    std::array<int, 17> first_index{};
    std::vector<std::uint8_t> symbols;

    explicit HuffmanTable(const HuffmanSpec& spec) : symbols(spec.symbols) {
        int code = 0;
        int k = 0;
        for (int len = 1; len <= 16; ++len) {
            const int n = spec.counts[len - 1];
            first_index[len] = k;
            min_code[len] = code;
            for (int i = 0; i < n; ++i, ++k, ++code)
                encode[spec.symbols[k]] = {static_cast<std::uint16_t>(code), static_cast<std::uint8_t>(len)};
            max_code[len] = n > 0 ? code - 1 : -1;
            code <<= 1;
        }
    }
};

const HuffmanTable& table_dc(bool chroma) {
    static const HuffmanTable luma(kDcLuma), chr(kDcChroma);
    return chroma ? chr : luma;
}
const HuffmanTable& table_ac(bool chroma) {
    static const HuffmanTable luma(kAcLuma), chr(kAcChroma);
    return chroma ? chr : luma;
}

struct CosineBasis {
    double c[kBlock][kBlock]; // c[u][x]
    CosineBasis() {
        for (int u = 0; u < kBlock; ++u) {
            const double a = u == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
            for (int x = 0; x < kBlock; ++x)
                c[u][x] = a * std::cos((2 * x + 1) * u * std::numbers::pi / (2.0 * kBlock));
        }
    }
};

const CosineBasis& basis() {
    static const CosineBasis b;
    return b;
}

// 1-D 8-point transforms split into even and odd halves: c[u][7-x] equals
// c[u][x] for even u and -c[u][x] for odd u.
inline void fdct8(const double* in, std::ptrdiff_t stride, double* out, std::ptrdiff_t ostride) {
    const auto& c = basis().c;
    double s[4], d[4];
    for (int x = 0; x < 4; ++x) {
        s[x] = in[x * stride] + in[(7 - x) * stride];
        d[x] = in[x * stride] - in[(7 - x) * stride];
    }
    for (int u = 0; u < kBlock; u += 2) {
        out[u * ostride] = c[u][0] * s[0] + c[u][1] * s[1] + c[u][2] * s[2] + c[u][3] * s[3];
        out[(u + 1) * ostride] =
            c[u + 1][0] * d[0] + c[u + 1][1] * d[1] + c[u + 1][2] * d[2] + c[u + 1][3] * d[3];
    }
}

inline void idct8(const double* in, std::ptrdiff_t stride, double* out, std::ptrdiff_t ostride) {
    const auto& c = basis().c;
    for (int x = 0; x < 4; ++x) {
        const double e = c[0][x] * in[0] + c[2][x] * in[2 * stride] + c[4][x] * in[4 * stride] +
                         c[6][x] * in[6 * stride];
        const double o = c[1][x] * in[stride] + c[3][x] * in[3 * stride] + c[5][x] * in[5 * stride] +
                         c[7][x] * in[7 * stride];
        out[x * ostride] = e + o;
        out[(7 - x) * ostride] = e - o;
    }
}

void forward_dct(const double* in, double* out) {
    double tmp[kBlockSize];
    for (int y = 0; y < kBlock; ++y)
        fdct8(in + y * kBlock, 1, tmp + y * kBlock, 1);
    for (int u = 0; u < kBlock; ++u)
        fdct8(tmp + u, kBlock, out + u, kBlock);
}

void inverse_dct(const double* in, double* out) {
    double tmp[kBlockSize];
    for (int v = 0; v < kBlock; ++v)
        idct8(in + v * kBlock, 1, tmp + v * kBlock, 1);
    for (int x = 0; x < kBlock; ++x)
        idct8(tmp + x, kBlock, out + x, kBlock);
}

int padded(int n) { return (n + kBlock - 1) / kBlock * kBlock; }

// Unquantized DCT coefficients of one colour plane, 64 per block.
struct Plane {
    std::vector<double> coeffs;
};

struct Analysis {
    int blocks_x = 0;
    int blocks_y = 0;
    std::array<Plane, 3> planes;
};

Analysis analyze(const RasterImage& image) {
    Analysis a;
    const int w = image.width();
    const int h = image.height();
    const int pw = padded(w);
    const int ph = padded(h);
    a.blocks_x = pw / kBlock;
    a.blocks_y = ph / kBlock;
    const std::size_t nblocks = static_cast<std::size_t>(a.blocks_x) * a.blocks_y;

    // Edge-replicated, level-shifted YCbCr planes.
    std::array<std::vector<double>, 3> level;
    for (auto& p : level)
        p.resize(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::min(y, h - 1);
        for (int x = 0; x < pw; ++x) {
            const auto* px = image.pixel(std::min(x, w - 1), sy);
            const double r = px[0], g = px[1], b = px[2];
            const std::size_t i = static_cast<std::size_t>(y) * pw + x;
            level[0][i] = luma601(r, g, b) - 128.0;
            level[1][i] = cb601(r, g, b) - 128.0;
            level[2][i] = cr601(r, g, b) - 128.0;
        }
    }

    double block[kBlockSize];
    for (int c = 0; c < 3; ++c) {
        auto& out = a.planes[c].coeffs;
        out.resize(nblocks * kBlockSize);
        for (int by = 0; by < a.blocks_y; ++by)
            for (int bx = 0; bx < a.blocks_x; ++bx) {
                for (int y = 0; y < kBlock; ++y)
                    for (int x = 0; x < kBlock; ++x)
                        block[y * kBlock + x] =
                            level[c][static_cast<std::size_t>(by * kBlock + y) * pw + bx * kBlock + x];
                const std::size_t b = static_cast<std::size_t>(by) * a.blocks_x + bx;
                forward_dct(block, out.data() + b * kBlockSize);
            }
    }
    return a;
}

class BitWriter {
public:
    void put(std::uint32_t value, int length) {
        if (length == 0)
            return;
        acc_ = (acc_ << length) | (value & ((1ull << length) - 1));
        filled_ += length;
        while (filled_ >= 8) {
            filled_ -= 8;
            out_.push_back(static_cast<std::uint8_t>(acc_ >> filled_));
        }
    }
    void put(Code c) { put(c.bits, c.length); }

    // Exp-Golomb, order 0.
    void put_ue(std::uint32_t v) {
        const std::uint32_t x = v + 1;
        int len = 0;
        while ((x >> len) > 1)
            ++len;
        put(0, len);
        put(x, len + 1);
    }

    std::vector<std::uint8_t> finish() {
        if (filled_ > 0)
            out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - filled_)));
        filled_ = 0;
        acc_ = 0;
        return std::move(out_);
    }

private:
    std::vector<std::uint8_t> out_;
    std::uint64_t acc_ = 0;
    int filled_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

    int bit() {
        if (pos_ >= data_.size() * 8)
            fail(ErrorKind::decode, "decode failed at entropy stage: payload truncated");
        const int b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }
    std::uint32_t bits(int n) {
        std::uint32_t v = 0;
        for (int i = 0; i < n; ++i)
            v = (v << 1) | static_cast<std::uint32_t>(bit());
        return v;
    }
    std::uint32_t ue() {
        int zeros = 0;
        while (bit() == 0)
            if (++zeros > 31)
                fail(ErrorKind::decode, "decode failed at run-length stage: malformed skip run");
        return ((1u << zeros) | bits(zeros)) - 1;
    }
    std::uint8_t symbol(const HuffmanTable& t) {
        int code = 0;
        for (int len = 1; len <= 16; ++len) {
            code = (code << 1) | bit();
            if (t.max_code[len] >= 0 && code <= t.max_code[len] && code >= t.min_code[len])
                return t.symbols[t.first_index[len] + code - t.min_code[len]];
        }
        fail(ErrorKind::decode, "decode failed at entropy stage: invalid prefix code");
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

int magnitude_category(int v) {
    int a = v < 0 ? -v : v;
    int n = 0;
    while (a > 0) {
        a >>= 1;
        ++n;
    }
    return n;
}

void put_magnitude(BitWriter& w, int v, int size) {
    if (size == 0)
        return;
    const int bits = v >= 0 ? v : v + (1 << size) - 1;
    w.put(static_cast<std::uint32_t>(bits), size);
}

int read_magnitude(BitReader& r, int size) {
    if (size == 0)
        return 0;
    const int bits = static_cast<int>(r.bits(size));
    return bits >= (1 << (size - 1)) ? bits : bits - (1 << size) + 1;
}

int quantize(double c, double inverse_step, int limit) {
    const double q = std::round(c * inverse_step);
    return static_cast<int>(std::clamp(q, -static_cast<double>(limit), static_cast<double>(limit)));
}

std::vector<std::uint8_t> entropy_code(const Analysis& a, int quality) {
    const std::size_t nblocks = static_cast<std::size_t>(a.blocks_x) * a.blocks_y;
    BitWriter w;
    std::vector<int> q(nblocks * kBlockSize);
    std::vector<char> skip(nblocks);

    for (int c = 0; c < 3; ++c) {
        const bool chroma = c > 0;
        const auto table = quant_table(quality, chroma);
        const auto& coeffs = a.planes[c].coeffs;
        double inverse[kBlockSize];
        for (int k = 0; k < kBlockSize; ++k)
            inverse[k] = 1.0 / table[k];
        for (std::size_t b = 0; b < coeffs.size(); b += kBlockSize)
            for (int k = 0; k < kBlockSize; ++k)
                q[b + k] = quantize(coeffs[b + k], inverse[k], 1023);
        int pred = 0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const int* blk = q.data() + b * kBlockSize;
            bool s = blk[0] == pred;
            for (int k = 1; s && k < kBlockSize; ++k)
                s = blk[k] == 0;
            skip[b] = s;
            pred = blk[0];
        }

        const auto& dc = table_dc(chroma);
        const auto& ac = table_ac(chroma);
        pred = 0;
        std::size_t pos = 0;
        while (pos < nblocks) {
            std::size_t run = 0;
            while (pos + run < nblocks && skip[pos + run])
                ++run;
            w.put_ue(static_cast<std::uint32_t>(run));
            pos += run;
            if (pos == nblocks)
                break;

            const int* blk = q.data() + pos * kBlockSize;
            const int diff = blk[0] - pred;
            pred = blk[0];
            const int dsize = magnitude_category(diff);
            w.put(dc.encode[dsize]);
            put_magnitude(w, diff, dsize);

            int zeros = 0;
            for (int k = 1; k < kBlockSize; ++k) {
                const int v = blk[kZigZag[k]];
                if (v == 0) {
                    ++zeros;
                    continue;
                }
                while (zeros >= 16) {
                    w.put(ac.encode[0xF0]);
                    zeros -= 16;
                }
                const int size = magnitude_category(v);
                w.put(ac.encode[(zeros << 4) | size]);
                put_magnitude(w, v, size);
                zeros = 0;
            }
            if (zeros > 0)
                w.put(ac.encode[0x00]);
            ++pos;
        }
    }
    return w.finish();
}

} // namespace

std::array<std::uint16_t, 64> quant_table(int quality, bool chroma) {
    if (quality < kMinQuality || quality > kMaxQuality)
        fail(ErrorKind::parameter, "quality must lie in [1, 100]");
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    const auto& base = chroma ? kBaseChroma : kBaseLuma;
    std::array<std::uint16_t, 64> t{};
    for (int i = 0; i < kBlockSize; ++i)
        t[i] = static_cast<std::uint16_t>(std::clamp((base[i] * scale + 50) / 100, 1, 255));
    t[0] = kDcStep;
    return t;
}

std::vector<std::uint8_t> encode_payload(const RasterImage& image, int quality) {
    if (quality < kMinQuality || quality > kMaxQuality)
        fail(ErrorKind::parameter, "quality must lie in [1, 100]");
    return entropy_code(analyze(image), quality);
}

PreparedEncoderFn prepare(const RasterImage& image) {
    auto a = std::make_shared<const Analysis>(analyze(image));
    return [a](int quality) {
        if (quality < kMinQuality || quality > kMaxQuality)
            fail(ErrorKind::parameter, "quality must lie in [1, 100]");
        return entropy_code(*a, quality);
    };
}

RasterImage decode_payload(std::span<const std::uint8_t> payload, int width, int height, int quality) {
    const int pw = padded(width);
    const int ph = padded(height);
    const int bx_count = pw / kBlock;
    const std::size_t nblocks = static_cast<std::size_t>(bx_count) * (ph / kBlock);

    BitReader r(payload);
    std::array<std::vector<double>, 3> planes;
    double coeff[kBlockSize];
    double spatial[kBlockSize];

    for (int c = 0; c < 3; ++c) {
        const bool chroma = c > 0;
        const auto table = quant_table(quality, chroma);
        const auto& dc = table_dc(chroma);
        const auto& ac = table_ac(chroma);
        auto& plane = planes[c];
        plane.assign(static_cast<std::size_t>(pw) * ph, 0.0);

        auto emit = [&](std::size_t b, const int* blk) {
            for (int k = 0; k < kBlockSize; ++k)
                coeff[k] = static_cast<double>(blk[k]) * table[k];
            inverse_dct(coeff, spatial);
            const std::size_t by = b / bx_count, bx = b % bx_count;
            for (int y = 0; y < kBlock; ++y)
                for (int x = 0; x < kBlock; ++x)
                    plane[(by * kBlock + y) * pw + bx * kBlock + x] = spatial[y * kBlock + x];
        };

        int pred = 0;
        std::size_t pos = 0;
        int blk[kBlockSize];
        while (pos < nblocks) {
            const std::uint32_t run = r.ue();
            if (run > nblocks - pos)
                fail(ErrorKind::decode, "decode failed at run-length stage: skip run overruns plane");
            std::fill(blk, blk + kBlockSize, 0);
            blk[0] = pred;
            for (std::uint32_t i = 0; i < run; ++i)
                emit(pos + i, blk);
            pos += run;
            if (pos == nblocks)
                break;

            std::fill(blk, blk + kBlockSize, 0);
            const int dsize = r.symbol(dc);
            if (dsize > 11)
                fail(ErrorKind::decode, "decode failed at entropy stage: DC category out of range");
            pred += read_magnitude(r, dsize);
            blk[0] = pred;
            int k = 1;
            while (k < kBlockSize) {
                const std::uint8_t sym = r.symbol(ac);
                if (sym == 0x00)
                    break;
                if (sym == 0xF0) {
                    k += 16;
                    continue;
                }
                k += sym >> 4;
                if (k >= kBlockSize)
                    fail(ErrorKind::decode, "decode failed at coefficient stage: AC index overflow");
                blk[kZigZag[k]] = read_magnitude(r, sym & 0x0F);
                ++k;
            }
            if (k > kBlockSize)
                fail(ErrorKind::decode, "decode failed at coefficient stage: AC index overflow");
            emit(pos, blk);
            ++pos;
        }
    }

    RasterImage out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * pw + x;
            const double Y = planes[0][i] + 128.0;
            const double cb = planes[1][i];
            const double cr = planes[2][i];
            out.set(x, y,
                    {clamp_to_byte(Y + 1.402 * cr), clamp_to_byte(Y - 0.344136 * cb - 0.714136 * cr),
                     clamp_to_byte(Y + 1.772 * cb)});
        }
    return out;
}

} // namespace embc::dct
