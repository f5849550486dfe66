#pragma once

#include <cstdint>
#include <random>

namespace embc {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so samples are mapped to reals by hand to stay portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::mt19937_64 engine_;
};

} // namespace embc
