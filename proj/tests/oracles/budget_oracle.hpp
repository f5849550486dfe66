#pragma once

#include <cmath>

namespace oracle {

// bits/s per agent and bits per pixel, in long double.
inline long double budget_bpp(long double bandwidth_hz, int agents, long double snr_db, long double seconds = 0.1L,
                              long double efficiency = 1.0L, int h = 256, int w = 256) {
    const long double snr = std::pow(10.0L, snr_db / 10.0L);
    const long double bps = bandwidth_hz / agents * std::log2(1.0L + snr);
    return seconds * (efficiency * bps / 2.0L) / (static_cast<long double>(h) * w);
}

} // namespace oracle
