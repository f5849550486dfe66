#pragma once

// Frozen surrogate-policy constants. Bump kCalibrationVersion whenever any
// value below changes; benchmark outputs are only comparable within a version.

#include <string_view>

namespace embc::calibration {

inline constexpr std::string_view kCalibrationVersion = "embc-calib-1";

struct ProfileConstants {
    std::string_view name;
    double color_tolerance;
    int min_blob_px;
    double gain;
    double memory_decay;
    double misstep_bias;
};

inline constexpr ProfileConstants kAccurate{"accurate", 60.0, 12, 0.5, 0.97, 0.01};
inline constexpr ProfileConstants kPopular{"popular", 55.0, 16, 0.45, 0.99, 0.008};
inline constexpr ProfileConstants kFast{"fast", 45.0, 20, 0.9, 0.6, 0.015};

// Controller geometry shared by all profiles.
inline constexpr double kAlignTolerance = 0.006;    // m, lateral error accepted before descending/closing
inline constexpr double kHeightTolerance = 0.003;   // m
inline constexpr double kReapproachError = 0.03;    // m, lateral error that aborts a descent
inline constexpr double kDescentSpeed = 0.01;       // m/step while descending onto the target
inline constexpr double kClearance = 0.05;          // m above the object's top while travelling
inline constexpr double kPushHeight = 0.01;         // m above the table
inline constexpr double kPushStandoff = 0.015;      // m gap behind the object before pushing
inline constexpr double kPushOvershoot = 0.10;      // m past the estimate the pusher aims for

} // namespace embc::calibration
