#include "embc/channel_budget.hpp"

#include "embc/error.hpp"

#include <cmath>

namespace embc {

void ChannelModel::validate() const {
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
        fail(ErrorKind::parameter, "bandwidth_hz must be positive");
    if (agent_count < 1)
        fail(ErrorKind::parameter, "agent_count must be at least 1");
    if (!std::isfinite(snr_db))
        fail(ErrorKind::parameter, "snr_db must be finite");
    if (!(transmission_time_s >= 0.0) || !std::isfinite(transmission_time_s))
        fail(ErrorKind::parameter, "transmission_time_s must be nonnegative");
    if (!(spectral_efficiency > 0.0 && spectral_efficiency <= 1.0))
        fail(ErrorKind::parameter, "spectral_efficiency must lie in (0, 1]");
    if (image_height_px < 1 || image_width_px < 1)
        fail(ErrorKind::parameter, "image dimensions must be positive");
}

double channel_bps(const ChannelModel& model) {
    model.validate();
    const double snr_linear = std::pow(10.0, model.snr_db / 10.0);
    return model.bandwidth_hz / model.agent_count * std::log2(1.0 + snr_linear);
}

BppBudget bpp_budget(const ChannelModel& model) {
    const double bps = channel_bps(model);
    const double pixels = static_cast<double>(model.image_height_px) * model.image_width_px;
    // Half of the spectrally-efficient rate is available to the uplink image.
    return {model.transmission_time_s * (model.spectral_efficiency * bps / 2.0) / pixels};
}

namespace {
ChannelModel preset(int agents, double snr_db) {
    ChannelModel m;
    m.agent_count = agents;
    m.snr_db = snr_db;
    return m;
}
} // namespace

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> table = {
        {"ideal", preset(10, 30.0), 0.137},
        {"assisted_living", preset(15, 20.0), 0.061},
        {"smart_office", preset(35, 24.0), 0.031},
        {"micro_market", preset(40, 20.0), 0.023},
        {"vineyard", preset(30, 15.0), 0.023},
        {"extreme", preset(50, 15.0), 0.014},
    };
    return table;
}

ChannelModel scenario_preset(std::string_view name) {
    for (const auto& s : scenarios())
        if (s.name == name)
            return s.model;
    fail(ErrorKind::lookup, "unknown scenario '" + std::string(name) + "'");
}

std::vector<BppBudget> benchmark_bpp_grid() {
    return {{0.015}, {0.03}, {0.06}, {0.1}};
}

} // namespace embc
