#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace embc {

// Shared wireless link feeding one image per agent per transmission window.
struct ChannelModel {
    double bandwidth_hz = 180'000.0; // NB-IoT channel
    int agent_count = 1;
    double snr_db = 0.0;
    double transmission_time_s = 0.1;
    double spectral_efficiency = 1.0;
    int image_height_px = 256;
    int image_width_px = 256;

    // Throws ErrorKind::parameter when a field is outside its domain.
    // transmission_time_s == 0 is accepted and yields a zero budget.
    void validate() const;
};

struct BppBudget {
    double target_bpp = 0.0;

    friend bool operator==(const BppBudget&, const BppBudget&) = default;
    friend auto operator<=>(const BppBudget&, const BppBudget&) = default;
};

double channel_bps(const ChannelModel& model);
BppBudget bpp_budget(const ChannelModel& model);

struct Scenario {
    std::string name;
    ChannelModel model;
    double published_bpp; // value quoted alongside the scenario
};

const std::vector<Scenario>& scenarios();
ChannelModel scenario_preset(std::string_view name);

// The four operating points every benchmark sweep uses, ascending.
std::vector<BppBudget> benchmark_bpp_grid();

} // namespace embc
