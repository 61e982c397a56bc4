#include "ntnsim/dimensioning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ntnsim::dimensioning {

namespace {

constexpr double kFronthaulControlAnchorBps = 1.856e6;  // 20 MHz, 64-QAM, 2 layers
constexpr double kMidhaulPeakDlAnchorBps = 150e6;       // 20 MHz, 64-QAM, 2 layers
constexpr double kMidhaulPeakUlAnchorBps = 50e6;        // 20 MHz, 16-QAM, 1 layer
constexpr double kMidhaulControlDlBps = 24e6;
constexpr double kMidhaulControlUlBps = 16e6;

constexpr double kOfhBudgetS = 500e-6;
constexpr double kMidhaulFloorS = 1.5e-3;
constexpr double kMidhaulCeilS = 10e-3;
constexpr double kF1cFloorS = 2e-3;
constexpr double kF1cCeilS = 10e-3;
constexpr double kNearRtLoopMinS = 10e-3;
constexpr double kNearRtLoopMaxS = 1.0;

}  // namespace

std::string to_string(Direction d) {
    return d == Direction::downlink ? "downlink" : "uplink";
}

Direction direction_from_string(const std::string& s) {
    if (s == "downlink" || s == "dl") return Direction::downlink;
    if (s == "uplink" || s == "ul") return Direction::uplink;
    throw std::invalid_argument("unknown direction: " + s);
}

double AirInterfaceConfig::slot_duration_s() const {
    return 1e-3 * 15.0 / scs_khz;
}

void AirInterfaceConfig::validate() const {
    if (scs_khz != 15 && scs_khz != 30 && scs_khz != 60 && scs_khz != 120)
        throw std::invalid_argument("scs must be one of 15/30/60/120 kHz");
    if (bandwidth_mhz <= 0.0) throw std::invalid_argument("bandwidth must be > 0");
    if (n_prb <= 0) throw std::invalid_argument("n_prb must be > 0");
    if (n_symbols <= 0) throw std::invalid_argument("n_symbols must be > 0");
    if (n_layers <= 0) throw std::invalid_argument("n_layers must be > 0");
    if (bitwidth <= 0) throw std::invalid_argument("bitwidth must be > 0");
    if (modulation_order != 2 && modulation_order != 4 && modulation_order != 6 &&
        modulation_order != 8)
        throw std::invalid_argument("modulation_order must be one of 2/4/6/8");
}

std::string to_string(InterfaceClass cls) {
    switch (cls) {
        case InterfaceClass::OFH: return "OFH";
        case InterfaceClass::F1_U: return "F1_U";
        case InterfaceClass::F1_C: return "F1_C";
        case InterfaceClass::E1: return "E1";
        case InterfaceClass::E2: return "E2";
        case InterfaceClass::A1: return "A1";
        case InterfaceClass::O1: return "O1";
        case InterfaceClass::N2: return "N2";
        case InterfaceClass::N3: return "N3";
        case InterfaceClass::N4: return "N4";
        case InterfaceClass::N6: return "N6";
        case InterfaceClass::N9: return "N9";
        case InterfaceClass::inter_RIC: return "inter_RIC";
    }
    throw std::logic_error("bad InterfaceClass");
}

InterfaceClass interface_class_from_string(const std::string& s) {
    for (auto cls : {InterfaceClass::OFH, InterfaceClass::F1_U, InterfaceClass::F1_C,
                     InterfaceClass::E1, InterfaceClass::E2, InterfaceClass::A1,
                     InterfaceClass::O1, InterfaceClass::N2, InterfaceClass::N3,
                     InterfaceClass::N4, InterfaceClass::N6, InterfaceClass::N9,
                     InterfaceClass::inter_RIC}) {
        if (to_string(cls) == s) return cls;
    }
    throw std::invalid_argument("unknown interface class: " + s);
}

DataRate fronthaul_control_rate(const AirInterfaceConfig& cfg) {
    cfg.validate();
    return {kFronthaulControlAnchorBps * (cfg.bandwidth_mhz / 20.0) *
            (cfg.modulation_order / 6.0) * (cfg.n_layers / 2.0)};
}

DataRate fronthaul_bit_rate(const AirInterfaceConfig& cfg) {
    cfg.validate();
    const double subcarriers = 12.0 * cfg.n_prb;  // M
    const double data_bps =
        subcarriers * cfg.n_symbols * cfg.n_layers * cfg.bitwidth * 2.0 / cfg.slot_duration_s();
    return {data_bps + fronthaul_control_rate(cfg).bps};
}

DataRate midhaul_bit_rate(const AirInterfaceConfig& cfg) {
    cfg.validate();
    double peak_bps;
    double control_bps;
    if (cfg.direction == Direction::downlink) {
        peak_bps = kMidhaulPeakDlAnchorBps * (cfg.bandwidth_mhz / 20.0) *
                   (cfg.modulation_order / 6.0) * (cfg.n_layers / 2.0);
        control_bps = kMidhaulControlDlBps;
    } else {
        peak_bps = kMidhaulPeakUlAnchorBps * (cfg.bandwidth_mhz / 20.0) *
                   (cfg.modulation_order / 4.0) * (cfg.n_layers / 1.0);
        control_bps = kMidhaulControlUlBps;
    }
    return {peak_bps + control_bps};
}

LatencyBudget latency_budget(InterfaceClass cls) {
    LatencyBudget b;
    b.interface_class = cls;
    switch (cls) {
        case InterfaceClass::OFH:
            b.max_one_way_s = kOfhBudgetS;
            break;
        case InterfaceClass::F1_U:
            b.max_one_way_s = kMidhaulCeilS;
            b.loop_window_s = {kMidhaulFloorS, kMidhaulCeilS};
            break;
        case InterfaceClass::F1_C:
            b.max_one_way_s = kF1cCeilS;
            b.loop_window_s = {kF1cFloorS, kF1cCeilS};
            break;
        case InterfaceClass::E2:
            b.loop_window_s = {kNearRtLoopMinS, kNearRtLoopMaxS};
            break;
        case InterfaceClass::A1:
            b.loop_window_s = {kNearRtLoopMaxS, std::numeric_limits<double>::infinity()};
            break;
        case InterfaceClass::E1:
        case InterfaceClass::O1:
        case InterfaceClass::N2:
        case InterfaceClass::N3:
        case InterfaceClass::N4:
        case InterfaceClass::N6:
        case InterfaceClass::N9:
        case InterfaceClass::inter_RIC:
            break;  // unbounded, scenario-overridable
    }
    return b;
}

int max_hops_within_budget(double budget_s, double per_hop_s) {
    if (per_hop_s <= 0.0) throw std::invalid_argument("per_hop must be > 0");
    if (budget_s < per_hop_s) return 0;
    return static_cast<int>(std::floor(budget_s / per_hop_s + 1e-9));
}

}  // namespace ntnsim::dimensioning
