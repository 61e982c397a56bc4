#pragma once

#include <optional>
#include <string>
#include <utility>

namespace ntnsim::dimensioning {

enum class Direction { downlink, uplink };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

struct AirInterfaceConfig {
    double bandwidth_mhz = 100.0;
    int scs_khz = 60;          // one of 15/30/60/120
    int n_prb = 132;
    int n_symbols = 14;        // N
    int n_layers = 1;          // L
    int bitwidth = 14;         // BTW, bits per I or Q sample
    int modulation_order = 6;  // bits per symbol (2/4/6/8)
    Direction direction = Direction::downlink;

    bool operator==(const AirInterfaceConfig&) const = default;

    double slot_duration_s() const;  // T_s = 1 ms * 15 / scs
    void validate() const;
};

struct DataRate {
    double bps = 0.0;
};

enum class InterfaceClass { OFH, F1_U, F1_C, E1, E2, A1, O1, N2, N3, N4, N6, N9, inter_RIC };

std::string to_string(InterfaceClass cls);
InterfaceClass interface_class_from_string(const std::string& s);

struct LatencyBudget {
    InterfaceClass interface_class = InterfaceClass::OFH;
    // One-way path budget; absent = unbounded (overridable by scenario config).
    std::optional<double> max_one_way_s;
    // Control-loop window (min, max) where the class closes a loop.
    std::optional<std::pair<double, double>> loop_window_s;
};

// Control signaling rate, anchored at 1.856 Mbps for (20 MHz, 64-QAM, 2 layers),
// scaling linearly with bandwidth, modulation order and layers.
DataRate fronthaul_control_rate(const AirInterfaceConfig& cfg);

// BR = M * N * L * BTW * 2 / T_s + CR, with M = 12 * n_prb.
DataRate fronthaul_bit_rate(const AirInterfaceConfig& cfg);

// BR = PR + CR. PR anchored at 150 Mbps DL (20 MHz, 64-QAM, 2 layers) and
// 50 Mbps UL (20 MHz, 16-QAM, 1 layer); CR constant 24 Mbps DL / 16 Mbps UL.
DataRate midhaul_bit_rate(const AirInterfaceConfig& cfg);

LatencyBudget latency_budget(InterfaceClass cls);

// Largest n with n * per_hop <= budget.
int max_hops_within_budget(double budget_s, double per_hop_s);

}  // namespace ntnsim::dimensioning
