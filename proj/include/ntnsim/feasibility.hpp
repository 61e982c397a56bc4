#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsim/dimensioning.hpp"
#include "ntnsim/placement.hpp"
#include "ntnsim/topology.hpp"

namespace ntnsim::feasibility {

struct TrafficConfig {
    dimensioning::AirInterfaceConfig air;
    double feeder_capacity_bps = 10e9;
    double isl_capacity_bps = 10e9;
    // Required rate for interface classes the rate model does not cover
    // (everything except OFH and F1); per-class overrides win.
    double default_signaling_rate_bps = 1e6;
    std::map<dimensioning::InterfaceClass, double> rate_override_bps;
    double terrestrial_one_way_s = 0.0;

    bool operator==(const TrafficConfig&) const = default;

    void validate() const;
    double required_rate_bps(dimensioning::InterfaceClass cls) const;
};

struct ResourceModel {
    double power_budget_per_sat_w = 1000.0;
    std::map<placement::FunctionKind, double> power_cost_w;
    // Composite figures: a node hosting the complete gNB stack draws the
    // full-gNB power instead of the per-function sum; feeder-capable
    // satellites additionally carry the modem draw.
    double full_gnb_power_w = 78.6;
    double feeder_modem_power_w = 55.9;

    double compute_budget_per_sat = 1000.0;
    std::map<placement::FunctionKind, double> compute_cost;
    double full_gnb_overhead_factor = 1.55;  // must stay within [1.55, 1.70]

    bool operator==(const ResourceModel&) const = default;

    static ResourceModel defaults();
    void validate() const;
    double power_of(placement::FunctionKind kind) const;
    double compute_of(placement::FunctionKind kind) const;
};

struct EvalOptions {
    std::map<dimensioning::InterfaceClass, double> budget_override_s;
    double e2_processing_s = 1e-3;
    // When set, E2/inter_RIC loops that miss the strict near-RT window are
    // violations rather than advisory flags.
    bool require_strict_nearrt = false;

    bool operator==(const EvalOptions&) const = default;
};

enum class Verdict { feasible, infeasible };

std::string to_string(Verdict v);

struct LinkReport {
    placement::LogicalLink link;
    double required_bps = 0.0;
    std::optional<double> capacity_bps;  // absent = unbounded segment
    double one_way_delay_s = 0.0;
    std::optional<double> budget_s;  // absent = unbounded class
    bool reachable = true;
    Verdict verdict = Verdict::feasible;
    std::optional<double> margin_s;    // budget - delay
    std::optional<double> margin_bps;  // capacity - required
    // E2/inter_RIC only: loop latency and strict near-RT capability.
    std::optional<double> loop_latency_s;
    std::optional<bool> strict_capable;

    bool operator==(const LinkReport&) const = default;
};

struct NodeReport {
    std::string node;
    double power_used_w = 0.0;
    double power_budget_w = 0.0;
    double compute_used = 0.0;
    double compute_budget = 0.0;
    Verdict verdict = Verdict::feasible;

    bool operator==(const NodeReport&) const = default;
};

struct Violation {
    std::string kind;     // e.g. "latency-budget", "capacity", "unreachable", "node-power"
    std::string subject;  // link id or node id
    std::string detail;

    bool operator==(const Violation&) const = default;
};

struct FeasibilityReport {
    double time_s = 0.0;
    std::vector<LinkReport> per_link;
    std::vector<NodeReport> per_node;
    Verdict overall = Verdict::feasible;
    std::vector<Violation> violations;

    bool operator==(const FeasibilityReport&) const = default;
};

// Loop latency for an E2 (or Ext I inter_RIC) link.
double e2_loop_latency_s(double one_way_s, double processing_s);

NodeReport node_resource_check(const std::string& node,
                               const std::vector<placement::FunctionKind>& functions,
                               const ResourceModel& resources, bool feeder_capable);

FeasibilityReport evaluate_snapshot(const placement::PlacementSpec& spec,
                                    const topology::IslTopology& topo,
                                    const topology::RoutingTable& table,
                                    const std::vector<orbital::GroundSite>& sites,
                                    const TrafficConfig& traffic, const ResourceModel& resources,
                                    double t_s, const EvalOptions& opts = {});

struct WindowResult {
    std::vector<FeasibilityReport> steps;
    double availability = 0.0;  // fraction of steps with overall feasible
    std::map<dimensioning::InterfaceClass, double> worst_margin_s;
};

WindowResult evaluate_window(const placement::PlacementSpec& spec,
                             const orbital::ConstellationConfig& constellation,
                             const std::vector<orbital::GroundSite>& sites,
                             const topology::TopologyPolicy& policy, const TrafficConfig& traffic,
                             const ResourceModel& resources, double t0_s, double t1_s,
                             double step_s, const EvalOptions& opts = {},
                             double routing_epoch_s = 15.0);

// CSV time series: one row per link per step.
inline constexpr const char* kCsvHeader =
    "time_s,link_id,class,segment,delay_us,budget_us,req_bps,cap_bps,verdict";
void write_csv(const std::vector<FeasibilityReport>& steps, std::ostream& os);

nlohmann::json to_json(const FeasibilityReport& report);
FeasibilityReport report_from_json(const nlohmann::json& j);

}  // namespace ntnsim::feasibility
